from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from indexpipe import init

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def station_frame(n_stations=2, n_months=48, start="1990-01", seed=7) -> pd.DataFrame:
    """Synthetic monthly station table shaped like the real ingestion schema."""
    rng = np.random.default_rng(seed)
    periods = pd.period_range(start, periods=n_months, freq="M")
    rows = []
    for s in range(n_stations):
        lat = -18.0 - 4.0 * s
        seasonal = 45.0 + 40.0 * np.cos(2.0 * np.pi * (periods.month - 1) / 12.0)
        prcp = rng.gamma(2.0, seasonal, n_months)
        tavg = 21.0 + 7.0 * np.cos(2.0 * np.pi * (periods.month - 1) / 12.0)
        tavg = tavg + rng.normal(0.0, 1.0, n_months)
        for i, p in enumerate(periods):
            rows.append(
                dict(
                    id=f"ST{s:03d}", ym=p, prcp=float(prcp[i]), tmax=float(tavg[i]) + 6.0,
                    tmin=float(tavg[i]) - 6.0, tavg=float(tavg[i]), long=145.0 + s,
                    lat=lat, name=f"S{s}", month=int(p.month),
                )
            )
    return pd.DataFrame(rows)


def single_series_ctx(values, start="1990-01", entity="A"):
    """One-entity context around a plain value series on a monthly axis."""
    periods = pd.period_range(start, periods=len(values), freq="M")
    df = pd.DataFrame(
        {"id": entity, "ym": periods, "month": periods.month, "x": np.asarray(values, dtype=float)}
    )
    return init(df, id="id", time="ym", group="month")


@pytest.fixture
def station_ctx():
    return init(station_frame(), id="id", time="ym", group="month")


@pytest.fixture
def fixtures_dir():
    return FIXTURES
