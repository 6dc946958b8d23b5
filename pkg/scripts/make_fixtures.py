#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixtures (deterministic seeds)."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from indexpipe.indexes import gggi_weight_table

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def make_stations(n_stations: int = 2, n_months: int = 120, seed: int = 20230301) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    periods = pd.period_range("1990-01", periods=n_months, freq="M")
    rows = []
    for s in range(n_stations):
        lat = -20.5 - 6.0 * s
        long = 144.5 + 3.0 * s
        seasonal_scale = 45.0 + 40.0 * np.cos(2.0 * np.pi * (periods.month - 1) / 12.0)
        prcp = rng.gamma(2.0, seasonal_scale, n_months)
        tavg = (
            21.0
            + 7.0 * np.cos(2.0 * np.pi * (periods.month - 1) / 12.0)
            - 1.5 * s
            + rng.normal(0.0, 1.0, n_months)
        )
        for i, p in enumerate(periods):
            rows.append(
                {
                    "id": f"ST{s:03d}",
                    "ym": str(p),
                    "prcp": round(float(prcp[i]), 1),
                    "tmax": round(float(tavg[i]) + 6.2, 1),
                    "tmin": round(float(tavg[i]) - 6.2, 1),
                    "tavg": round(float(tavg[i]), 1),
                    "long": long,
                    "lat": lat,
                    "name": f"SYNTH STATION {s}",
                }
            )
    return pd.DataFrame(rows)


def make_gggi(n_countries: int = 16, seed: int = 20230302) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    weights = gggi_weight_table()
    variables = list(weights["variable"])
    rows = []
    for i in range(n_countries):
        base = rng.uniform(0.35, 0.95)
        vals = np.clip(base + rng.normal(0.0, 0.12, len(variables)), 0.02, 1.0)
        row = {"country": f"country_{chr(ord('a') + i)}"}
        row.update({v: round(float(x), 4) for v, x in zip(variables, vals)})
        rows.append(row)
    return pd.DataFrame(rows)


DROUGHT_CONFIG = """\
input:
  path: stations_small.csv
  schema: station_csv
seed: 42
indexes:
  spi:
    scales: [6, 12]
  spei:
    scales: [6, 12]
    dists: [gev, glo]
output:
  path: out/drought.csv
  format: csv
"""


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    stations = make_stations()
    stations.to_csv(FIXTURES / "stations_small.csv", index=False)
    gggi = make_gggi()
    gggi.to_csv(FIXTURES / "gggi_sample.csv", index=False)
    gggi_weight_table().to_csv(FIXTURES / "gggi_weights.csv", index=False)
    (FIXTURES / "drought.yaml").write_text(DROUGHT_CONFIG)
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
