import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indexpipe import init, spatial_aggregate, temporal_rolling_window
from indexpipe.errors import EmptyWindowWarning, GapError, MappingError

from conftest import single_series_ctx
from oracles import brute_rolling


def rolled(values, k, stat="sum"):
    ctx = temporal_rolling_window(single_series_ctx(values), "x", k, stat)
    return ctx.table[".agg"].to_numpy()


def test_hand_sum_window():
    assert rolled([1, 2, 3, 4], 2).tolist() == [3, 5, 7]


def test_scale_one_is_identity():
    values = [5.0, 1.5, 2.25, 9.0]
    assert rolled(values, 1).tolist() == values


def test_388_months_scale_24_gives_365_rows():
    values = np.arange(388, dtype=float)
    assert len(rolled(values, 24)) == 388 - 24 + 1 == 365


def test_warmup_rows_dropped_first_time_is_june():
    ctx = temporal_rolling_window(single_series_ctx(np.ones(12), start="1990-01"), "x", 6)
    assert str(ctx.table["ym"].iloc[0]) == "1990-06"


def test_mean_stat():
    assert rolled([2, 4, 6], 2, "mean").tolist() == [3.0, 5.0]


def test_gap_is_hard_error_naming_month():
    periods = pd.PeriodIndex(["1990-01", "1990-02", "1990-04"], freq="M")
    df = pd.DataFrame({"id": "A", "ym": periods, "x": [1.0, 2.0, 3.0]})
    ctx = init(df, id="id", time="ym")
    with pytest.raises(GapError, match="1990-03"):
        temporal_rolling_window(ctx, "x", 2)


def test_window_longer_than_series_warns_and_drops_entity():
    with pytest.warns(EmptyWindowWarning):
        ctx = temporal_rolling_window(single_series_ctx([1.0, 2.0]), "x", 5)
    assert len(ctx.table) == 0


@settings(max_examples=60, deadline=None)
@given(
    values=st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=200),
    k=st.integers(1, 36),
)
def test_matches_brute_force_windows(values, k):
    if len(values) < k:
        with pytest.warns(EmptyWindowWarning):
            got = rolled(values, k)
        assert len(got) == 0
        return
    expected = brute_rolling(values, k)
    got = rolled(values, k)
    assert np.allclose(got, expected, rtol=1e-9, atol=1e-6)


def test_integer_series_match_is_exact_and_telescopes():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(5, 120))
        k = int(rng.integers(1, min(n, 36) + 1))
        values = rng.integers(0, 5000, n).astype(float)
        got = rolled(values, k)
        assert got.tolist() == brute_rolling(values, k)
        # telescoping: agg[t+1] - agg[t] == x[t+1] - x[t-k+1], exact on integers
        for t in range(len(got) - 1):
            assert got[t + 1] - got[t] == values[t + k] - values[t]


def _two_station_frame():
    periods = pd.period_range("2000-01", periods=3, freq="M")
    rows = []
    for sid, val in (("a", 10.0), ("b", 20.0)):
        for p in periods:
            rows.append(dict(id=sid, ym=p, x=val))
    return pd.DataFrame(rows)


def test_spatial_mean_of_two_stations():
    ctx = init(_two_station_frame(), id="id", time="ym")
    out = spatial_aggregate(ctx, {"a": "r1", "b": "r1"}, "x", stat="mean")
    assert out.table["x"].tolist() == [15.0, 15.0, 15.0]
    assert out.table[".n_members"].tolist() == [2, 2, 2]


def test_spatial_identity_mapping_preserves_values():
    ctx = init(_two_station_frame(), id="id", time="ym")
    out = spatial_aggregate(ctx, {"a": "a", "b": "b"}, "x", stat="mean")
    pd.testing.assert_frame_equal(
        out.table[["id", "ym", "x"]], ctx.table[["id", "ym", "x"]]
    )


def test_spatial_sum_preserves_grand_total_per_time():
    rng = np.random.default_rng(9)
    periods = pd.period_range("2000-01", periods=4, freq="M")
    rows = [
        dict(id=f"s{i}", ym=p, x=float(rng.uniform(0, 10)))
        for i in range(5)
        for p in periods
    ]
    df = pd.DataFrame(rows)
    ctx = init(df, id="id", time="ym")
    mapping = {f"s{i}": ("east" if i < 3 else "west") for i in range(5)}
    out = spatial_aggregate(ctx, mapping, "x", stat="sum")
    for p in periods:
        total_in = df.loc[df["ym"] == p, "x"].sum()
        total_out = out.table.loc[out.table["ym"] == p, "x"].sum()
        assert total_out == pytest.approx(total_in, rel=1e-12)


def test_spatial_unmapped_id_is_error():
    ctx = init(_two_station_frame(), id="id", time="ym")
    with pytest.raises(MappingError, match="b"):
        spatial_aggregate(ctx, {"a": "r1"}, "x")


def test_spatial_partial_coverage_records_member_count():
    periods = pd.period_range("2000-01", periods=2, freq="M")
    df = pd.DataFrame(
        [
            dict(id="a", ym=periods[0], x=1.0),
            dict(id="a", ym=periods[1], x=2.0),
            dict(id="b", ym=periods[0], x=5.0),
        ]
    )
    ctx = init(df, id="id", time="ym")
    out = spatial_aggregate(ctx, {"a": "r", "b": "r"}, "x", stat="mean")
    assert out.table[".n_members"].tolist() == [2, 1]
    assert out.table["x"].tolist() == [3.0, 2.0]
