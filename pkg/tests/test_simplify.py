import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indexpipe import (
    Benchmark,
    SimplificationScheme,
    drought_scheme,
    init,
    set_benchmark,
    simplify,
)
from indexpipe.errors import DomainError, SchemeError


def ctx_of(values, name="x"):
    return init(pd.DataFrame({"id": "a", name: np.asarray(values, dtype=float)}), id="id")


def test_extreme_drought_below_minus_two():
    scheme = drought_scheme()
    assert scheme.classify([-2.3])[0] == "extreme drought"


def test_boundary_belongs_to_interval_closed_at_cut():
    scheme = drought_scheme()
    # -2.0 sits in [-2.0, -1.5): severe, not extreme
    assert scheme.classify([-2.0])[0] == "severe drought"
    assert scheme.classify([-1.0])[0] == "mild drought"


def test_single_cut_sign_split():
    scheme = SimplificationScheme(cuts=(0.0,), labels=("up", "down"))
    got = scheme.classify([-1.0, 1.0])
    assert got.tolist() == ["down", "up"]


def test_scheme_validation_errors():
    with pytest.raises(SchemeError):
        SimplificationScheme(cuts=(0.0, 1.0), labels=("a", "b", "c"))  # not decreasing
    with pytest.raises(SchemeError):
        SimplificationScheme(cuts=(1.0, 0.0), labels=("a", "b"))  # label count


def test_scheme_config_round_trip():
    scheme = drought_scheme()
    again = SimplificationScheme.from_dict(scheme.to_dict())
    assert again == scheme


def test_simplify_adds_ordered_categorical():
    ctx = simplify(ctx_of([-2.5, -1.7, -1.2, 0.4]), "x", drought_scheme())
    got = ctx.table["x_cat"]
    assert got.tolist() == [
        "extreme drought", "severe drought", "moderate drought", "mild drought",
    ]
    assert got.dtype == "category"


def test_simplify_nan_stays_missing():
    ctx = simplify(ctx_of([np.nan, -3.0]), "x", drought_scheme())
    assert ctx.table["x_cat"].isna().tolist() == [True, False]


@settings(max_examples=80, deadline=None)
@given(
    xs=st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=40),
)
def test_simplify_monotone_in_value(xs):
    scheme = drought_scheme()
    labels = list(scheme.labels)
    severity = {lab: i for i, lab in enumerate(labels)}
    got = scheme.classify(xs)
    order = np.argsort(np.asarray(xs))
    ranks = [severity[got[i]] for i in order]
    # larger x never maps to a more severe category
    assert all(a >= b for a, b in zip(ranks, ranks[1:]))


def test_fixed_benchmark_flags_below_minus_two():
    values = [-2.5, -2.0, -1.0, 0.5, -3.1]
    ctx = set_benchmark(ctx_of(values), "x", value=-2.0)
    assert ctx.table["x_flag"].tolist() == [True, False, False, False, True]


def test_unreachable_benchmark_flags_nothing():
    values = [1.0, 2.0, 3.0]
    ctx = set_benchmark(ctx_of(values), "x", value=0.0)
    assert not ctx.table["x_flag"].any()


def test_data_derived_percentile_benchmark():
    rng = np.random.default_rng(31)
    values = rng.permutation(np.arange(100, dtype=float))
    bench = Benchmark(derive=lambda df: np.quantile(df["x"], 0.10), lower_is_worse=True)
    ctx = set_benchmark(ctx_of(values), "x", benchmark=bench)
    # 10th percentile of 0..99 is 9.9; exactly the 10 values 0..9 sit below
    assert int(ctx.table["x_flag"].sum()) == 10


def test_higher_is_worse_orientation():
    ctx = set_benchmark(ctx_of([1.0, 5.0]), "x", value=2.0, lower_is_worse=False)
    assert ctx.table["x_flag"].tolist() == [False, True]


def test_benchmark_requires_level():
    with pytest.raises(DomainError):
        set_benchmark(ctx_of([1.0]), "x")
