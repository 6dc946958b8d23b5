import numpy as np
import pandas as pd
import pytest

from indexpipe import (
    WeightScheme,
    idx_gggi,
    init,
    rank_delta,
    sweep_table,
    weight_sweep,
)
from indexpipe.errors import DomainError, WeightError

DIMS = ["economy", "education", "health", "politics"]


def dim_ctx(n=10, seed=3):
    rng = np.random.default_rng(seed)
    df = pd.DataFrame({"country": [f"c{i:02d}" for i in range(n)]})
    for d in DIMS:
        df[d] = rng.uniform(0.2, 0.95, n)
    return init(df, id="country")


def test_frame_weights_share_equally_and_sum_to_one():
    frames = weight_sweep(dim_ctx(), DIMS, "politics", 0.07, 0.52, n_frames=4)
    f0 = frames[0]
    assert f0.scheme.entries["politics"] == pytest.approx(0.07)
    for d in ("economy", "education", "health"):
        assert f0.scheme.entries[d] == pytest.approx((1 - 0.07) / 3)
    for f in frames:
        assert sum(f.scheme.entries.values()) == pytest.approx(1.0, abs=1e-12)


def test_default_29_frames_step_size():
    frames = weight_sweep(dim_ctx(), DIMS, "politics", 0.07, 0.52)
    assert len(frames) == 29
    w = [f.scheme.entries["politics"] for f in frames]
    steps = np.diff(w)
    assert np.allclose(steps, 0.45 / 28, atol=1e-12)
    assert steps[0] == pytest.approx(0.016071428571, abs=1e-9)


def test_anchor_frame_reproduces_unperturbed_index():
    ctx = dim_ctx(n=16, seed=8)
    frames = weight_sweep(ctx, DIMS, "politics", 0.07, 0.52, n_frames=31)
    anchor = min(frames, key=lambda f: abs(f.scheme.entries["politics"] - 0.25))
    assert anchor.scheme.entries["politics"] == pytest.approx(0.25, abs=1e-12)
    base = idx_gggi(ctx.table.copy(), mode="dimensions", id_col="country")
    assert np.max(np.abs(
        anchor.values[".value"].to_numpy() - base[".value"].to_numpy()
    )) <= 1e-12
    assert anchor.values[".rank"].tolist() == base[".rank"].tolist()


def test_sweep_is_lipschitz_in_weight():
    ctx = dim_ctx(n=12, seed=5)
    frames = weight_sweep(ctx, DIMS, "politics", 0.07, 0.52, n_frames=29)
    step = 0.45 / 28
    # |dv/dw| <= max_j |x_target - x_other| <= value range of the dim columns
    data = ctx.table[DIMS].to_numpy()
    bound = (data.max() - data.min()) * step * (1 + 1e-9)
    for a, b in zip(frames, frames[1:]):
        dv = np.abs(a.values[".value"].to_numpy() - b.values[".value"].to_numpy())
        assert dv.max() <= bound


def test_sweep_validations():
    ctx = dim_ctx()
    with pytest.raises(WeightError):
        weight_sweep(ctx, DIMS, "sports", 0.1, 0.5)
    with pytest.raises(DomainError):
        weight_sweep(ctx, DIMS, "politics", 0.5, 0.1)
    with pytest.raises(DomainError):
        weight_sweep(ctx, DIMS, "politics", 0.0, 0.5)
    with pytest.raises(DomainError):
        weight_sweep(ctx, DIMS, "politics", 0.1, 0.5, n_frames=1)


def test_sweep_table_carries_weight_vector():
    frames = weight_sweep(dim_ctx(n=3), DIMS, "politics", 0.1, 0.4, n_frames=3)
    table = sweep_table(frames)
    assert set(table[".frame"]) == {0, 1, 2}
    assert {"w_economy", "w_education", "w_health", "w_politics"} <= set(table.columns)
    assert len(table) == 9


def test_rank_delta_identical_frames_zero():
    ctx = dim_ctx(n=6, seed=2)
    frames = weight_sweep(ctx, DIMS, "politics", 0.25, 0.2500001, n_frames=3)
    deltas = rank_delta(frames)
    assert (deltas[".max_rank_delta"] == 0).all()


def test_rank_delta_swap_case():
    df = pd.DataFrame(
        {
            "country": ["aa", "bb"],
            "economy": [0.9, 0.1],
            "education": [0.9, 0.1],
            "health": [0.9, 0.1],
            "politics": [0.05, 0.95],
        }
    )
    ctx = init(df, id="country")
    frames = weight_sweep(ctx, DIMS, "politics", 0.05, 0.9, n_frames=2)
    deltas = rank_delta(frames).set_index("country")
    assert deltas[".max_rank_delta"].tolist() == [1, 1]
    assert deltas.loc["aa", ".rank_first"] == 1
    assert deltas.loc["aa", ".rank_last"] == 2


def test_rank_delta_constant_leader():
    df = pd.DataFrame(
        {
            "country": ["top", "mid", "low"],
            "economy": [0.99, 0.5, 0.2],
            "education": [0.99, 0.5, 0.2],
            "health": [0.99, 0.5, 0.2],
            "politics": [0.99, 0.5, 0.2],
        }
    )
    ctx = init(df, id="country")
    frames = weight_sweep(ctx, DIMS, "politics", 0.07, 0.52, n_frames=5)
    deltas = rank_delta(frames).set_index("country")
    assert deltas.loc["top", ".max_rank_delta"] == 0
    assert deltas.loc["top", ".rank_first"] == 1 and deltas.loc["top", ".rank_last"] == 1


def test_rank_delta_needs_two_frames():
    ctx = dim_ctx(n=3)
    frames = weight_sweep(ctx, DIMS, "politics", 0.1, 0.5, n_frames=2)
    with pytest.raises(DomainError):
        rank_delta(frames[:1])
