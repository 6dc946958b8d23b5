"""Weight-perturbation sweeps over one aggregation dimension, with rank
tracking across frames."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import DomainError, WeightError
from .grid import VALUE_COL
from .indexes import RANK_COL
from .pipeline import PipelineContext
from .reduce import WeightScheme, weighted_sum
from .table import rank_descending, require_numeric


@dataclass(frozen=True)
class WeightFrame:
    """One sweep frame: its normalized weights and per-entity values/ranks."""

    index: int
    scheme: WeightScheme
    values: pd.DataFrame  # columns: entity id, .value, .rank


def weight_sweep(
    ctx: PipelineContext,
    variables,
    target: str,
    lo: float,
    hi: float,
    n_frames: int = 29,
    base: WeightScheme | None = None,
) -> list[WeightFrame]:
    """Vary the target dimension's weight over [lo, hi] in ``n_frames``
    equally spaced steps, with the remaining dimensions sharing the rest
    equally; index values and ranks are recomputed per frame.

    ``base`` only fixes the variable set ordering/validation; the
    non-target weights are equal shares by construction.
    """
    variables = list(variables)
    for v in variables:
        require_numeric(ctx.table, v)
    if base is not None:
        base.weights_for(variables)
    if target not in variables:
        raise WeightError(f"target {target!r} is not one of {variables}")
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    if not (0.0 < lo and hi < 1.0):
        raise DomainError(f"sweep range must lie inside (0, 1), got [{lo}, {hi}]")
    if n_frames < 2:
        raise DomainError(f"need at least 2 frames, got {n_frames}")

    others = [v for v in variables if v != target]
    ids = ctx.table[ctx.id_role]
    frames = []
    for i, w in enumerate(np.linspace(lo, hi, n_frames)):
        share = (1.0 - w) / len(others)
        entries = {v: (float(w) if v == target else share) for v in variables}
        scheme = WeightScheme(entries, normalized=True)
        values = weighted_sum(ctx.table, variables, scheme.weights_for(variables))
        ranks = pd.array(rank_descending(values, ids), dtype="Int64")
        ranks[np.isnan(values)] = pd.NA
        frames.append(
            WeightFrame(
                index=i,
                scheme=scheme,
                values=pd.DataFrame({ctx.id_role: ids, VALUE_COL: values, RANK_COL: ranks}),
            )
        )
    return frames


def sweep_table(frames: list[WeightFrame]) -> pd.DataFrame:
    """Long table over frames: entity, frame index, full weight vector,
    value, and rank (everything needed for dotplot-style rendering)."""
    pieces = []
    for frame in frames:
        t = frame.values.copy()
        t.insert(1, ".frame", frame.index)
        for name, w in frame.scheme.entries.items():
            t[f"w_{name}"] = w
        pieces.append(t)
    return pd.concat(pieces, ignore_index=True)


def rank_delta(frames: list[WeightFrame]) -> pd.DataFrame:
    """Per-entity rank trajectory summary relative to the first frame:
    max |rank change| and the frame index where it peaks."""
    if len(frames) < 2:
        raise DomainError(f"rank_delta needs at least 2 frames, got {len(frames)}")
    id_col = frames[0].values.columns[0]
    ranks = pd.concat(
        [f.values.set_index(id_col)[RANK_COL].rename(f.index) for f in frames], axis=1
    )
    base = ranks.iloc[:, 0]
    deltas = ranks.sub(base, axis=0).abs()
    out = pd.DataFrame(
        {
            id_col: ranks.index,
            ".rank_first": base.to_numpy(),
            ".rank_last": ranks.iloc[:, -1].to_numpy(),
            ".max_rank_delta": deltas.max(axis=1).to_numpy(),
            ".frame_of_extremum": deltas.to_numpy(dtype=float).argmax(axis=1),
        }
    ).reset_index(drop=True)
    return out.sort_values(id_col, kind="mergesort").reset_index(drop=True)
