"""Weighted linear / geometric aggregation of variables into fewer columns."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import pandas as pd

from .errors import (
    ConstantColumnError,
    DomainError,
    MissingValueWarning,
    WeightError,
    WeightNormalizationWarning,
)
from .pipeline import PipelineContext, register_operation
from .table import resolve_columns

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class WeightScheme:
    """Named variable -> weight mapping; aggregation requires weights
    summing to one (auto-normalized with a notice otherwise)."""

    entries: Mapping[str, float]
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))
        bad = {k: v for k, v in self.entries.items() if v < 0}
        if bad:
            raise WeightError(f"weights must be >= 0, got {bad}")
        if not any(v > 0 for v in self.entries.values()):
            raise WeightError("at least one weight must be positive")

    def total(self) -> float:
        return float(sum(self.entries.values()))

    def is_normalized(self) -> bool:
        return abs(self.total() - 1.0) <= _SUM_TOL

    def normalize(self) -> "WeightScheme":
        total = self.total()
        return WeightScheme({k: v / total for k, v in self.entries.items()}, normalized=True)

    def weights_for(self, variables) -> np.ndarray:
        missing = [v for v in variables if v not in self.entries]
        if missing:
            raise WeightError(f"no weight for variable(s): {missing}")
        return np.array([self.entries[v] for v in variables], dtype=float)


def _resolve_scheme(ctx: PipelineContext, variables, weights, weight_col) -> WeightScheme:
    if weights is not None and weight_col is not None:
        raise WeightError("pass either a weight scheme or a metadata column name, not both")
    if weights is None and weight_col is None:
        raise WeightError("aggregation needs weights (scheme, mapping, or metadata column)")
    if weight_col is not None:
        if ctx.metadata is None or ctx.meta_var_col is None:
            raise WeightError("weight_col given but no metadata attached (use add_meta first)")
        if weight_col not in ctx.metadata.columns:
            raise WeightError(f"metadata has no column {weight_col!r}")
        pairs = zip(ctx.metadata[ctx.meta_var_col].astype(str), ctx.metadata[weight_col])
        scheme = WeightScheme({k: float(v) for k, v in pairs})
    elif isinstance(weights, WeightScheme):
        scheme = weights
    else:
        scheme = WeightScheme({str(k): float(v) for k, v in dict(weights).items()})
    scheme.weights_for(variables)
    if not scheme.is_normalized():
        warnings.warn(
            f"weights sum to {scheme.total():.6g}; auto-normalizing to 1",
            WeightNormalizationWarning,
        )
        scheme = scheme.normalize()
    return scheme


def weighted_sum(df: pd.DataFrame, variables, weights: np.ndarray) -> np.ndarray:
    """Rowwise sum(w_j * x_j); the single accumulation path shared by all
    linear aggregations so equal weights give bit-equal results."""
    total = np.zeros(len(df), dtype=float)
    for w, name in zip(weights, variables):
        total = total + w * df[name].to_numpy(dtype=float)
    return total


def _flag_missing(ctx: PipelineContext, values: np.ndarray, new_name: str) -> None:
    miss = np.isnan(values)
    if miss.any():
        counts = (
            pd.Series(miss, index=ctx.table[ctx.id_role]).groupby(level=0).sum().astype(int)
        )
        counts = {str(k): int(v) for k, v in counts.items() if v}
        warnings.warn(
            f"{new_name}: null contributors nullified {int(miss.sum())} row(s); "
            f"per-entity counts: {counts}",
            MissingValueWarning,
        )


@register_operation("aggregate_linear")
def aggregate_linear(
    ctx: PipelineContext,
    new_name: str,
    variables,
    weights=None,
    weight_col: str | None = None,
) -> PipelineContext:
    """Weighted linear combination of ``variables`` into ``new_name``.

    Any null contributor nullifies the row; a ``<new_name>_missing`` flag
    column is added and per-entity counts are reported. Propagation is kept
    loud rather than silently reweighting around the gaps.
    """
    variables = resolve_columns(ctx.table, variables)
    scheme = _resolve_scheme(ctx, variables, weights, weight_col)
    w = scheme.weights_for(variables)
    values = weighted_sum(ctx.table, variables, w)
    table = ctx.table.copy()
    table[new_name] = values
    table[f"{new_name}_missing"] = np.isnan(values)
    _flag_missing(ctx, values, new_name)
    return ctx.with_table(
        table, module="dimension-reduction", operation="aggregate_linear",
        new_name=new_name, variables=list(variables),
        weights={k: float(v) for k, v in zip(variables, w)},
    )


@register_operation("aggregate_geometric")
def aggregate_geometric(
    ctx: PipelineContext,
    new_name: str,
    variables,
    weights=None,
    weight_col: str | None = None,
) -> PipelineContext:
    """Weighted geometric mean prod(x_j ** w_j) into ``new_name``."""
    variables = resolve_columns(ctx.table, variables)
    scheme = _resolve_scheme(ctx, variables, weights, weight_col)
    w = scheme.weights_for(variables)
    mat = ctx.table[variables].to_numpy(dtype=float)
    bad_rows = np.nansum(mat <= 0, axis=1) > 0
    if bad_rows.any():
        ids = ctx.table.loc[bad_rows, ctx.id_role].head(10).tolist()
        raise DomainError(
            f"geometric aggregation needs strictly positive inputs; offending ids: {ids}"
        )
    values = np.exp((np.log(mat) * w).sum(axis=1))
    table = ctx.table.copy()
    table[new_name] = values
    table[f"{new_name}_missing"] = np.isnan(values)
    _flag_missing(ctx, values, new_name)
    return ctx.with_table(
        table, module="dimension-reduction", operation="aggregate_geometric",
        new_name=new_name, variables=list(variables),
        weights={k: float(v) for k, v in zip(variables, w)},
    )


def weights_from_inverse_sd(ctx: PipelineContext, variables) -> WeightScheme:
    """Weights proportional to 1/sd of each variable, scaled to sum to one."""
    variables = resolve_columns(ctx.table, variables)
    inv = {}
    for name in variables:
        sd = float(ctx.table[name].std(ddof=1, skipna=True))
        if not np.isfinite(sd) or sd == 0.0:
            raise ConstantColumnError(f"variable {name!r} has zero or undefined sd")
        inv[name] = 1.0 / sd
    return WeightScheme(inv).normalize()
