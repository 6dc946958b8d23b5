"""Shape-changing variable transforms and shape-preserving affine scaling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import ConstantColumnError, DomainError
from .pipeline import PipelineContext, register_operation
from .table import require_numeric

_TRANSFORMS = {
    "log": (np.log, lambda x: x > 0, "strictly positive"),
    "sqrt": (np.sqrt, lambda x: x >= 0, "nonnegative"),
    "cbrt": (np.cbrt, lambda x: np.full_like(x, True, dtype=bool), "any real"),
}

_SCALINGS = ("center", "zscore", "minmax")


@dataclass(frozen=True)
class ScalingSpec:
    """An affine rescale x -> (x - alpha) / gamma."""

    kind: str
    alpha: float
    gamma: float


def _offenders(ctx: PipelineContext, mask: np.ndarray) -> str:
    cols = [ctx.id_role] + ([ctx.time_role] if ctx.time_role else [])
    rows = ctx.table.loc[mask, cols].head(10)
    listing = ", ".join(str(tuple(r)) for r in rows.itertuples(index=False))
    extra = int(mask.sum()) - len(rows)
    return listing + (f" ... and {extra} more" if extra > 0 else "")


@register_operation("transform")
def transform(ctx: PipelineContext, variable: str, kind: str, out: str | None = None) -> PipelineContext:
    """Elementwise log / sqrt / signed cube root into ``<variable>_<kind>``."""
    require_numeric(ctx.table, variable)
    if kind not in _TRANSFORMS:
        raise DomainError(f"kind must be one of {sorted(_TRANSFORMS)}, got {kind!r}")
    fn, valid, requirement = _TRANSFORMS[kind]
    x = ctx.table[variable].to_numpy(dtype=float)
    finite = ~np.isnan(x)
    bad = finite & ~valid(x)
    if bad.any():
        raise DomainError(
            f"{kind} requires {requirement} values; offending (id, time) rows: {_offenders(ctx, bad)}"
        )
    table = ctx.table.copy()
    table[out or f"{variable}_{kind}"] = fn(x)
    return ctx.with_table(
        table, module="transform-scale", operation="transform",
        variable=variable, kind=kind, out=out or f"{variable}_{kind}",
    )


def scaling_params(values: np.ndarray, kind: str) -> ScalingSpec:
    values = np.asarray(values, dtype=float)
    values = values[~np.isnan(values)]
    if kind == "center":
        return ScalingSpec(kind, float(values.mean()), 1.0)
    if kind == "zscore":
        sd = float(values.std(ddof=1)) if len(values) > 1 else 0.0
        if sd == 0.0:
            raise ConstantColumnError("zscore needs sample sd > 0 (column is constant)")
        return ScalingSpec(kind, float(values.mean()), sd)
    if kind == "minmax":
        lo, hi = float(values.min()), float(values.max())
        if hi - lo == 0.0:
            raise ConstantColumnError("minmax needs max > min (column is constant)")
        return ScalingSpec(kind, lo, hi - lo)
    raise DomainError(f"kind must be one of {_SCALINGS}, got {kind!r}")


@register_operation("rescale")
def rescale(
    ctx: PipelineContext,
    variable: str,
    kind: str,
    per_entity: bool = False,
    out: str | None = None,
) -> PipelineContext:
    """Affine rescale into ``<variable>_<kind>``.

    (alpha, gamma) are (mean, 1) for center, (mean, sample sd) for zscore,
    (min, max - min) for minmax; computed globally by default, or within
    each entity when ``per_entity`` is set.
    """
    require_numeric(ctx.table, variable)
    out = out or f"{variable}_{kind}"
    table = ctx.table.copy()
    if per_entity:
        parts = []
        for _, sub in table.groupby(ctx.id_role, sort=False):
            spec = scaling_params(sub[variable].to_numpy(dtype=float), kind)
            parts.append((sub[variable] - spec.alpha) / spec.gamma)
        table[out] = pd.concat(parts)
    else:
        spec = scaling_params(table[variable].to_numpy(dtype=float), kind)
        table[out] = (table[variable] - spec.alpha) / spec.gamma
    return ctx.with_table(
        table, module="transform-scale", operation="rescale",
        variable=variable, kind=kind, per_entity=per_entity, out=out,
    )
