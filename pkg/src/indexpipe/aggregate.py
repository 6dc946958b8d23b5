"""Rolling-window temporal aggregation and discrete spatial regrouping."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import pandas as pd

from .errors import DomainError, EmptyWindowWarning, GapError, MappingError, RoleError
from .pipeline import PipelineContext, register_operation
from .table import format_month, measure_columns, month_ordinals, require_numeric

_STATS = ("sum", "mean")


@dataclass(frozen=True)
class RollingSpec:
    variable: str
    scale: int
    stat: str = "sum"


@dataclass(frozen=True)
class SpatialMapping:
    mapping: Mapping[str, str]
    stat: str = "mean"


def _window_stats(values: np.ndarray, k: int, stat: str) -> np.ndarray:
    # Trailing windows; windows.sum(axis=1) matches a per-window np.sum of
    # the same slice, which the brute-force oracle relies on.
    windows = np.lib.stride_tricks.sliding_window_view(values, k)
    agg = windows.sum(axis=1)
    if stat == "mean":
        agg = agg / k
    return agg


@register_operation("temporal_rolling_window")
def temporal_rolling_window(
    ctx: PipelineContext, variable: str, scale: int, stat: str = "sum", out: str = ".agg"
) -> PipelineContext:
    """Trailing rolling-window statistic per entity; drops the first
    ``scale - 1`` warm-up rows of each entity.

    The monthly axis must be gap-free per entity; a gap is a hard error
    because silent gaps corrupt window semantics.
    """
    require_numeric(ctx.table, variable)
    if ctx.time_role is None:
        raise RoleError("temporal_rolling_window requires a time role")
    scale = int(scale)
    if scale < 1:
        raise DomainError(f"window size must be >= 1, got {scale}")
    if stat not in _STATS:
        raise DomainError(f"stat must be one of {_STATS}, got {stat!r}")

    pieces = []
    for entity, sub in ctx.table.groupby(ctx.id_role, sort=False):
        ords = month_ordinals(sub[ctx.time_role])
        steps = np.diff(ords)
        if (steps != 1).any():
            at = int(np.argmax(steps != 1))
            missing = format_month(ords[at] + 1, sub[ctx.time_role])
            raise GapError(f"monthly gap for id {entity!r}: missing {missing}")
        if len(sub) < scale:
            warnings.warn(
                f"window of {scale} exceeds series length {len(sub)} for id {entity!r}; "
                "no rows emitted",
                EmptyWindowWarning,
            )
            continue
        agg = _window_stats(sub[variable].to_numpy(dtype=float), scale, stat)
        kept = sub.iloc[scale - 1 :].copy()
        kept[out] = agg
        pieces.append(kept)

    if pieces:
        table = pd.concat(pieces, ignore_index=True)
    else:
        table = ctx.table.iloc[0:0].copy()
        table[out] = pd.Series(dtype=float)
    return ctx.with_table(
        table,
        module="temporal-spatial",
        operation="temporal_rolling_window",
        variable=variable,
        scale=scale,
        stat=stat,
        out=out,
    )


@register_operation("spatial_aggregate")
def spatial_aggregate(
    ctx: PipelineContext, mapping, variable: str, stat: str = "mean"
) -> PipelineContext:
    """Regroup entities into regions: one row per (region, time), each
    numeric measure reduced by ``stat`` over the member ids present at that
    time. Adds ``.n_members`` with the member count used per row.
    """
    if isinstance(mapping, SpatialMapping):
        stat = mapping.stat
        mapping = mapping.mapping
    mapping = {str(k): str(v) for k, v in dict(mapping).items()}
    require_numeric(ctx.table, variable)
    if stat not in _STATS:
        raise DomainError(f"stat must be one of {_STATS}, got {stat!r}")

    ids = ctx.table[ctx.id_role].astype(str)
    unmapped = sorted(set(ids) - set(mapping))
    if unmapped:
        raise MappingError(f"ids with no region mapping: {unmapped}")

    df = ctx.table.copy()
    df[ctx.id_role] = ids.map(mapping)
    keys = [ctx.id_role] + ([ctx.time_role] if ctx.time_role else [])
    numeric = measure_columns(df, exclude=set(keys))
    if variable not in numeric:
        numeric = [variable] + numeric
    grouped = df.groupby(keys, sort=True)
    table = grouped[numeric].agg(stat)
    table[".n_members"] = grouped.size()
    table = table.reset_index()
    return ctx.with_table(
        table,
        module="temporal-spatial",
        operation="spatial_aggregate",
        mapping=mapping,
        variable=variable,
        stat=stat,
    )
