"""Per-cell distribution fitting with optional bootstrap replication.

A fit cell is the (id, group) pair (typically station x calendar month).
Bootstrap resampling happens within cells, and each (cell, replicate) draws
from its own counter-based RNG substream derived from the master seed, so
evaluation order cannot change results.
"""
from __future__ import annotations

import hashlib
import struct
import warnings

import numpy as np
import pandas as pd

from .distributions import get_family
from .errors import (
    DomainError,
    DroppedReplicateWarning,
    FitInfeasibleError,
    InsufficientSampleError,
    SkippedCellWarning,
)
from .lmoments import sample_l_moments
from .pipeline import PipelineContext, register_operation
from .table import require_numeric

REPLICATE_COL = ".replicate"


def substream(seed: int, cell_key: tuple, replicate: int) -> np.random.Generator:
    """Deterministic, order-independent RNG for one (cell, replicate)."""
    digest = hashlib.sha256("\x1f".join(map(str, cell_key)).encode()).digest()
    words = struct.unpack("<4I", digest[:16])
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(*words, int(replicate)))
    return np.random.default_rng(ss)


@register_operation("distribution_fit")
def distribution_fit(
    ctx: PipelineContext,
    variable: str,
    family,
    n_boot: int = 1,
    seed: int = 0,
    min_points: int = 4,
    out: str = ".fitted",
) -> PipelineContext:
    """Fit ``family`` per (id, group) cell and evaluate its CDF rowwise.

    With ``n_boot > 1`` the cell values are resampled with replacement
    ``n_boot`` times; each surviving replicate emits its own copy of the
    cell rows tagged in ``.replicate`` (0 is always the point fit on the
    original data). Infeasible bootstrap fits are dropped and counted;
    cells with fewer than ``min_points`` values are skipped with a warning
    and keep NaN in the output column.
    """
    fam = get_family(family)
    require_numeric(ctx.table, variable)
    n_boot = int(n_boot)
    if n_boot < 1:
        raise DomainError(f"n_boot must be >= 1, got {n_boot}")
    keys = [ctx.id_role] + ([ctx.group_role] if ctx.group_role else [])

    pieces = []
    skipped: list[tuple] = []
    dropped = 0
    for cell_key, sub in ctx.table.groupby(keys, sort=True):
        cell_key = cell_key if isinstance(cell_key, tuple) else (cell_key,)
        xs = sub[variable].to_numpy(dtype=float)
        vals = xs[~np.isnan(xs)]
        fam.data_check(vals)

        fits: dict[int, tuple] = {}
        if len(vals) < max(min_points, fam.required_nmom):
            skipped.append(cell_key)
        else:
            try:
                fits[0] = fam.fit_lmoments(sample_l_moments(vals, nmom=fam.required_nmom))
            except (FitInfeasibleError, InsufficientSampleError) as exc:
                skipped.append(cell_key + (str(exc),))
            if 0 in fits and n_boot > 1:
                for r in range(1, n_boot + 1):
                    rng = substream(seed, cell_key, r)
                    resample = vals[rng.integers(0, len(vals), len(vals))]
                    try:
                        fits[r] = fam.fit_lmoments(
                            sample_l_moments(resample, nmom=fam.required_nmom)
                        )
                    except (FitInfeasibleError, InsufficientSampleError):
                        dropped += 1

        if not fits:
            piece = sub.copy()
            piece[out] = np.nan
            if n_boot > 1:
                piece[REPLICATE_COL] = 0
            pieces.append(piece)
            continue
        for r in sorted(fits):
            piece = sub.copy()
            piece[out] = fam.cdf(xs, fits[r])
            if n_boot > 1:
                piece[REPLICATE_COL] = r
            pieces.append(piece)

    if skipped:
        warnings.warn(
            f"{len(skipped)} fit cell(s) skipped (too few points or infeasible): "
            f"{skipped[:5]}",
            SkippedCellWarning,
        )
    if dropped:
        warnings.warn(
            f"{dropped} bootstrap replicate(s) dropped due to infeasible fits",
            DroppedReplicateWarning,
        )

    table = pd.concat(pieces, ignore_index=True)
    sort_cols = ctx.sort_keys() + ([REPLICATE_COL] if n_boot > 1 else [])
    table = table.sort_values(sort_cols, kind="mergesort").reset_index(drop=True)
    return ctx.with_table(
        table, module="distribution", operation="distribution_fit",
        variable=variable, family=fam.name, n_boot=n_boot, seed=int(seed),
        min_points=int(min_points), out=out,
    )
