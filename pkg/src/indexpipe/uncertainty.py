"""Bootstrap confidence intervals over replicated index series.

Intervals use the quantile method: for confidence level c the bounds are
the (1-c)/2 and (1+c)/2 empirical quantiles of the bootstrap replicate
values at each (id, time) point, with inclusive linear interpolation
between order statistics:

    h = (n - 1) * q;  bound = x_(floor(h)) + (h - floor(h)) * (x_(floor(h)+1) - x_(floor(h)))

The point value is always the replicate-0 fit on the original data.
"""
from __future__ import annotations

import math

import numpy as np
import pandas as pd

from .errors import DomainError, SchemaError
from .fitting import REPLICATE_COL
from .grid import DIST_COL, IDX_COL, SCALE_COL, VALUE_COL


def quantile_linear(sorted_values: np.ndarray, q: float) -> float:
    """Quantile of ascending ``sorted_values`` by linear interpolation."""
    n = len(sorted_values)
    h = (n - 1) * q
    lo = int(math.floor(h))
    if lo >= n - 1:
        return float(sorted_values[-1])
    frac = h - lo
    return float(sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]))


def _level_label(level: float) -> str:
    return str(int(round(level * 100)))


def bootstrap_ci(
    result: pd.DataFrame,
    levels=(0.80, 0.95),
    *,
    id_col: str,
    time_col: str,
    value_col: str = VALUE_COL,
    replicate_col: str = REPLICATE_COL,
) -> pd.DataFrame:
    """Per-(id, time) point value and quantile-method interval bounds.

    Groups additionally by any provenance columns present (.idx/.dist/
    .scale). Points with fewer than two surviving replicates keep the point
    value but are flagged (``.interval_ok`` False, NaN bounds).
    """
    levels = tuple(sorted(float(c) for c in levels))
    if any(not 0.0 < c < 1.0 for c in levels):
        raise DomainError(f"confidence levels must lie in (0, 1), got {levels}")
    if replicate_col not in result.columns:
        raise SchemaError(
            f"result has no {replicate_col!r} column; run the fit with n_boot > 1"
        )
    for col in (id_col, time_col, value_col):
        if col not in result.columns:
            raise SchemaError(f"result has no column {col!r}")

    prov = [c for c in (IDX_COL, DIST_COL, SCALE_COL) if c in result.columns]
    keys = prov + [id_col, time_col]
    rows = []
    for key, sub in result.groupby(keys, sort=True, dropna=False):
        key = key if isinstance(key, tuple) else (key,)
        reps = sub.loc[sub[replicate_col] >= 1, value_col].to_numpy(dtype=float)
        reps = np.sort(reps[~np.isnan(reps)])
        point = sub.loc[sub[replicate_col] == 0, value_col]
        row = dict(zip(keys, key))
        row[value_col] = float(point.iloc[0]) if len(point) else np.nan
        row[".n_replicates"] = int(len(reps))
        row[".interval_ok"] = len(reps) >= 2
        for c in levels:
            label = _level_label(c)
            if len(reps) >= 2:
                row[f".lower_{label}"] = quantile_linear(reps, (1.0 - c) / 2.0)
                row[f".upper_{label}"] = quantile_linear(reps, (1.0 + c) / 2.0)
            else:
                row[f".lower_{label}"] = np.nan
                row[f".upper_{label}"] = np.nan
        rows.append(row)
    return pd.DataFrame(rows)
