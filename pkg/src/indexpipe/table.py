"""Column utilities for long-format tables: role checks, time axes, selection."""
from __future__ import annotations

import numpy as np
import pandas as pd

from .errors import RoleError, SchemaError


def require_columns(df: pd.DataFrame, names, context: str = "table") -> None:
    missing = [n for n in names if n is not None and n not in df.columns]
    if missing:
        raise RoleError(
            f"{context} has no column(s) {missing}; available: {list(df.columns)}"
        )


def require_numeric(df: pd.DataFrame, name: str) -> None:
    require_columns(df, [name])
    if not pd.api.types.is_numeric_dtype(df[name]):
        raise SchemaError(f"column {name!r} must be numeric, got {df[name].dtype}")


def measure_columns(df: pd.DataFrame, exclude=()) -> list[str]:
    """Numeric, non-derived (not dot-prefixed) columns, in table order."""
    out = []
    for name in df.columns:
        if name in exclude or str(name).startswith("."):
            continue
        if pd.api.types.is_numeric_dtype(df[name]):
            out.append(name)
    return out


def month_ordinals(series: pd.Series) -> np.ndarray:
    """Map a time column onto consecutive integers, one per month.

    Accepts monthly periods, datetimes (truncated to month), or plain
    integers. Anything else cannot support gap-free monthly windows.
    """
    dtype = series.dtype
    if isinstance(dtype, pd.PeriodDtype):
        if dtype.freq.name not in ("M", "ME"):
            raise SchemaError(f"time column has period frequency {dtype.freq.name}, expected monthly")
        return series.array.asi8.copy()
    if pd.api.types.is_datetime64_any_dtype(dtype):
        return series.dt.to_period("M").array.asi8.copy()
    if pd.api.types.is_integer_dtype(dtype):
        return series.to_numpy(dtype=np.int64)
    raise SchemaError(
        f"time column dtype {dtype} does not define a monthly axis; "
        "use a monthly period, datetime, or integer column"
    )


def format_month(ordinal: int, like: pd.Series) -> str:
    """Render a month ordinal in the same style as the time column."""
    dtype = like.dtype
    if isinstance(dtype, pd.PeriodDtype) or pd.api.types.is_datetime64_any_dtype(dtype):
        return str(pd.Period(ordinal=int(ordinal), freq="M"))
    return str(int(ordinal))


def resolve_columns(df: pd.DataFrame, spec) -> list[str]:
    """Resolve a column selection: a list of names, one name, or an
    inclusive positional range written ``first:last``."""
    if isinstance(spec, str):
        if ":" in spec:
            first, last = spec.split(":", 1)
            require_columns(df, [first, last], "selection")
            cols = list(df.columns)
            i, j = cols.index(first), cols.index(last)
            if i > j:
                raise SchemaError(f"range {spec!r} runs backwards in column order")
            return cols[i : j + 1]
        require_columns(df, [spec], "selection")
        return [spec]
    names = list(spec)
    require_columns(df, names, "selection")
    return names


def rank_descending(values: np.ndarray, ids) -> np.ndarray:
    """Ordinal ranks 1..n by descending value; ties broken by id string.

    NaN values sort last and should be masked by the caller.
    """
    values = np.asarray(values, dtype=float)
    ids = np.asarray([str(v) for v in ids])
    order = np.lexsort((ids, -values))
    ranks = np.empty(len(values), dtype=np.int64)
    ranks[order] = np.arange(1, len(values) + 1)
    return ranks
