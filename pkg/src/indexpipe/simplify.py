"""Benchmark flagging and categorical simplification of a continuous index."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd

from .errors import DomainError, SchemeError
from .pipeline import PipelineContext, register_operation
from .table import require_numeric


@dataclass(frozen=True)
class SimplificationScheme:
    """Strictly decreasing cuts c_1 > ... > c_z and z+1 labels.

    label[0] covers x >= c_1, label[i] covers the left-closed interval
    [c_{i+1}, c_i), and the last label covers x < c_z. Later labels are the
    more severe end of the scale.
    """

    cuts: tuple[float, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cuts)
        labels = tuple(str(l) for l in self.labels)
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "labels", labels)
        if len(labels) != len(cuts) + 1:
            raise SchemeError(f"need len(cuts)+1 labels; got {len(cuts)} cuts, {len(labels)} labels")
        if any(a <= b for a, b in zip(cuts, cuts[1:])):
            raise SchemeError(f"cuts must be strictly decreasing, got {cuts}")

    def classify(self, values) -> np.ndarray:
        x = np.asarray(values, dtype=float)
        ascending = -np.asarray(self.cuts, dtype=float)
        # index = number of cuts strictly above x; boundary values belong to
        # the interval closed at that cut
        idx = np.searchsorted(ascending, -x, side="left")
        out = np.asarray(self.labels, dtype=object)[idx]
        return np.where(np.isnan(x), None, out)

    def to_dict(self) -> dict:
        return {"cuts": list(self.cuts), "labels": list(self.labels)}

    @classmethod
    def from_dict(cls, d) -> "SimplificationScheme":
        try:
            return cls(cuts=tuple(d["cuts"]), labels=tuple(d["labels"]))
        except (KeyError, TypeError) as exc:
            raise SchemeError(f"scheme config needs 'cuts' and 'labels' lists: {exc}") from None


def drought_scheme() -> SimplificationScheme:
    """Severity bands for standardized drought indexes. Only the -2 line is
    a hard convention (extreme drought); the interior cuts are the common
    defaults and are configurable."""
    return SimplificationScheme(
        cuts=(-1.0, -1.5, -2.0),
        labels=("mild drought", "moderate drought", "severe drought", "extreme drought"),
    )


@register_operation("simplify")
def simplify(
    ctx: PipelineContext, variable: str, scheme, out: Optional[str] = None
) -> PipelineContext:
    """Categorize a continuous column through a simplification scheme."""
    require_numeric(ctx.table, variable)
    if isinstance(scheme, dict):
        scheme = SimplificationScheme.from_dict(scheme)
    out = out or f"{variable}_cat"
    table = ctx.table.copy()
    table[out] = pd.Categorical(
        scheme.classify(table[variable].to_numpy(dtype=float)),
        categories=list(scheme.labels),
        ordered=True,
    )
    return ctx.with_table(
        table, module="normalize-benchmark-simplify", operation="simplify",
        variable=variable, scheme=scheme.to_dict(), out=out,
    )


@dataclass(frozen=True)
class Benchmark:
    """A comparison level: a fixed value, or derived from the table by a
    deterministic function returning a scalar or row-aligned series."""

    value: Optional[float] = None
    derive: Optional[Callable[[pd.DataFrame], object]] = None
    lower_is_worse: bool = True


@register_operation("set_benchmark")
def set_benchmark(
    ctx: PipelineContext,
    variable: str,
    benchmark: Optional[Benchmark] = None,
    value: Optional[float] = None,
    lower_is_worse: bool = True,
    out: Optional[str] = None,
) -> PipelineContext:
    """Flag rows beyond a benchmark: x < b when lower is worse, else x > b."""
    require_numeric(ctx.table, variable)
    if benchmark is None:
        if value is None:
            raise DomainError("set_benchmark needs a Benchmark or a fixed value")
        benchmark = Benchmark(value=value, lower_is_worse=lower_is_worse)
    if benchmark.value is not None:
        level = np.full(len(ctx.table), float(benchmark.value))
    elif benchmark.derive is not None:
        derived = benchmark.derive(ctx.table)
        level = np.broadcast_to(np.asarray(derived, dtype=float), (len(ctx.table),)).copy()
    else:
        raise DomainError("benchmark has neither a value nor a derive function")
    if np.isnan(level).any():
        rows = np.flatnonzero(np.isnan(level))[:10].tolist()
        raise DomainError(f"benchmark unresolvable at rows {rows}")
    x = ctx.table[variable].to_numpy(dtype=float)
    flags = x < level if benchmark.lower_is_worse else x > level
    out = out or f"{variable}_flag"
    table = ctx.table.copy()
    table[out] = flags
    return ctx.with_table(
        table, module="normalize-benchmark-simplify", operation="set_benchmark",
        variable=variable,
        value=None if benchmark.value is None else float(benchmark.value),
        derived=benchmark.derive is not None,
        lower_is_worse=benchmark.lower_is_worse, out=out,
    )
