"""Pipeline context: role-tagged table, attached metadata, replayable step log.

Every step function takes a context, returns a new context (the input is
never mutated), and appends one record to the step log. Records hold only
JSON-serializable parameters so a log can be written to a manifest and
replayed against the original table.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Optional

import pandas as pd

from .errors import (
    DuplicateKeyError,
    EmptyJoinError,
    ReplayError,
    RoleError,
    SchemaError,
    UnmatchedVariableWarning,
)
from .table import measure_columns, require_columns


@dataclass(frozen=True)
class StepRecord:
    module: str
    operation: str
    params: Mapping = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"module": self.module, "operation": self.operation, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, d: Mapping) -> "StepRecord":
        return cls(module=d["module"], operation=d["operation"], params=dict(d.get("params", {})))


_OPERATIONS: dict[str, Callable] = {}


def register_operation(name: str):
    """Register a step function under a stable name for config/replay use."""

    def deco(fn):
        _OPERATIONS[name] = fn
        return fn

    return deco


def get_operation(name: str) -> Callable:
    try:
        return _OPERATIONS[name]
    except KeyError:
        raise ReplayError(f"unknown operation {name!r}; registered: {sorted(_OPERATIONS)}") from None


def known_operations() -> list[str]:
    return sorted(_OPERATIONS)


@dataclass(frozen=True)
class PipelineContext:
    table: pd.DataFrame
    id_role: str
    time_role: Optional[str] = None
    group_role: Optional[str] = None
    metadata: Optional[pd.DataFrame] = None
    meta_var_col: Optional[str] = None
    step_log: tuple[StepRecord, ...] = ()

    def with_table(self, table: pd.DataFrame, module: str, operation: str, **params) -> "PipelineContext":
        record = StepRecord(module=module, operation=operation, params=params)
        return replace(self, table=table, step_log=self.step_log + (record,))

    def logged(self, module: str, operation: str, **params) -> "PipelineContext":
        record = StepRecord(module=module, operation=operation, params=params)
        return replace(self, step_log=self.step_log + (record,))

    def measures(self) -> list[str]:
        roles = {self.id_role, self.time_role, self.group_role}
        return measure_columns(self.table, exclude=roles)

    def sort_keys(self) -> list[str]:
        return [self.id_role] + ([self.time_role] if self.time_role else [])


def init(
    table: pd.DataFrame,
    id: str,
    time: Optional[str] = None,
    group: Optional[str] = None,
) -> PipelineContext:
    """Start a pipeline: tag roles, sort by (id, time), reject duplicate keys."""
    require_columns(table, [id, time, group], "init")
    df = table.copy()
    sort_cols = [id] + ([time] if time else [])
    try:
        df = df.sort_values(sort_cols, kind="mergesort").reset_index(drop=True)
    except TypeError as exc:
        raise RoleError(f"columns {sort_cols} are not sortable: {exc}") from None
    if time is not None:
        dup = df.duplicated(subset=[id, time])
        if dup.any():
            pairs = df.loc[dup, [id, time]].head(5).to_records(index=False).tolist()
            raise DuplicateKeyError(f"duplicate (id, time) pairs, e.g. {pairs}")
    record = StepRecord(module="data-core", operation="init", params={"id": id, "time": time, "group": group})
    return PipelineContext(table=df, id_role=id, time_role=time, group_role=group, step_log=(record,))


@register_operation("add_meta")
def add_meta(ctx: PipelineContext, meta, var_col: str) -> PipelineContext:
    """Attach a metadata table (e.g. weights) keyed by variable name.

    ``meta`` is a DataFrame or a list of row dicts (the form stored in step
    records, which keeps metadata joins replayable).
    """
    if not isinstance(meta, pd.DataFrame):
        meta = pd.DataFrame(list(meta))
    if var_col not in meta.columns:
        raise SchemaError(f"metadata has no column {var_col!r}; available: {list(meta.columns)}")
    names = [str(v) for v in meta[var_col]]
    matched = [n for n in names if n in ctx.table.columns]
    if not matched:
        raise EmptyJoinError(
            f"no metadata variable matches a table column; metadata names: {sorted(set(names))}"
        )
    unmatched = sorted(set(names) - set(matched))
    if unmatched:
        warnings.warn(
            f"metadata variables not found in table: {unmatched}", UnmatchedVariableWarning
        )
    record = StepRecord(
        module="data-core",
        operation="add_meta",
        params={"var_col": var_col, "meta": meta.to_dict("records")},
    )
    return replace(
        ctx, metadata=meta.copy(), meta_var_col=var_col, step_log=ctx.step_log + (record,)
    )


def replay(table: pd.DataFrame, step_log) -> tuple[PipelineContext, Optional[pd.DataFrame]]:
    """Re-run a step log against the original table.

    Returns the final context and, when the log ends in a result-producing
    step (``compute_indexes``), the stacked result table.
    """
    records = [r if isinstance(r, StepRecord) else StepRecord.from_dict(r) for r in step_log]
    if not records or records[0].operation != "init":
        raise ReplayError("step log must start with an init record")
    ctx = init(table, **records[0].params)
    result = None
    for record in records[1:]:
        if result is not None:
            raise ReplayError("compute_indexes must be the final step of a log")
        fn = get_operation(record.operation)
        out = fn(ctx, **record.params)
        if isinstance(out, PipelineContext):
            ctx = out
        else:
            result = out
    return ctx, result
