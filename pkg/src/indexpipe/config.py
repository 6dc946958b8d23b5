"""Declarative run configuration: YAML in, result + manifest out."""
from __future__ import annotations

import inspect
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import pandas as pd

from . import io as iomod
from .errors import ConfigError
from .grid import IDX_COL, RECIPE_BUILDERS, compute_indexes
from .pipeline import (
    PipelineContext,
    StepRecord,
    get_operation,
    init,
    known_operations,
    register_operation,
)
from .uncertainty import bootstrap_ci

_SCHEMAS = ("station_csv", "gggi_csv")
_DEFAULT_ROLES = {
    "station_csv": {"id": "id", "time": "ym", "group": "month"},
    "gggi_csv": {"id": "country", "time": None, "group": None},
}


@register_operation("noop")
def noop(ctx: PipelineContext) -> PipelineContext:
    """Identity step; useful for configs that only ingest and re-emit."""
    return ctx.logged(module="data-core", operation="noop")


@dataclass
class PipelineConfig:
    input_path: str
    schema: str = "station_csv"
    roles: dict = field(default_factory=dict)
    steps: list = field(default_factory=list)
    indexes: dict = field(default_factory=dict)
    output_path: str = "out/result.csv"
    output_format: str = "csv"
    seed: int = 0
    intervals: Optional[dict] = None
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        try:
            inp = d["input"]
            out = d.get("output", {})
            cfg = cls(
                input_path=inp["path"],
                schema=inp.get("schema", "station_csv"),
                roles=dict(d.get("roles", {})),
                steps=list(d.get("steps", [])),
                indexes={k: dict(v) for k, v in dict(d.get("indexes", {})).items()},
                output_path=out.get("path", "out/result.csv"),
                output_format=out.get("format", "csv"),
                seed=int(d.get("seed", 0)),
                intervals=d.get("intervals"),
                raw=d,
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"config missing required structure: {exc}") from None
        cfg.validate()
        return cfg

    @classmethod
    def from_yaml(cls, path) -> "PipelineConfig":
        import yaml

        with open(path) as fh:
            data = yaml.safe_load(fh)
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a mapping, got {type(data).__name__}")
        return cls.from_dict(data)

    def validate(self) -> None:
        if self.schema not in _SCHEMAS:
            raise ConfigError(f"unknown input schema {self.schema!r}; known: {_SCHEMAS}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {self.output_format!r}")
        for step in self.steps:
            name = step.get("operation")
            if name is None:
                raise ConfigError(f"step {step!r} lacks an 'operation' key")
            try:
                fn = get_operation(name)
            except Exception:
                raise ConfigError(
                    f"unknown operation {name!r}; known: {known_operations()}"
                ) from None
            params = dict(step.get("params", {}))
            try:
                inspect.signature(fn).bind_partial(None, **params)
            except TypeError as exc:
                raise ConfigError(f"step {name!r} parameters do not bind: {exc}") from None
        for recipe_name, spec in self.indexes.items():
            if recipe_name not in RECIPE_BUILDERS:
                raise ConfigError(
                    f"unknown recipe {recipe_name!r}; known: {sorted(RECIPE_BUILDERS)}"
                )
            builder = RECIPE_BUILDERS[recipe_name]
            try:
                inspect.signature(builder).bind(**spec)
            except TypeError as exc:
                raise ConfigError(f"recipe {recipe_name!r} parameters do not bind: {exc}") from None

    def hash(self) -> str:
        return iomod.config_hash(self.raw)


@dataclass(frozen=True)
class RunReport:
    output_path: Path
    manifest_path: Path
    rows: int
    intervals_path: Optional[Path] = None


def _read_input(config: PipelineConfig, base_dir: Path) -> pd.DataFrame:
    path = Path(config.input_path)
    if not path.is_absolute():
        path = base_dir / path
    if config.schema == "station_csv":
        return iomod.read_station_csv(path)
    return iomod.read_gggi_csv(path, id_col=config.roles.get("id", "country"))


def run(config: PipelineConfig, base_dir=".") -> RunReport:
    """Execute a configured pipeline: ingest, steps, recipe grids, outputs.

    Writes the result table, an interval table when bootstrap replicates
    and interval levels are configured, and a manifest capturing seed,
    config hash, the full step log, and row counts.
    """
    base_dir = Path(base_dir)
    table = _read_input(config, base_dir)
    roles = {**_DEFAULT_ROLES[config.schema], **config.roles}
    ctx = init(table, id=roles["id"], time=roles.get("time"), group=roles.get("group"))

    for step in config.steps:
        fn = get_operation(step["operation"])
        ctx = fn(ctx, **dict(step.get("params", {})))

    recipes = {}
    for name, spec in config.indexes.items():
        spec = dict(spec)
        builder = RECIPE_BUILDERS[name]
        if "seed" in inspect.signature(builder).parameters:
            spec.setdefault("seed", config.seed)
        recipes[name] = builder(**spec)

    step_log = [r.to_dict() for r in ctx.step_log]
    if recipes:
        result = compute_indexes(ctx, **recipes)
        step_log.append(
            StepRecord(
                module="data-core",
                operation="compute_indexes",
                params={name: r.describe() for name, r in recipes.items()},
            ).to_dict()
        )
    else:
        result = ctx.table

    out_path = Path(config.output_path)
    if not out_path.is_absolute():
        out_path = base_dir / out_path
    iomod.write_result(result, out_path, config.output_format)

    intervals_path = None
    if config.intervals and ".replicate" in result.columns:
        levels = tuple(config.intervals.get("levels", (0.80, 0.95)))
        ci = bootstrap_ci(
            result, levels, id_col=roles["id"], time_col=roles["time"]
        )
        intervals_path = out_path.with_name(out_path.stem + "_intervals" + out_path.suffix)
        iomod.write_result(ci, intervals_path, config.output_format)

    counts: dict = {"total": int(len(result))}
    if IDX_COL in result.columns:
        by_index = result.groupby(IDX_COL).size()
        counts["by_index"] = {str(k): int(v) for k, v in by_index.items()}
    manifest_path = Path(str(out_path) + ".manifest.json")
    iomod.write_manifest(
        manifest_path, seed=config.seed, cfg_hash=config.hash(), step_log=step_log,
        row_counts=counts,
    )
    return RunReport(
        output_path=out_path, manifest_path=manifest_path, rows=len(result),
        intervals_path=intervals_path,
    )
