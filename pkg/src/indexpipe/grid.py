"""Parameter-grid driver: evaluate many index recipes over combo grids and
stack the results into one long table with provenance columns."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np
import pandas as pd

from .errors import ComboFailedWarning, ConfigError, DomainError
from .pipeline import PipelineContext, register_operation

IDX_COL, DIST_COL, SCALE_COL, VALUE_COL = ".idx", ".dist", ".scale", ".value"
RESULT_PROVENANCE = (IDX_COL, DIST_COL, SCALE_COL)
_INTERMEDIATES = (".agg", ".pet", ".balance", ".fitted", ".clamped", ".replicate", ".rank")

# recipe builders registered by the indexes module; name -> callable(**kwargs) -> Recipe
RECIPE_BUILDERS: dict[str, Callable] = {}


def register_recipe(name: str):
    def deco(fn):
        RECIPE_BUILDERS[name] = fn
        return fn

    return deco


def _label(value) -> object:
    name = getattr(value, "name", None)
    return name if isinstance(name, str) else value


@dataclass(frozen=True)
class ParameterGrid:
    """Named axes whose Cartesian product drives repeated evaluation."""

    axes: Mapping[str, tuple]

    def __post_init__(self):
        axes = {str(k): tuple(v) for k, v in dict(self.axes).items()}
        empty = [k for k, v in axes.items() if not v]
        if empty:
            raise DomainError(f"grid axes must be nonempty, got empty {empty}")
        object.__setattr__(self, "axes", axes)

    @property
    def size(self) -> int:
        n = 1
        for v in self.axes.values():
            n *= len(v)
        return n

    def combos(self):
        names = list(self.axes)
        for values in itertools.product(*(self.axes[n] for n in names)):
            yield dict(zip(names, values))

    def describe(self) -> dict:
        return {k: [_label(v) for v in vs] for k, vs in self.axes.items()}


@dataclass(frozen=True)
class Recipe:
    """A pipeline closure evaluated once per grid combo.

    ``fn(ctx, **combo)`` must return a context whose table carries
    ``.value``. ``builder``/``builder_params`` name a registered recipe
    factory so the computation can be replayed from a step record.
    """

    fn: Callable[..., PipelineContext]
    grid: ParameterGrid
    builder: Optional[str] = None
    builder_params: Mapping = field(default_factory=dict)

    def describe(self) -> dict:
        return {
            "builder": self.builder,
            "builder_params": dict(self.builder_params),
            "grid": self.grid.describe(),
        }


def build_recipe(spec) -> Recipe:
    """Recreate a Recipe from its described (step-record) form."""
    if isinstance(spec, Recipe):
        return spec
    name = spec.get("builder")
    if name is None:
        raise ConfigError("recipe description lacks a registered builder name")
    try:
        builder = RECIPE_BUILDERS[name]
    except KeyError:
        raise ConfigError(f"unknown recipe builder {name!r}; known: {sorted(RECIPE_BUILDERS)}") from None
    return builder(**spec.get("builder_params", {}))


def order_result_columns(df: pd.DataFrame) -> pd.DataFrame:
    """Canonical order: original columns, .idx/.dist/.scale/.value, intermediates."""
    original = [c for c in df.columns if not str(c).startswith(".")]
    prologue = [c for c in (*RESULT_PROVENANCE, VALUE_COL) if c in df.columns]
    known = [c for c in _INTERMEDIATES if c in df.columns]
    rest = [c for c in df.columns if c not in original + prologue + known]
    return df[original + prologue + known + sorted(rest)]


@register_operation("compute_indexes")
def compute_indexes(ctx: PipelineContext, **recipes) -> pd.DataFrame:
    """Evaluate each recipe over its grid and stack everything long.

    One failing combo aborts only that combo (with a warning naming the
    recipe and combo); results merge in (recipe, combo, id, time) order.
    """
    recipes = {name: build_recipe(spec) for name, spec in recipes.items()}
    frames = []
    for name, recipe in recipes.items():
        for combo in recipe.grid.combos():
            labels = {k: _label(v) for k, v in combo.items()}
            try:
                out_ctx = recipe.fn(ctx, **combo)
            except Exception as exc:
                warnings.warn(
                    f"recipe {name!r} combo {labels} failed: {exc}", ComboFailedWarning
                )
                continue
            t = out_ctx.table.copy()
            t[IDX_COL] = name
            t[DIST_COL] = str(labels.get("dist", ""))
            scale = labels.get("scale")
            t[SCALE_COL] = pd.array(
                [None if scale is None else int(scale)] * len(t), dtype="Int64"
            )
            for axis, value in labels.items():
                if axis in ("dist", "scale"):
                    continue
                t[f".{axis}"] = value
            frames.append(t)

    if not frames:
        return pd.DataFrame(
            columns=list(ctx.table.columns) + [IDX_COL, DIST_COL, SCALE_COL, VALUE_COL]
        )
    stacked = pd.concat(frames, ignore_index=True)
    return order_result_columns(stacked)
