"""Bundled index recipes: SPI, SPEI (with PET derivation), and GGGI.

Each bundles generic pipeline steps; the wrappers add no behavior of
their own, so a recipe run equals the equivalent manual composition.
"""
from __future__ import annotations

from typing import Optional

import numpy as np
import pandas as pd

from .distributions import get_family
from .errors import DomainError, SchemaError
from .fitting import distribution_fit
from .formula import LinearFormula, evaluate_formula
from .grid import (
    DIST_COL,
    IDX_COL,
    ParameterGrid,
    Recipe,
    SCALE_COL,
    VALUE_COL,
    compute_indexes,
    order_result_columns,
    register_recipe,
)
from .aggregate import temporal_rolling_window
from .normalize import normalize
from .pet import add_pet
from .pipeline import PipelineContext, add_meta, init
from .reduce import WeightScheme, weighted_sum
from .table import rank_descending

RANK_COL = ".rank"

# Published weights: stage-one variable weights (inverse-sd based, per
# dimension) and the equal stage-two dimension weights, plus the rounded
# composite product used for the single-combination form of the index.
GGGI_DIMENSIONS = ("economy", "education", "health", "politics")
_GGGI_ROWS = (
    ("labour_force_participation", 0.199, "economy", 0.25, 0.050),
    ("wage_equality_for_similar_work", 0.310, "economy", 0.25, 0.078),
    ("estimated_earned_income", 0.221, "economy", 0.25, 0.055),
    ("legislators_senior_officials_and_managers", 0.149, "economy", 0.25, 0.037),
    ("professional_and_technical_workers", 0.121, "economy", 0.25, 0.030),
    ("literacy_rate", 0.191, "education", 0.25, 0.048),
    ("enrolment_in_primary_education", 0.459, "education", 0.25, 0.115),
    ("enrolment_in_secondary_education", 0.230, "education", 0.25, 0.058),
    ("enrolment_in_tertiary_education", 0.121, "education", 0.25, 0.030),
    ("sex_ratio_at_birth", 0.693, "health", 0.25, 0.173),
    ("healthy_life_expectancy", 0.307, "health", 0.25, 0.077),
    ("women_in_parliament", 0.310, "politics", 0.25, 0.078),
    ("women_in_ministerial_positions", 0.247, "politics", 0.25, 0.062),
    ("years_with_female_head_of_state", 0.443, "politics", 0.25, 0.111),
)


def gggi_weight_table() -> pd.DataFrame:
    return pd.DataFrame(
        list(_GGGI_ROWS), columns=["variable", "v_wgt", "dimension", "d_wgt", "wgt"]
    )


@register_recipe("spi")
def spi_recipe(
    scales,
    variable: str = "prcp",
    dist: str = "gamma",
    n_boot: int = 1,
    seed: int = 0,
    min_points: int = 4,
) -> Recipe:
    """Rolling sum -> per-(id, group) fit -> normal scores."""
    fam = get_family(dist)

    def fn(ctx: PipelineContext, scale: int, dist) -> PipelineContext:
        c = temporal_rolling_window(ctx, variable, scale, stat="sum")
        c = distribution_fit(c, ".agg", dist, n_boot=n_boot, seed=seed, min_points=min_points)
        return normalize(c, ".fitted", VALUE_COL)

    grid = ParameterGrid({"scale": tuple(int(s) for s in scales), "dist": (fam,)})
    return Recipe(
        fn=fn, grid=grid, builder="spi",
        builder_params={
            "scales": [int(s) for s in scales], "variable": variable, "dist": fam.name,
            "n_boot": int(n_boot), "seed": int(seed), "min_points": int(min_points),
        },
    )


@register_recipe("spei")
def spei_recipe(
    scales,
    dists=("gev", "glo"),
    variable: str = "prcp",
    tavg: str = "tavg",
    lat: str = "lat",
    n_boot: int = 1,
    seed: int = 0,
    min_points: int = 4,
) -> Recipe:
    """PET -> water balance -> rolling sum -> per-(id, group) fit -> scores."""
    fams = tuple(get_family(d) for d in dists)
    bad = [f.name for f in fams if f.name not in ("gev", "glo")]
    if bad:
        raise DomainError(f"spei fits gev/glo families, got {bad}")

    def fn(ctx: PipelineContext, scale: int, dist) -> PipelineContext:
        c = add_pet(ctx, tavg=tavg, lat=lat, out=".pet")
        c = evaluate_formula(c, LinearFormula(((1.0, variable), (-1.0, ".pet"))), ".balance")
        c = temporal_rolling_window(c, ".balance", scale, stat="sum")
        c = distribution_fit(c, ".agg", dist, n_boot=n_boot, seed=seed, min_points=min_points)
        return normalize(c, ".fitted", VALUE_COL)

    grid = ParameterGrid({"scale": tuple(int(s) for s in scales), "dist": fams})
    return Recipe(
        fn=fn, grid=grid, builder="spei",
        builder_params={
            "scales": [int(s) for s in scales], "dists": [f.name for f in fams],
            "variable": variable, "tavg": tavg, "lat": lat,
            "n_boot": int(n_boot), "seed": int(seed), "min_points": int(min_points),
        },
    )


def idx_spi(ctx: PipelineContext, scales, **kwargs) -> pd.DataFrame:
    return compute_indexes(ctx, spi=spi_recipe(scales, **kwargs))


def idx_spei(ctx: PipelineContext, scales, dists=("gev", "glo"), **kwargs) -> pd.DataFrame:
    return compute_indexes(ctx, spei=spei_recipe(scales, dists, **kwargs))


def _scheme_from(names, values) -> WeightScheme:
    return WeightScheme(dict(zip(names, values))).normalize()


def _attach_ranks(table: pd.DataFrame, id_col: str) -> pd.DataFrame:
    values = table[VALUE_COL].to_numpy(dtype=float)
    ranks = pd.array(rank_descending(values, table[id_col]), dtype="Int64")
    ranks[np.isnan(values)] = pd.NA
    table[RANK_COL] = ranks
    return table


def idx_gggi(
    data,
    weights: Optional[pd.DataFrame] = None,
    id_col: str = "country",
    mode: str = "composite",
    weights_source: str = "wgt",
    truncate: bool = False,
) -> pd.DataFrame:
    """Gender-gap index values and ranks per country.

    Modes: ``composite`` applies one linear combination over the 14
    variables (weights from the published ``wgt`` column, or the exact
    stage products when ``weights_source='product'``); ``two_stage``
    aggregates variables into the four dimensions and then combines those;
    ``dimensions`` expects the four dimension columns directly (the path
    that stays reproducible when raw variables have missing values).
    Ranks are 1..n by descending value, ties broken by id.
    """
    wt = weights if weights is not None else gggi_weight_table()
    needed = {"variable", "v_wgt", "dimension", "d_wgt", "wgt"}
    if not needed <= set(wt.columns):
        raise SchemaError(f"weight table needs columns {sorted(needed)}, got {list(wt.columns)}")
    ctx = data if isinstance(data, PipelineContext) else init(data, id=id_col)
    id_col = ctx.id_role
    # dimension-level tables carry the four dimension columns, not the raw
    # variables, so the metadata join keys on the matching column
    ctx = add_meta(ctx, wt, var_col="dimension" if mode == "dimensions" else "variable")
    wt = ctx.metadata

    variables = [str(v) for v in wt["variable"]]
    dims = [d for d in GGGI_DIMENSIONS if d in set(wt["dimension"])]
    d_wgt = {d: float(wt.loc[wt["dimension"] == d, "d_wgt"].iloc[0]) for d in dims}

    if mode in ("composite", "two_stage"):
        missing = [v for v in variables if v not in ctx.table.columns]
        if missing:
            raise SchemaError(
                f"mode {mode!r} needs all weighted variables; missing {missing}. "
                "Aggregate to dimension columns and use mode='dimensions'."
            )
        if truncate:
            table = ctx.table.copy()
            table[variables] = table[variables].clip(upper=1.0)
            ctx = ctx.with_table(table, module="indexes", operation="truncate_ratios",
                                 variables=variables)

    if mode == "composite":
        if weights_source == "product":
            w = (wt["v_wgt"] * wt["d_wgt"]).to_numpy(dtype=float)
        elif weights_source == "wgt":
            w = wt["wgt"].to_numpy(dtype=float)
        else:
            raise DomainError(f"weights_source must be 'wgt' or 'product', got {weights_source!r}")
        scheme = _scheme_from(variables, w)
        values = weighted_sum(ctx.table, variables, scheme.weights_for(variables))
    elif mode == "two_stage":
        stage = ctx.table.copy()
        for d in dims:
            rows = wt[wt["dimension"] == d]
            names = [str(v) for v in rows["variable"]]
            scheme = _scheme_from(names, rows["v_wgt"].to_numpy(dtype=float))
            stage[d] = weighted_sum(ctx.table, names, scheme.weights_for(names))
        dscheme = _scheme_from(dims, [d_wgt[d] for d in dims])
        values = weighted_sum(stage, dims, dscheme.weights_for(dims))
        ctx = ctx.with_table(stage, module="indexes", operation="gggi_stage_one",
                             dimensions=dims)
    elif mode == "dimensions":
        missing = [d for d in dims if d not in ctx.table.columns]
        if missing:
            raise SchemaError(
                f"mode 'dimensions' needs the dimension columns {dims}; missing {missing}"
            )
        dscheme = _scheme_from(dims, [d_wgt[d] for d in dims])
        values = weighted_sum(ctx.table, dims, dscheme.weights_for(dims))
    else:
        raise DomainError(f"mode must be composite/two_stage/dimensions, got {mode!r}")

    table = ctx.table.copy()
    table[IDX_COL] = "gggi"
    table[DIST_COL] = ""
    table[SCALE_COL] = pd.array([None] * len(table), dtype="Int64")
    table[VALUE_COL] = values
    table = _attach_ranks(table, id_col)
    return order_result_columns(table)


@register_recipe("gggi")
def gggi_recipe(
    weights=None, mode: str = "composite", weights_source: str = "wgt", truncate: bool = False
) -> Recipe:
    """Single-combo recipe form of the gender-gap index for grid runs."""
    wt = pd.DataFrame(list(weights)) if isinstance(weights, (list, tuple)) else weights

    def fn(ctx: PipelineContext, method: str) -> PipelineContext:
        result = idx_gggi(ctx, weights=wt, mode=method,
                          weights_source=weights_source, truncate=truncate)
        keep = result.drop(columns=[IDX_COL, DIST_COL, SCALE_COL])
        return ctx.with_table(keep, module="indexes", operation="idx_gggi", mode=method)

    return Recipe(
        fn=fn, grid=ParameterGrid({"method": (mode,)}), builder="gggi",
        builder_params={
            "weights": None if wt is None else wt.to_dict("records"),
            "mode": mode, "weights_source": weights_source, "truncate": truncate,
        },
    )
