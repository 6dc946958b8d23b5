"""indexpipe: composable pipelines for building, perturbing, and
uncertainty-quantifying composite indexes over long-format tables."""

from .aggregate import RollingSpec, SpatialMapping, spatial_aggregate, temporal_rolling_window
from .config import PipelineConfig, RunReport, run
from .distributions import (
    FittedDist,
    dist_gamma,
    dist_gev,
    dist_glo,
    fit_by_lmoments,
    get_family,
)
from .errors import PipelineError, PipelineWarning
from .fitting import distribution_fit, substream
from .formula import LinearFormula, evaluate_formula, parse_formula
from .grid import ParameterGrid, Recipe, compute_indexes, order_result_columns
from .indexes import (
    gggi_weight_table,
    idx_gggi,
    idx_spei,
    idx_spi,
    spei_recipe,
    spi_recipe,
)
from .io import (
    read_result,
    read_station_csv,
    read_weights_csv,
    write_manifest,
    write_result,
)
from .lmoments import LMoments, sample_l_moments
from .normalize import norm_quantile, normal_cdf, normalize
from .pet import add_pet, pet_thornthwaite
from .pipeline import PipelineContext, StepRecord, add_meta, init, replay
from .reduce import (
    WeightScheme,
    aggregate_geometric,
    aggregate_linear,
    weights_from_inverse_sd,
)
from .sensitivity import WeightFrame, rank_delta, sweep_table, weight_sweep
from .simplify import Benchmark, SimplificationScheme, drought_scheme, set_benchmark, simplify
from .transform import ScalingSpec, rescale, transform
from .uncertainty import bootstrap_ci, quantile_linear

__version__ = "0.1.0"

__all__ = [
    "Benchmark",
    "FittedDist",
    "LMoments",
    "LinearFormula",
    "ParameterGrid",
    "PipelineConfig",
    "PipelineContext",
    "PipelineError",
    "PipelineWarning",
    "Recipe",
    "RollingSpec",
    "RunReport",
    "ScalingSpec",
    "SimplificationScheme",
    "SpatialMapping",
    "StepRecord",
    "WeightFrame",
    "WeightScheme",
    "add_meta",
    "add_pet",
    "aggregate_geometric",
    "aggregate_linear",
    "bootstrap_ci",
    "compute_indexes",
    "dist_gamma",
    "dist_gev",
    "dist_glo",
    "distribution_fit",
    "drought_scheme",
    "evaluate_formula",
    "fit_by_lmoments",
    "get_family",
    "gggi_weight_table",
    "idx_gggi",
    "idx_spei",
    "idx_spi",
    "init",
    "norm_quantile",
    "normal_cdf",
    "normalize",
    "order_result_columns",
    "parse_formula",
    "pet_thornthwaite",
    "quantile_linear",
    "rank_delta",
    "read_result",
    "read_station_csv",
    "read_weights_csv",
    "replay",
    "rescale",
    "run",
    "sample_l_moments",
    "set_benchmark",
    "simplify",
    "spatial_aggregate",
    "spei_recipe",
    "spi_recipe",
    "substream",
    "sweep_table",
    "temporal_rolling_window",
    "transform",
    "weight_sweep",
    "weights_from_inverse_sd",
    "write_manifest",
    "write_result",
]
