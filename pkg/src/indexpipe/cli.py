"""Batch command-line interface.

Subcommands: compute (config-driven), spi, spei, gggi, bootstrap, sweep.
Domain errors exit 1 with a machine-readable error JSON on stderr; usage
errors exit 2 with argparse's usage text.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as iomod
from .config import PipelineConfig, run
from .errors import PipelineError
from .grid import compute_indexes
from .indexes import gggi_weight_table, idx_gggi, spei_recipe, spi_recipe
from .pipeline import StepRecord, init
from .sensitivity import sweep_table, weight_sweep
from .uncertainty import bootstrap_ci


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return float(lo), float(hi)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="indexpipe", description="Composite-index pipeline runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="run a YAML pipeline config")
    p.add_argument("config")
    _add_common(p)

    p = sub.add_parser("spi", help="standardized precipitation index")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--scale", type=_ints, default=[6, 12, 24, 36])
    p.add_argument("--variable", default="prcp")
    p.add_argument("--n-boot", type=int, default=1)
    p.add_argument("--min-points", type=int, default=4)
    _add_common(p)

    p = sub.add_parser("spei", help="standardized precipitation-evapotranspiration index")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--scale", type=_ints, default=[6, 12, 24, 36])
    p.add_argument("--dist", type=lambda s: s.split(","), default=["gev", "glo"])
    p.add_argument("--variable", default="prcp")
    p.add_argument("--n-boot", type=int, default=1)
    p.add_argument("--min-points", type=int, default=4)
    _add_common(p)

    p = sub.add_parser("gggi", help="gender-gap index values and ranks")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--weights", default=None, help="weight csv (defaults to bundled table)")
    p.add_argument("--mode", choices=("composite", "two_stage", "dimensions"), default="composite")
    p.add_argument("--id-col", default="country")
    _add_common(p)

    p = sub.add_parser("bootstrap", help="bootstrap confidence intervals for SPI")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--scale", type=int, default=24)
    p.add_argument("--variable", default="prcp")
    p.add_argument("--n-boot", type=int, default=100)
    p.add_argument("--levels", type=_floats, default=[0.8, 0.95])
    p.add_argument("--min-points", type=int, default=4)
    _add_common(p)

    p = sub.add_parser("sweep", help="politics-style weight sweep with rank tracking")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--target", default="politics")
    p.add_argument("--range", dest="sweep_range", type=_range, default=(0.07, 0.52))
    p.add_argument("--frames", type=int, default=29)
    p.add_argument("--id-col", default="country")
    _add_common(p)

    return parser


def _station_ctx(path: str):
    table = iomod.read_station_csv(path)
    return init(table, id="id", time="ym", group="month")


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _write_with_manifest(args, result, step_log) -> None:
    out = iomod.write_result(result, args.output, args.format)
    counts = {"total": int(len(result))}
    if ".idx" in result.columns:
        counts["by_index"] = {
            str(k): int(v) for k, v in result.groupby(".idx").size().items()
        }
    cfg_hash = iomod.config_hash({"argv": [a for a in sys.argv[1:]]})
    iomod.write_manifest(
        Path(str(out) + ".manifest.json"),
        seed=args.seed, cfg_hash=cfg_hash, step_log=step_log, row_counts=counts,
    )
    _say(args, f"wrote {out} ({len(result)} rows)")


def _cmd_compute(args) -> int:
    config = PipelineConfig.from_yaml(args.config)
    report = run(config, base_dir=Path(args.config).parent)
    _say(args, f"wrote {report.output_path} ({report.rows} rows)")
    return 0


def _cmd_spi(args) -> int:
    ctx = _station_ctx(args.input)
    recipe = spi_recipe(args.scale, variable=args.variable, n_boot=args.n_boot,
                        seed=args.seed, min_points=args.min_points)
    result = compute_indexes(ctx, spi=recipe)
    log = [r.to_dict() for r in ctx.step_log]
    log.append(StepRecord("data-core", "compute_indexes", {"spi": recipe.describe()}).to_dict())
    _write_with_manifest(args, result, log)
    return 0


def _cmd_spei(args) -> int:
    ctx = _station_ctx(args.input)
    recipe = spei_recipe(args.scale, dists=args.dist, variable=args.variable,
                         n_boot=args.n_boot, seed=args.seed, min_points=args.min_points)
    result = compute_indexes(ctx, spei=recipe)
    log = [r.to_dict() for r in ctx.step_log]
    log.append(StepRecord("data-core", "compute_indexes", {"spei": recipe.describe()}).to_dict())
    _write_with_manifest(args, result, log)
    return 0


def _cmd_gggi(args) -> int:
    table = iomod.read_gggi_csv(args.input, id_col=args.id_col)
    weights = iomod.read_weights_csv(args.weights) if args.weights else None
    result = idx_gggi(table, weights=weights, id_col=args.id_col, mode=args.mode)
    _write_with_manifest(args, result, [])
    return 0


def _cmd_bootstrap(args) -> int:
    ctx = _station_ctx(args.input)
    recipe = spi_recipe([args.scale], variable=args.variable, n_boot=args.n_boot,
                        seed=args.seed, min_points=args.min_points)
    result = compute_indexes(ctx, spi=recipe)
    if args.n_boot > 1:
        result = bootstrap_ci(result, args.levels, id_col="id", time_col="ym")
    log = [r.to_dict() for r in ctx.step_log]
    log.append(StepRecord("data-core", "compute_indexes", {"spi": recipe.describe()}).to_dict())
    _write_with_manifest(args, result, log)
    return 0


def _cmd_sweep(args) -> int:
    table = iomod.read_gggi_csv(args.input, id_col=args.id_col)
    weights = iomod.read_weights_csv(args.weights) if args.weights else gggi_weight_table()
    dims = list(dict.fromkeys(str(d) for d in weights["dimension"]))
    if not set(dims) <= set(table.columns):
        # derive the dimension columns from the raw variables first
        staged = idx_gggi(table, weights=weights, id_col=args.id_col, mode="two_stage")
        table = staged[[args.id_col] + dims].copy()
    ctx = init(table, id=args.id_col)
    lo, hi = args.sweep_range
    frames = weight_sweep(ctx, dims, args.target, lo, hi, n_frames=args.frames)
    result = sweep_table(frames)
    _write_with_manifest(args, result, [])
    return 0


_HANDLERS = {
    "compute": _cmd_compute,
    "spi": _cmd_spi,
    "spei": _cmd_spei,
    "gggi": _cmd_gggi,
    "bootstrap": _cmd_bootstrap,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except PipelineError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
