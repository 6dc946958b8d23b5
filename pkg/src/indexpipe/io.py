"""CSV ingestion with typed schemas, tidy CSV/JSON emission, run manifests."""
from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DomainError, DuplicateKeyError, SchemaError
from .grid import DIST_COL, IDX_COL, SCALE_COL, order_result_columns

_YM_RE = re.compile(r"^\d{4}-(0[1-9]|1[0-2])$")

STATION_NUMERIC = ("prcp", "tmax", "tmin", "tavg", "long", "lat")


def read_station_csv(path) -> pd.DataFrame:
    """Monthly station table: id, ym ("YYYY-MM"), measures, coordinates.

    Adds a derived ``month`` column (1-12) for calendar grouping. Malformed
    values report their file line; duplicate (id, ym) pairs are an error.
    """
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    for required in ("id", "ym"):
        if required not in df.columns:
            raise SchemaError(f"{path}: station csv needs column {required!r}, got {list(df.columns)}")

    bad = [i for i, v in enumerate(df["ym"]) if not _YM_RE.match(v)]
    if bad:
        raise SchemaError(f"{path}: unparseable ym {df['ym'].iloc[bad[0]]!r} at line {bad[0] + 2}")
    out = pd.DataFrame({"id": df["id"].astype(str)})
    out["ym"] = pd.PeriodIndex(df["ym"], freq="M") if len(df) else pd.PeriodIndex([], freq="M")

    for col in df.columns:
        if col in ("id", "ym"):
            continue
        if col in STATION_NUMERIC or col != "name":
            values = pd.to_numeric(df[col].replace("", np.nan), errors="coerce")
            garbage = values.isna() & (df[col] != "")
            if garbage.any():
                line = int(np.flatnonzero(garbage)[0]) + 2
                raise SchemaError(
                    f"{path}: non-numeric value {df[col][garbage].iloc[0]!r} in column "
                    f"{col!r} at line {line}"
                )
            out[col] = values
        else:
            out[col] = df[col].astype(str)

    dup = out.duplicated(subset=["id", "ym"])
    if dup.any():
        pairs = out.loc[dup, ["id", "ym"]].astype(str).head(5).to_records(index=False).tolist()
        raise DuplicateKeyError(f"{path}: duplicate (id, ym) rows, e.g. {pairs}")
    out["month"] = out["ym"].dt.month if len(out) else pd.Series(dtype=np.int64)
    return out


def read_weights_csv(path) -> pd.DataFrame:
    """Weight table with columns variable/v_wgt/dimension/d_wgt/wgt.

    Accepts the published header spellings (Variable, V-wgt, ...) as well.
    """
    df = pd.read_csv(path)
    rename = {
        "Variable": "variable", "V-wgt": "v_wgt", "Dimension": "dimension",
        "D-wgt": "d_wgt", "wgt": "wgt", "Wgt": "wgt",
    }
    df = df.rename(columns={k: v for k, v in rename.items() if k in df.columns})
    needed = {"variable", "v_wgt", "dimension", "d_wgt", "wgt"}
    if not needed <= set(df.columns):
        raise SchemaError(f"{path}: weight csv needs columns {sorted(needed)}, got {list(df.columns)}")
    df["variable"] = df["variable"].astype(str)
    df["dimension"] = df["dimension"].astype(str)
    for col in ("v_wgt", "d_wgt", "wgt"):
        df[col] = pd.to_numeric(df[col])
    return df


def read_gggi_csv(path, id_col: str = "country") -> pd.DataFrame:
    df = pd.read_csv(path)
    if id_col not in df.columns:
        raise SchemaError(f"{path}: needs id column {id_col!r}, got {list(df.columns)}")
    df[id_col] = df[id_col].astype(str)
    return df


def write_result(df: pd.DataFrame, path, fmt: str = "csv") -> Path:
    """Write a result table as CSV or JSON-lines records, canonical column
    order, deterministic bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    out = order_result_columns(df)
    if fmt == "csv":
        out.to_csv(path, index=False)
    elif fmt == "json":
        with open(path, "w") as fh:
            for record in out.to_dict(orient="records"):
                clean = {
                    k: (None if _is_missing(v) else _jsonify(v)) for k, v in record.items()
                }
                fh.write(json.dumps(clean) + "\n")
    else:
        raise DomainError(f"format must be 'csv' or 'json', got {fmt!r}")
    return path


def _is_missing(v) -> bool:
    try:
        return bool(pd.isna(v))
    except (TypeError, ValueError):
        return False


def _jsonify(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (pd.Period, pd.Timestamp)):
        return str(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def read_result(path) -> pd.DataFrame:
    """Read back a result CSV with the writer's types (ym periods, Int64
    provenance, empty .dist as empty string). The round-trip float parser
    makes write-then-read reproduce values exactly."""
    df = pd.read_csv(path, float_precision="round_trip")
    if "ym" in df.columns:
        df["ym"] = pd.PeriodIndex(df["ym"].astype(str), freq="M")
    if "id" in df.columns:
        df["id"] = df["id"].astype(str)
    for col in (SCALE_COL, ".replicate", ".rank", "month", ".n_members"):
        if col in df.columns:
            df[col] = df[col].astype("Int64")
    if DIST_COL in df.columns:
        df[DIST_COL] = df[DIST_COL].fillna("").astype(str)
    if IDX_COL in df.columns:
        df[IDX_COL] = df[IDX_COL].astype(str)
    for col in (".clamped", ".interval_ok"):
        if col in df.columns:
            df[col] = df[col].astype(bool)
    return df


def config_hash(config_dict: dict) -> str:
    canonical = json.dumps(config_dict, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_manifest(path, *, seed: int, cfg_hash: str, step_log, row_counts: dict) -> Path:
    """Run manifest beside the output: seed, config hash, step log, row counts."""
    path = Path(path)
    manifest = {
        "seed": seed,
        "config_hash": cfg_hash,
        "step_log": [r.to_dict() if hasattr(r, "to_dict") else r for r in step_log],
        "row_counts": row_counts,
    }
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2, default=str) + "\n")
    return path
