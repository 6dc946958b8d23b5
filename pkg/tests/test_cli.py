import json

import numpy as np
import pandas as pd
import pytest

from indexpipe.cli import main
from indexpipe import read_result

from conftest import station_frame


@pytest.fixture
def station_csv(tmp_path):
    df = station_frame(n_stations=2, n_months=120)
    out = df.copy()
    out["ym"] = out["ym"].astype(str)
    path = tmp_path / "stations.csv"
    out.drop(columns=["month"]).to_csv(path, index=False)
    return path


@pytest.fixture
def gggi_csv(tmp_path, fixtures_dir):
    return fixtures_dir / "gggi_sample.csv"


def test_spi_subcommand(station_csv, tmp_path):
    out = tmp_path / "spi.csv"
    code = main(["spi", "--in", str(station_csv), "--out", str(out), "--scale", "24", "--quiet"])
    assert code == 0
    result = read_result(out)
    assert set(result[".scale"].dropna()) == {24}
    assert set(result[".idx"]) == {"spi"}
    assert (tmp_path / "spi.csv.manifest.json").exists()


def test_spei_subcommand(station_csv, tmp_path):
    out = tmp_path / "spei.csv"
    code = main([
        "spei", "--in", str(station_csv), "--out", str(out),
        "--scale", "6,12", "--dist", "gev,glo", "--quiet",
    ])
    assert code == 0
    result = read_result(out)
    assert set(result[".dist"]) == {"gev", "glo"}


def test_bootstrap_point_estimates_only_when_nboot_one(station_csv, tmp_path):
    out = tmp_path / "boot.csv"
    code = main([
        "bootstrap", "--in", str(station_csv), "--out", str(out),
        "--n-boot", "1", "--scale", "12", "--quiet",
    ])
    assert code == 0
    result = pd.read_csv(out)
    assert ".lower_80" not in result.columns
    assert ".replicate" not in result.columns


def test_bootstrap_intervals(station_csv, tmp_path):
    out = tmp_path / "boot.csv"
    code = main([
        "bootstrap", "--in", str(station_csv), "--out", str(out),
        "--n-boot", "25", "--scale", "12", "--levels", "0.8,0.95",
        "--seed", "3", "--quiet",
    ])
    assert code == 0
    ci = pd.read_csv(out)
    assert {".lower_80", ".upper_80", ".lower_95", ".upper_95"} <= set(ci.columns)
    assert (ci[".lower_95"] <= ci[".lower_80"]).all()


def test_gggi_subcommand(gggi_csv, tmp_path, fixtures_dir):
    out = tmp_path / "gggi.csv"
    code = main([
        "gggi", "--in", str(gggi_csv), "--out", str(out),
        "--weights", str(fixtures_dir / "gggi_weights.csv"), "--quiet",
    ])
    assert code == 0
    result = pd.read_csv(out)
    assert len(result) == 16
    assert result[".rank"].sort_values().tolist() == list(range(1, 17))


def test_sweep_subcommand(gggi_csv, tmp_path):
    out = tmp_path / "sweep.csv"
    code = main([
        "sweep", "--in", str(gggi_csv), "--out", str(out),
        "--range", "0.07:0.52", "--frames", "29", "--quiet",
    ])
    assert code == 0
    table = pd.read_csv(out)
    assert table[".frame"].nunique() == 29
    assert len(table) == 29 * 16


def test_unknown_flag_exits_2(station_csv):
    with pytest.raises(SystemExit) as exc:
        main(["spi", "--in", str(station_csv), "--frobnicate"])
    assert exc.value.code == 2


def test_domain_error_exits_1_with_json(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("id,ym,prcp\nA,1990-01,1\nA,1990-01,2\n")
    code = main(["spi", "--in", str(path), "--out", str(tmp_path / "o.csv"), "--quiet"])
    assert code == 1
    err = capsys.readouterr().err.strip().splitlines()[-1]
    payload = json.loads(err)
    assert payload["error"] == "DuplicateKeyError"


def test_json_format(station_csv, tmp_path):
    out = tmp_path / "spi.json"
    code = main([
        "spi", "--in", str(station_csv), "--out", str(out),
        "--scale", "12", "--format", "json", "--quiet",
    ])
    assert code == 0
    first = json.loads(out.read_text().splitlines()[0])
    assert first[".idx"] == "spi"


def test_compute_on_bundled_config(fixtures_dir, tmp_path, monkeypatch):
    import shutil

    workdir = tmp_path / "fix"
    workdir.mkdir()
    for name in ("stations_small.csv", "drought.yaml"):
        shutil.copy(fixtures_dir / name, workdir / name)
    code = main(["compute", str(workdir / "drought.yaml"), "--quiet"])
    assert code == 0
    result = read_result(workdir / "out" / "drought.csv")
    assert set(result[".idx"]) == {"spi", "spei"}
    manifest = json.loads((workdir / "out" / "drought.csv.manifest.json").read_text())
    assert manifest["seed"] == 42
