"""CLI surface: every subcommand, exit codes, file formats, determinism."""

import csv
import json

import numpy as np
import pytest

from gigsim.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_version_and_help(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.startswith("gigsim ")
    code, out, _ = run(capsys, "sample", "--help")
    assert code == 0 and "--lambda" in out


def test_missing_subcommand_fails(capsys):
    code, _, err = run(capsys)
    assert code == 1


def test_sample_csv_stdout(capsys):
    code, out, _ = run(
        capsys, "sample", "--lambda", "-0.4", "--gamma", "0.5",
        "--delta", "1", "--n", "20", "--epochs", "200",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "W"
    vals = [float(v) for v in lines[1:]]
    assert len(vals) == 20
    assert all(v >= 0.0 for v in vals)


def test_sample_csv_file_with_meta(tmp_path, capsys):
    out_file = tmp_path / "draws.csv"
    code, _, _ = run(
        capsys, "sample", "--lambda", "-0.4", "--gamma", "0.5", "--delta", "1",
        "--n", "15", "--epochs", "200", "--seed", "3", "--out", str(out_file),
    )
    assert code == 0
    with open(out_file, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["W"] and len(rows) == 16
    meta = json.loads((tmp_path / "draws.csv.meta.json").read_text())
    assert meta["process"] == "gig"
    assert meta["params"]["lam"] == -0.4
    assert meta["seed"] == 3
    assert meta["backend"] in ("pure", "compiled")
    # acceptance bookkeeping travels with the draws
    assert set(meta["acceptance"]) == {"below_corner", "above_corner"}
    assert meta["acceptance"]["below_corner"]["proposed"] > 0


def test_sample_json_format(capsys):
    code, out, _ = run(
        capsys, "sample", "--lambda", "1.0", "--gamma", "0.4", "--delta", "4",
        "--n", "10", "--epochs", "200", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["samples"]) == 10
    assert set(payload["meta"]["acceptance"]) == {"direct", "gamma_term"}


def test_sample_worker_determinism(tmp_path, capsys):
    argv = [
        "sample", "--lambda", "-0.4", "--gamma", "0.5", "--delta", "1",
        "--n", "30", "--epochs", "200", "--seed", "11",
    ]
    code1, out1, _ = run(capsys, *argv, "--workers", "1")
    code2, out2, _ = run(capsys, *argv, "--workers", "4")
    assert code1 == code2 == 0
    assert out1 == out2
    # a different seed must change the draws
    _, out3, _ = run(capsys, *argv[:-1], "12")
    assert out3 != out1


def test_sample_gh_process(capsys):
    code, out, _ = run(
        capsys, "sample", "--process", "gh", "--lambda", "-0.4", "--gamma", "0.5",
        "--delta", "1", "--mu-w", "0.3", "--sigma-w", "1.1",
        "--n", "12", "--epochs", "200",
    )
    assert code == 0
    vals = [float(v) for v in out.strip().splitlines()[1:]]
    assert len(vals) == 12
    # signed process: with these marks some draws should be negative
    assert any(v < 0 for v in vals)


def test_path_long_csv(capsys):
    code, out, _ = run(
        capsys, "path", "--lambda", "-0.4", "--gamma", "0.5", "--delta", "1",
        "--paths", "3", "--grid", "0:1:11", "--epochs", "200",
    )
    assert code == 0
    rows = list(csv.reader(out.strip().splitlines()))
    assert rows[0] == ["path_id", "t", "W"]
    assert len(rows) == 1 + 3 * 11
    # per path, W is nondecreasing for the subordinator
    for pid in "012":
        w = [float(r[2]) for r in rows[1:] if r[0] == pid]
        assert all(b >= a for a, b in zip(w, w[1:]))


def test_path_grid_must_fit_horizon(capsys):
    code, _, err = run(
        capsys, "path", "--lambda", "-0.4", "--gamma", "0.5", "--delta", "1",
        "--grid", "0:2:5",
    )
    assert code == 1
    assert "horizon" in err


def test_bounds_table(tmp_path, capsys):
    out_file = tmp_path / "bounds.csv"
    code, _, _ = run(
        capsys, "bounds", "--lambda", "-0.4", "--gamma", "0.5", "--delta", "1",
        "--grid", "0.01:10:5", "--out", str(out_file),
    )
    assert code == 0
    with open(out_file, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    for row in rows:
        lo, ref, hi = float(row["qa"]), float(row["q_ref"]), float(row["qb_star"])
        assert lo <= ref * (1 + 1e-9) and ref <= hi * (1 + 1e-9)


def test_bounds_no_reference(capsys):
    code, out, _ = run(
        capsys, "bounds", "--lambda", "-0.4", "--gamma", "0.5", "--delta", "1",
        "--grid", "0.1:1:3", "--no-reference",
    )
    assert code == 0
    rows = list(csv.DictReader(out.strip().splitlines()))
    assert all(row["q_ref"] == "nan" for row in rows)


def test_rho_high_and_low_and_half(capsys):
    code, out, _ = run(
        capsys, "rho", "--lambda", "-1.0", "--gamma", "0.5", "--delta", "4",
        "--grid", "0.01:100:4",
    )
    assert code == 0
    rows = list(csv.DictReader(out.strip().splitlines()))
    assert len(rows) == 4
    for row in rows:
        assert 0.0 < float(row["rho_lower"]) <= float(row["rho_upper"]) <= 1.0 + 1e-12

    code, out, _ = run(
        capsys, "rho", "--lambda", "-0.3", "--gamma", "0.5", "--delta", "2",
    )
    rows = list(csv.DictReader(out.strip().splitlines()))
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["rho1_floor"]) == pytest.approx(float(rows[0]["rho2_floor"]))

    code, out, _ = run(
        capsys, "rho", "--lambda", "0.5", "--gamma", "1", "--delta", "1",
        "--grid", "0.1:10:3",
    )
    rows = list(csv.DictReader(out.strip().splitlines()))
    assert code == 0
    assert all(row["rho_lower"] == "1" and row["rho_upper"] == "1" for row in rows)


def test_verify_accepts(tmp_path, capsys):
    prefix = str(tmp_path / "v")
    code, out, _ = run(
        capsys, "verify", "--lambda", "-0.4", "--gamma", "0.5", "--delta", "1",
        "--n", "3000", "--epochs", "600", "--alpha", "0.001",
        "--out-prefix", prefix,
    )
    report = json.loads(out)
    assert code == 0
    assert report["reject"] is False
    assert report["ks_statistic"] < report["ks_threshold"]
    assert (tmp_path / "v_qq.csv").exists()
    assert (tmp_path / "v_hist.csv").exists()


def test_verify_rejects_with_tiny_budget(capsys):
    # 3 epochs cannot carry the law: the KS comparison must fail loudly
    code, out, _ = run(
        capsys, "verify", "--lambda", "-1.0", "--gamma", "0.5", "--delta", "4",
        "--n", "2000", "--epochs", "3", "--alpha", "0.01",
    )
    report = json.loads(out)
    assert code == 2
    assert report["reject"] is True


def test_parameter_errors_exit_1(capsys):
    code, _, err = run(
        capsys, "sample", "--lambda", "0", "--gamma", "1", "--delta", "1", "--n", "5"
    )
    assert code == 1 and "parameter error" in err
    code, _, err = run(
        capsys, "bounds", "--lambda", "-0.4", "--delta", "1", "--grid", "nope"
    )
    assert code == 1
    code, _, err = run(
        capsys, "sample", "--lambda", "-0.4", "--delta", "1", "--z0", "-2"
    )
    assert code == 1
    # gamma defaults to 0, which needs lam < 0
    code, _, err = run(capsys, "sample", "--lambda", "0.4", "--delta", "1", "--n", "5")
    assert code == 1


def test_unknown_flag_exits_1(capsys):
    code, _, _ = run(capsys, "sample", "--lambda", "-0.4", "--bogus", "1")
    assert code == 1
