import os

import numpy as np
import pytest

import filmflow as ff
from filmflow import io as ffio
from filmflow.cli import parse_config_file, run
from filmflow.io import read_field_binary


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_format_float_17_digits():
    assert ffio.format_float(1.0 / 3.0) == "0.33333333333333331"
    assert ffio.format_float(1.0) == "1"


def test_atomic_write_no_temp_left(tmp_path):
    target = tmp_path / "x.txt"
    ffio.atomic_write_text(str(target), "hello\n")
    assert target.read_text() == "hello\n"
    assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]


def test_field_binary_roundtrip(tmp_path, params_III, cos_state):
    jet = ff.eta_jet(cos_state, params_III, "III")
    field = ff.reconstruct(jet, params_III, "III", M=8)
    path = str(tmp_path / "u.bin")
    ffio.write_field_binary(path, field, "u")
    raw = _read(path)
    assert raw[:32].decode("ascii").startswith("FILMFLOW-FIELD v1 N=64 M=8")
    assert len(raw) == 32 + 8 * 9 * 64
    data, N, M = read_field_binary(path)
    assert (N, M) == (64, 8)
    np.testing.assert_array_equal(data, field.u)


def test_trajectory_csv_schema(tmp_path, params_III, cos_state):
    co = ff.model_coefficients(params_III, "III")
    traj = ff.simulate(cos_state, co, "III", T=0.01, dt=1e-3, stride=5)
    path = str(tmp_path / "t.csv")
    ffio.write_trajectory_csv(path, traj)
    lines = _read(path).decode().splitlines()
    assert lines[0] == "tau,norm_l2,norm_hs,mean,min,max"
    assert len(lines) == 1 + len(traj)
    assert b"\r" not in _read(path)


def test_config_file_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nN = 64\ndeltas = 0.2, 0.1\ninit = cos:0.05\n")
    parsed = parse_config_file(str(cfg))
    assert parsed == {"N": 64, "deltas": (0.2, 0.1), "init": "cos:0.05"}
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    with pytest.raises(Exception):
        parse_config_file(str(bad))


def _manifest(outdir):
    out = {}
    with open(os.path.join(outdir, "manifest.txt")) as fh:
        for line in fh:
            k, _, v = line.partition(" = ")
            out[k.strip()] = v.strip()
    return out


def test_cli_simulate_happy_path(tmp_path):
    out = str(tmp_path / "runA")
    code = run(["simulate", "--regime", "I", "--R", "0.25",
                "--alpha", "0.7853981633974483", "--delta", "0.1",
                "--N", "64", "--dt", "1e-3", "--T", "0.01",
                "--init", "cos:0.1", "--dump-spectra", "--out", out])
    assert code == 0
    assert os.path.exists(os.path.join(out, "trajectory.csv"))
    spec0 = _read(os.path.join(out, "spectrum_00000.csv")).decode().splitlines()
    assert spec0[0] == "n,re,im"
    assert len(spec0) == 1 + 64              # modes -31 .. 32
    # mode 1 of 0.1 cos(2 pi x) is 0.05; mode -1 its conjugate
    by_n = {line.split(",")[0]: line for line in spec0[1:]}
    assert float(by_n["1"].split(",")[1]) == 0.05
    assert float(by_n["-1"].split(",")[1]) == 0.05
    mani = _manifest(out)
    assert mani["exit_code"] == "0"
    assert mani["regime"] == "I"
    assert "version.numpy" in mani and "wall_clock_s" in mani


def test_cli_validation_error_exit_1(tmp_path, capsys):
    code = run(["simulate", "--delta", "0", "--out", str(tmp_path / "bad")])
    assert code == 1
    assert "delta" in capsys.readouterr().err


def test_cli_blowup_exit_2(tmp_path):
    # KdVKS with a wide unstable band grows until overflow
    out = str(tmp_path / "blow")
    with np.errstate(over="ignore", invalid="ignore"):
        code = run(["simulate", "--regime", "KdVKS", "--R", "1.25",
                    "--W2", "0.01", "--N", "32", "--dt", "0.1", "--T", "200",
                    "--init", "cos:0.001", "--out", out])
    assert code == 2
    assert _manifest(out)["exit_code"] == "2"


def test_cli_residual_study(tmp_path):
    out = str(tmp_path / "study")
    code = run(["residual-study", "--regime", "III", "--R", "0.25",
                "--alpha", "0.7853981633974483",
                "--deltas", "0.2,0.1,0.05", "--N", "32", "--M", "64",
                "--init", "cos:0.1", "--out", out])
    assert code == 0
    lines = _read(os.path.join(out, "order_report.csv")).decode().splitlines()
    assert lines[0] == "delta,psi1,psi2,phi1,phi2,phi3"
    assert len(lines) == 4
    summary = _read(os.path.join(out, "summary.txt")).decode()
    assert "pass = True" in summary


def test_cli_residual_study_along_trajectory(tmp_path):
    out = str(tmp_path / "series")
    code = run(["residual-study", "--regime", "III", "--R", "0.25",
                "--delta", "0.1", "--N", "32", "--M", "32", "--dt", "1e-3",
                "--T", "0.02", "--stride", "5", "--init", "cos:0.1",
                "--at-taus", "0.005,0.02", "--out", out])
    assert code == 0
    lines = _read(os.path.join(out, "residual_series.csv")).decode().splitlines()
    assert lines[0] == "tau,psi1,psi2,phi1,phi2,phi3"
    assert len(lines) == 3
    taus = [float(line.split(",")[0]) for line in lines[1:]]
    assert taus == pytest.approx([0.005, 0.02])


def test_cli_compare_series_and_sweep_with_failure_threshold(tmp_path):
    common = ["compare", "--regime", "I", "--regime-b", "III", "--R", "0.25",
              "--alpha", "0.7853981633974483", "--N", "32", "--M", "16",
              "--dt", "1e-3", "--T", "0.02", "--stride", "10",
              "--init", "cos:0.1"]
    out = str(tmp_path / "cmp")
    code = run(common + ["--deltas", "0.2,0.1", "--out", out])
    assert code == 0
    lines = _read(os.path.join(out, "difference.csv")).decode().splitlines()
    assert lines[0] == "tau,h_l2,u_w,v_w,p_w,d_value"
    # an unreachable slope target flips the exit code to 3
    out2 = str(tmp_path / "cmp2")
    code = run(common + ["--deltas", "0.2,0.1", "--fail-below", "50",
                         "--out", out2])
    assert code == 3


def test_cli_decay(tmp_path):
    out = str(tmp_path / "decay")
    code = run(["decay", "--regime", "I", "--R", "0.625", "--N", "32",
                "--dt", "1e-3", "--T", "0.2", "--stride", "2",
                "--init", "cos:0.0001", "--s", "0",
                "--out", out])
    assert code == 0
    summary = _read(os.path.join(out, "summary.txt")).decode()
    assert "c = " in summary


def test_cli_convergence(tmp_path):
    out = str(tmp_path / "conv")
    code = run(["convergence", "--regime", "I", "--N", "32", "--dt", "1e-3",
                "--T", "0.01", "--init", "cos:0.05", "--tol", "1e-9",
                "--out", out])
    assert code == 0


def test_cli_config_precedence(tmp_path):
    cfg = tmp_path / "base.cfg"
    cfg.write_text("N = 64\nT = 0.01\ndt = 1e-3\ninit = cos:0.1\n")
    out1 = str(tmp_path / "o1")
    run(["simulate", "--config", str(cfg), "--out", out1])
    assert _manifest(out1)["N"] == "64"          # file overrides default 128
    out2 = str(tmp_path / "o2")
    run(["simulate", "--config", str(cfg), "--N", "32", "--out", out2])
    assert _manifest(out2)["N"] == "32"          # flag overrides file
    out3 = str(tmp_path / "o3")
    run(["simulate", "--dt", "1e-3", "--T", "0.01", "--out", out3])
    assert _manifest(out3)["N"] == "128"         # built-in default


def test_cli_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 3\n")
    code = run(["simulate", "--config", str(cfg), "--out", str(tmp_path / "x")])
    assert code == 1


def test_cli_determinism_across_runs_and_threads(tmp_path):
    args = ["simulate", "--regime", "I", "--N", "32", "--dt", "1e-3",
            "--T", "0.02", "--init", "noise:0.01", "--seed", "7"]
    out1, out2 = str(tmp_path / "d1"), str(tmp_path / "d2")
    assert run(args + ["--out", out1]) == 0
    assert run(args + ["--out", out2]) == 0
    assert _read(os.path.join(out1, "trajectory.csv")) == \
        _read(os.path.join(out2, "trajectory.csv"))

    sweep = ["compare", "--regime", "I", "--regime-b", "III", "--N", "32",
             "--M", "8", "--dt", "1e-3", "--T", "0.02", "--stride", "20",
             "--init", "noise:0.01", "--seed", "3", "--deltas", "0.2,0.1"]
    s1, s2 = str(tmp_path / "s1"), str(tmp_path / "s2")
    assert run(sweep + ["--threads", "1", "--out", s1]) == 0
    assert run(sweep + ["--threads", "2", "--out", s2]) == 0
    assert _read(os.path.join(s1, "difference_sweep.csv")) == \
        _read(os.path.join(s2, "difference_sweep.csv"))


def test_cli_modes_init(tmp_path):
    out = str(tmp_path / "modes")
    code = run(["simulate", "--N", "32", "--dt", "1e-3", "--T", "0.002",
                "--init", "modes:1:0.05:0,2:0.01:0.005", "--out", out])
    assert code == 0
