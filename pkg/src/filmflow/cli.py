"""Batch front door.

Subcommands: simulate, reconstruct, residual-study, convergence, compare,
decay.  Configuration is resolved in three layers (command-line flag over
config-file entry over built-in default); the config file is flat
``key = value`` text with ``#`` comments and comma-separated lists.  Every
run writes a manifest recording the resolved configuration, versions, and
wall-clock time.  Angles are accepted in radians only.

Exit codes: 0 success, 1 validation error, 2 numerical blow-up,
3 declared acceptance target missed by a study experiment.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as ffio
from .jets import eta_jet
from .oracles import cross_model_difference, decay_fit, sobolev_norm
from .params import (ParameterError, Regime, validate_params,
                     weber_for_delta)
from .fields import reconstruct
from .residuals import order_study, residual_series, RESIDUAL_NAMES
from .surface import BlowUpError, Trajectory, initial_profile, simulate

__all__ = ["run", "main", "RunConfig", "parse_config_file"]

_DEFAULTS = {
    "regime": "I",
    "R": 0.25,
    "W": None,            # resolved from the regime law when absent
    "W2": 1.0,
    "Rtilde": 1.0,
    "alpha": math.pi / 4,
    "delta": 0.1,
    "N": 128,
    "M": 32,
    "dt": 1e-4,
    "T": 1.0,
    "stride": 10,
    "deltas": (0.2, 0.1, 0.05, 0.025),
    "init": "cos:0.1",
    "seed": 0,
    "n0": 4,
    "threads": 1,
    "hs_order": 2.0,
    "s": 0.0,
    "m": 2,
    "regime_b": "III",
    "dealias": "2/3",
    "dump_spectra": False,
    "binary": False,
    "tol": None,
    "fail_below": None,
    "expect_c": None,
    "ctol": 0.2,
    "window_lo": None,
    "window_hi": None,
    "at_taus": None,
}

_FLOAT_KEYS = {"R", "W", "W2", "Rtilde", "alpha", "delta", "dt", "T",
               "hs_order", "s", "tol", "fail_below", "expect_c", "ctol",
               "window_lo", "window_hi"}
_INT_KEYS = {"N", "M", "stride", "seed", "n0", "threads", "m"}
_BOOL_KEYS = {"dump_spectra", "binary"}
_LIST_KEYS = {"deltas", "at_taus"}


class RunConfig(dict):
    """Resolved flat configuration for one experiment."""

    def __getattr__(self, name):
        try:
            return self[name]
        except KeyError as exc:
            raise AttributeError(name) from exc


def _coerce(key, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _INT_KEYS:
        return int(raw)
    if key in _BOOL_KEYS:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if key in _LIST_KEYS:
        return tuple(float(x) for x in raw.split(",") if x.strip())
    return raw


def parse_config_file(path):
    """Flat ``key = value`` file; '#' starts a comment; lists use commas."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError("config", f"{path}:{ln}: expected key = value")
            key, _, val = line.partition("=")
            out[key.strip()] = _coerce(key.strip(), val.strip())
    return out


def _resolve_config(args):
    cfg = RunConfig(_DEFAULTS)
    cfg["experiment"] = args.experiment
    if args.config:
        file_cfg = parse_config_file(args.config)
        unknown = set(file_cfg) - set(_DEFAULTS) - {"experiment", "out"}
        if unknown:
            raise ParameterError("config", f"unknown keys {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = _coerce(key, flag) if isinstance(flag, str) else flag
    if getattr(args, "out", None):
        cfg["out"] = args.out
    if "out" not in cfg:
        raise ParameterError("out", "an output directory is required")
    return cfg


def _params(cfg, regime):
    W = cfg.W if cfg.W is not None else weber_for_delta(regime, cfg.delta, cfg.W2)
    return validate_params(cfg.R, W, cfg.alpha, cfg.delta, regime=regime,
                           W2=cfg.W2, Rtilde=cfg.Rtilde)


def _initial(cfg):
    profile = cfg.init
    kind, _, rest = profile.partition(":")
    if kind in ("cos", "sin", "noise"):
        amp = float(rest) if rest else 0.1
        return initial_profile(kind, cfg.N, amplitude=amp, seed=cfg.seed,
                               n0=cfg.n0)
    if kind == "modes":
        modes = {}
        for item in rest.split(","):
            n, re_, im_ = item.split(":")
            modes[int(n)] = complex(float(re_), float(im_))
        return initial_profile("modes", cfg.N, modes=modes)
    raise ParameterError("init", f"unknown initial profile {profile!r}")


def _parallel_map(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _simulate_for(cfg, regime, init):
    params = _params(cfg, regime)
    return params, simulate(init, params, regime, cfg.T, cfg.dt,
                            stride=cfg.stride, rule=cfg.dealias)


# ---------------------------------------------------------------------------
# experiments

def _cmd_simulate(cfg, out):
    regime = Regime(cfg.regime)
    _, traj = _simulate_for(cfg, regime, _initial(cfg))
    ffio.write_trajectory_csv(os.path.join(out, "trajectory.csv"), traj,
                              hs_order=cfg.hs_order)
    if cfg.dump_spectra:
        for i, snap in enumerate(traj):
            ffio.write_spectrum_csv(os.path.join(out, f"spectrum_{i:05d}.csv"), snap)
    return 0


def _cmd_reconstruct(cfg, out):
    regime = Regime(cfg.regime)
    params = _params(cfg, regime)
    jet = eta_jet(_initial(cfg), params, regime)
    field = reconstruct(jet, params, regime, M=cfg.M)
    ffio.write_field_csv(os.path.join(out, "field.csv"), field)
    if cfg.binary:
        for which in ("u", "v", "p"):
            ffio.write_field_binary(os.path.join(out, f"{which}.bin"), field, which)
    return 0


def _cmd_residual_study(cfg, out):
    regime = Regime(cfg.regime)
    if cfg.at_taus:
        # evaluate the residual norms along one trajectory at the given
        # slow times instead of sweeping the delta ladder at t = 0
        params = _params(cfg, regime)
        _, traj = _simulate_for(cfg, regime, _initial(cfg))
        wanted = sorted(cfg.at_taus)
        taus = traj.taus
        picks, seen = [], set()
        for t in wanted:
            snap = traj.snapshots[int(np.argmin(np.abs(taus - t)))]
            if snap.tau not in seen:
                seen.add(snap.tau)
                picks.append(snap)
        sub = Trajectory(picks, dict(traj.metadata))
        series = residual_series(sub, params, regime, M=cfg.M)
        rows = [(tau, *(rs.norms[n] for n in RESIDUAL_NAMES))
                for tau, rs in series]
        ffio.atomic_write_text(
            os.path.join(out, "residual_series.csv"),
            ffio.csv_text(("tau",) + RESIDUAL_NAMES, rows))
        return 0
    params = validate_params(
        cfg.R, weber_for_delta(regime, cfg.deltas[0], cfg.W2), cfg.alpha,
        cfg.deltas[0], regime=regime, W2=cfg.W2, Rtilde=cfg.Rtilde)
    report = order_study(_initial(cfg), params, regime, cfg.deltas, M=cfg.M)
    ffio.write_order_report_csv(os.path.join(out, "order_report.csv"), report)
    ffio.write_summary(os.path.join(out, "summary.txt"), {
        "regime": regime.value,
        "slopes": {k: v for k, v in report.slopes.items()},
        "target": report.target,
        "threshold": report.threshold,
        "pass": report.passed,
    })
    return 0 if report.passed else 3


def _cmd_convergence(cfg, out):
    regime = Regime(cfg.regime)
    rows, norms = [], []
    for N in (cfg.N, 2 * cfg.N):
        sub = RunConfig(cfg)
        sub["N"] = N
        _, traj = _simulate_for(sub, regime, _initial(sub))
        norms.append(sobolev_norm(traj.final, 0.0))
        rows.append((N, norms[-1]))
    diff = abs(norms[1] - norms[0])
    text = ffio.csv_text(("N", "norm_l2"), rows)
    ffio.atomic_write_text(os.path.join(out, "convergence.csv"), text)
    ffio.write_summary(os.path.join(out, "summary.txt"), {
        "regime": regime.value, "N": cfg.N, "norm_change": diff,
        "tol": "none" if cfg.tol is None else cfg.tol,
        "pass": cfg.tol is None or diff <= cfg.tol,
    })
    return 0 if (cfg.tol is None or diff <= cfg.tol) else 3


def _cmd_compare(cfg, out):
    ra, rb = Regime(cfg.regime), Regime(cfg.regime_b)
    init = _initial(cfg)

    def final_difference(delta):
        sub = RunConfig(cfg)
        sub["delta"], sub["W"] = delta, None
        _, ta = _simulate_for(sub, ra, init)
        _, tb = _simulate_for(sub, rb, init)
        shared = validate_params(sub["R"], weber_for_delta(ra, delta, sub["W2"]),
                                 sub["alpha"], delta, W2=sub["W2"],
                                 Rtilde=sub["Rtilde"])
        return cross_model_difference(ta, tb, shared, ra, rb, m=cfg.m, M=cfg.M)

    series = final_difference(cfg.delta)
    ffio.write_difference_csv(os.path.join(out, "difference.csv"), series)
    if cfg.deltas and len(cfg.deltas) >= 2:
        reports = _parallel_map(lambda d: final_difference(d)[-1],
                                list(cfg.deltas), cfg.threads)
        dvals = np.sqrt([r.d_value for r in reports])
        slope = float(np.polyfit(np.log(cfg.deltas), np.log(dvals), 1)[0])
        rows = list(zip(cfg.deltas, dvals))
        ffio.atomic_write_text(os.path.join(out, "difference_sweep.csv"),
                               ffio.csv_text(("delta", "sqrt_d_value"), rows))
        passed = cfg.fail_below is None or slope >= cfg.fail_below
        ffio.write_summary(os.path.join(out, "summary.txt"), {
            "regime_a": ra.value, "regime_b": rb.value, "slope": slope,
            "fail_below": "none" if cfg.fail_below is None else cfg.fail_below,
            "pass": passed,
        })
        return 0 if passed else 3
    return 0


def _cmd_decay(cfg, out):
    regime = Regime(cfg.regime)
    _, traj = _simulate_for(cfg, regime, _initial(cfg))
    window = None
    if cfg.window_lo is not None and cfg.window_hi is not None:
        window = (cfg.window_lo, cfg.window_hi)
    fit = decay_fit(traj, cfg.s, window=window)
    rows = [(s.tau, sobolev_norm(s, cfg.s) ** 2) for s in traj]
    ffio.atomic_write_text(os.path.join(out, "decay.csv"),
                           ffio.csv_text(("tau", "norm_sq"), rows))
    passed = True
    if cfg.expect_c is not None:
        passed = abs(fit.c - cfg.expect_c) <= cfg.ctol * abs(cfg.expect_c)
    ffio.write_summary(os.path.join(out, "summary.txt"), {
        "regime": regime.value, "s": fit.s, "C": fit.C, "c": fit.c,
        "rsq": fit.rsq, "window_lo": fit.window[0], "window_hi": fit.window[1],
        "pass": passed,
    })
    return 0 if passed else 3


_COMMANDS = {
    "simulate": _cmd_simulate,
    "reconstruct": _cmd_reconstruct,
    "residual-study": _cmd_residual_study,
    "convergence": _cmd_convergence,
    "compare": _cmd_compare,
    "decay": _cmd_decay,
}


def _build_parser():
    parser = argparse.ArgumentParser(prog="filmflow", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--regime", default=None)
        p.add_argument("--regime-b", dest="regime_b", default=None)
        for key in ("R", "W", "W2", "Rtilde", "alpha", "delta", "dt", "T",
                    "hs-order", "s", "tol", "fail-below", "expect-c", "ctol",
                    "window-lo", "window-hi"):
            p.add_argument(f"--{key}", dest=key.replace("-", "_"),
                           type=float, default=None)
        for key in ("N", "M", "stride", "n0", "m"):
            p.add_argument(f"--{key}", type=int, default=None)
        p.add_argument("--deltas", default=None)
        p.add_argument("--at-taus", dest="at_taus", default=None)
        p.add_argument("--init", default=None)
        p.add_argument("--dealias", default=None, choices=["2/3", "1/2"])
        p.add_argument("--dump-spectra", dest="dump_spectra",
                       action="store_const", const=True, default=None)
        p.add_argument("--binary", action="store_const", const=True, default=None)
    return parser


def run(argv):
    """Execute one experiment; returns the process exit code."""
    t0 = time.perf_counter()
    try:
        args = _build_parser().parse_args(argv)
        cfg = _resolve_config(args)
        out = cfg["out"]
        os.makedirs(out, exist_ok=True)
    except SystemExit as exc:  # argparse already printed a message
        return 1 if exc.code else 0
    except (ParameterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    code = 0
    try:
        code = _COMMANDS[cfg["experiment"]](cfg, out)
    except BlowUpError as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        code = 2
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    finally:
        manifest = {k: ("" if v is None else v) for k, v in cfg.items()}
        for key in ("deltas", "at_taus"):
            if cfg.get(key):
                manifest[key] = ",".join(ffio.format_float(d) for d in cfg[key])
        manifest["exit_code"] = code
        ffio.write_manifest(os.path.join(out, "manifest.txt"), manifest,
                            time.perf_counter() - t0, argv=argv)
    return code


def main():
    sys.exit(run(sys.argv[1:]))
