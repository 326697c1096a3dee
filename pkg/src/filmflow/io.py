"""Artifact writers: CSV tables, binary field snapshots, run manifests.

All files are written atomically (temporary file in the target directory,
then rename) with LF line endings, '.' decimal separators, and floats at
17 significant digits, so identical runs produce byte-identical output.
"""

from __future__ import annotations

import os
import sys
import tempfile

import numpy as np

from .oracles import sobolev_norm

__all__ = [
    "atomic_write_text", "atomic_write_bytes", "format_float",
    "csv_text", "write_trajectory_csv", "write_spectrum_csv", "write_field_csv",
    "write_field_binary", "write_order_report_csv", "write_summary",
    "write_difference_csv", "write_manifest",
]

FIELD_MAGIC = "FILMFLOW-FIELD v1"


def format_float(x):
    return f"{float(x):.17g}"


def atomic_write_bytes(path, payload: bytes):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str):
    atomic_write_bytes(path, text.encode("utf-8"))


def csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(x) if not isinstance(x, str) else x
                              for x in row))
    return "\n".join(lines) + "\n"


def write_trajectory_csv(path, traj, hs_order=2.0):
    """Per-snapshot summary: tau, L2 norm, Sobolev norm, mean, min, max."""
    rows = []
    for s in traj:
        vals = s.values()
        rows.append((s.tau, sobolev_norm(s, 0.0), sobolev_norm(s, hs_order),
                     s.mean, vals.min(), vals.max()))
    atomic_write_text(path, csv_text(("tau", "norm_l2", "norm_hs", "mean",
                                      "min", "max"), rows))


def write_spectrum_csv(path, state):
    """One row per mode n = -N/2+1 .. N/2: n, Re zhat_n, Im zhat_n."""
    full = state.full_spectrum()
    rows = []
    for n in range(-state.N // 2 + 1, state.N // 2 + 1):
        c = full[n % state.N]
        rows.append((str(n), c.real, c.imag))
    atomic_write_text(path, csv_text(("n", "re", "im"), rows))


def write_field_csv(path, field):
    """Row-major (y outer) dump with header x,y,u,v,p."""
    rows = []
    for j, yv in enumerate(field.y):
        for i, xv in enumerate(field.x):
            rows.append((xv, yv, field.u[j, i], field.v[j, i], field.p[j, i]))
    atomic_write_text(path, csv_text(("x", "y", "u", "v", "p"), rows))


def write_field_binary(path, field, which):
    """Little-endian float64 snapshot of one field, row-major, 32-byte header."""
    header = f"{FIELD_MAGIC} N={field.N} M={field.M}"
    raw = header.encode("ascii")
    if len(raw) > 32:
        raise ValueError("field header exceeds 32 bytes")
    data = np.ascontiguousarray(getattr(field, which), dtype="<f8")
    atomic_write_bytes(path, raw.ljust(32) + data.tobytes())


def read_field_binary(path):
    with open(path, "rb") as fh:
        header = fh.read(32).decode("ascii").rstrip()
        if not header.startswith(FIELD_MAGIC):
            raise ValueError(f"not a field snapshot: {header!r}")
        kv = dict(item.split("=") for item in header[len(FIELD_MAGIC):].split())
        N, M = int(kv["N"]), int(kv["M"])
        data = np.frombuffer(fh.read(), dtype="<f8").reshape(M + 1, N)
    return data, N, M


def write_order_report_csv(path, report):
    """Raw brace norms per delta: delta,psi1,psi2,phi1,phi2,phi3."""
    from .residuals import RESIDUAL_NAMES

    rows = []
    for i, d in enumerate(report.deltas):
        rows.append((d,) + tuple(report.raw_norms[n][i] for n in RESIDUAL_NAMES))
    atomic_write_text(path, csv_text(("delta",) + RESIDUAL_NAMES, rows))


def write_summary(path, record: dict):
    """Flat key = value summary (nested dicts use dotted keys)."""
    lines = []

    def emit(prefix, obj):
        if isinstance(obj, dict):
            for k in obj:
                emit(f"{prefix}{k}." if isinstance(obj[k], dict) else f"{prefix}{k}", obj[k])
        else:
            val = format_float(obj) if isinstance(obj, float) else str(obj)
            lines.append(f"{prefix} = {val}")

    emit("", record)
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_difference_csv(path, reports):
    rows = [(r.tau, r.h_l2, r.u_w, r.v_w, r.p_w, r.d_value) for r in reports]
    atomic_write_text(path, csv_text(("tau", "h_l2", "u_w", "v_w", "p_w",
                                      "d_value"), rows))


def write_manifest(path, config: dict, wall_clock_s, argv=None):
    """Full resolved configuration plus versions and timing."""
    import filmflow

    record = dict(sorted(config.items()))
    record["version.filmflow"] = filmflow.__version__
    record["version.numpy"] = np.__version__
    record["version.python"] = sys.version.split()[0]
    record["wall_clock_s"] = float(wall_clock_s)
    if argv is not None:
        record["argv"] = " ".join(argv)
    write_summary(path, record)
