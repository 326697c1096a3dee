"""Interior and boundary residual operators and their delta-order study.

Substituting the truncated closures into the rescaled bulk equations and
boundary conditions leaves defects.  With the expansion weights written
out, the two interior braces and three boundary braces are

    B1 = d*(u_t + ub u_x + ub_y v) + (2/R) d p_x - (1/R)(d^2 u_xx + u_yy)
         - d f1,
    B2 = d^2 (v_t + ub v_x) + (2/R) p_y - (1/R) d (d^2 v_xx + v_yy) - d f2,
    B3 = [d^2 v_x + u_y - 2(1 + d eta)^2 eta]             at y = 1,
    B4 = [p - d v_y - cot(a) eta + (d^2 W/sin(a)) eta_xx
          - d^2 (2 eta eta_x + eta_x u + eta u_x)]        at y = 1,
    B5 = [eta_t + eta_x - v - d^2 eta^2 eta_x]            at y = 1,

with d = delta, ub = 2y - y^2 the flat-film profile, and the quadratic
sources

    f1 = -(2/R) eta u_yy + d * [ (1/R)(3 eta^2 u_yy - 2 eta p_x
         + 2 y eta_x p_y) + eta_t u + y eta_t u_y + y^2 eta_x u
         + 2y(y-1) eta u_x - y^2(y-2) eta_x u_y - u u_x - v u_y
         + 2(2y-1) eta v ],
    f2 = (2/R) eta p_y + d * (1/R)(-2 eta^2 p_y + 2 eta_x u_y
         + 2 eta u_xy).

The reported residuals divide the braces by delta^3.  Raw brace norms are
the quantity whose log-log slope against delta is fitted: the two-term
closures (regimes I, II) leave O(delta^2) defects, the three-term closures
(III, IV) O(delta^3), so the slope targets are {2, 2, 3, 3}.

Time derivatives of the fields are exact: the closure tables are shifted
in the jet index, which consumes surface time derivatives up to order 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closures import build_closure_table
from .fields import FieldGrid, assemble_spectra, reconstruct
from .jets import SurfaceJet, eta_jet
from .params import Regime, validate_params, weber_for_delta
from .surface import SurfaceState
from . import spectral as sp

__all__ = [
    "SourceTerms", "ResidualSet", "OrderReport", "nusselt_profile",
    "source_terms", "residual_braces", "residual_set", "order_study",
    "residual_series", "weber_for_delta", "RESIDUAL_NAMES",
    "SLOPE_TARGETS", "SLOPE_THRESHOLDS",
]

RESIDUAL_NAMES = ("psi1", "psi2", "phi1", "phi2", "phi3")

SLOPE_TARGETS = {Regime.I: 2.0, Regime.II: 2.0, Regime.III: 3.0, Regime.IV: 3.0}
SLOPE_THRESHOLDS = {Regime.I: 1.8, Regime.II: 1.8, Regime.III: 2.7, Regime.IV: 2.7}


def nusselt_profile(y):
    """Flat-film streamwise velocity 2y - y^2 (and slope 2 - 2y below)."""
    y = np.asarray(y, dtype=float)
    return 2.0 * y - y * y


def nusselt_shear(y):
    y = np.asarray(y, dtype=float)
    return 2.0 - 2.0 * y


def _interior_norm(rows, y):
    """L2(strip) norm: Parseval in x, composite Simpson in y."""
    w = sp.simpson_weights(y.shape[0] - 1)
    return float(np.sqrt(np.sum(w * sp.parseval_sq(rows))))


def _boundary_norm(row):
    return float(np.sqrt(sp.parseval_sq(row)))


@dataclass
class SourceTerms:
    """Assembled quadratic sources (physical arrays; spectra cached)."""

    f1_1: np.ndarray       # interior, (M+1, N)
    f2_1: np.ndarray       # interior, (M+1, N)
    h2_2: np.ndarray       # boundary, (N,)
    h3: np.ndarray         # boundary, (N,)
    y: np.ndarray
    spectra: dict


@dataclass
class ResidualSet:
    """The five residuals (braces divided by delta^3) with their norms."""

    psi1: np.ndarray
    psi2: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray
    norms: dict
    raw_norms: dict
    delta: float
    normalizer: int = 3


def _field_pieces(field: FieldGrid, params, delta):
    """Every assembled modal row array the braces consume."""
    jp, tab, order, y = field.products, field.table, field.order, field.y
    kw = dict(max_order=order, delta=delta)

    def a(fld, **more):
        return assemble_spectra(tab, fld, jp, params, y, **kw, **more)

    def a1(fld, **more):
        return assemble_spectra(tab, fld, jp, params, [1.0], **kw, **more)[0]

    jet = field.jet
    return {
        "u": a("u"), "u_t": a("u", dt=1), "u_x": a("u", dx=1),
        "u_xx": a("u", dx=2), "u_y": a("u", dy=1), "u_yy": a("u", dy=2),
        "u_xy": a("u", dx=1, dy=1),
        "v": a("v"), "v_t": a("v", dt=1), "v_x": a("v", dx=1),
        "v_xx": a("v", dx=2), "v_yy": a("v", dy=2),
        "p_x": a("p", dx=1), "p_y": a("p", dy=1),
        "u@1": a1("u"), "u_x@1": a1("u", dx=1), "u_y@1": a1("u", dy=1),
        "v@1": a1("v"), "v_x@1": a1("v", dx=1), "v_y@1": a1("v", dy=1),
        "p@1": a1("p"),
        "eta": jet.entry(0, 0), "eta_x": jet.entry(1, 0),
        "eta_xx": jet.entry(2, 0), "eta_t": jet.entry(0, 1),
    }


def source_terms(jet: SurfaceJet, field: FieldGrid, params, delta=None):
    """Evaluate the quadratic sources on the field's grid.

    Products are band-limited spectral products; u_t and friends come from
    exact table shifts, never finite differences.
    """
    if delta is None:
        delta = params.delta
    pc = _field_pieces(field, params, delta)
    N, y = field.N, field.y
    yc = y[:, None]

    def P(*fs):
        return sp.spec_products(fs, N)

    eta, eta_x, eta_t = pc["eta"], pc["eta_x"], pc["eta_t"]
    eta2 = P(eta, eta)
    R = params.R

    f12 = ((1.0 / R) * (3.0 * P(eta2, pc["u_yy"]) - 2.0 * P(eta, pc["p_x"])
                        + 2.0 * yc * P(eta_x, pc["p_y"]))
           + P(eta_t, pc["u"]) + yc * P(eta_t, pc["u_y"])
           + yc**2 * P(eta_x, pc["u"])
           + (2.0 * yc**2 - 2.0 * yc) * P(eta, pc["u_x"])
           + (2.0 * yc**2 - yc**3) * P(eta_x, pc["u_y"])
           - P(pc["u"], pc["u_x"]) - P(pc["v"], pc["u_y"])
           + (4.0 * yc - 2.0) * P(eta, pc["v"]))
    f22 = (1.0 / R) * (-2.0 * P(eta2, pc["p_y"]) + 2.0 * P(eta_x, pc["u_y"])
                       + 2.0 * P(eta, pc["u_xy"]))
    f1_1 = -(2.0 / R) * P(eta, pc["u_yy"]) + delta * f12
    f2_1 = (2.0 / R) * P(eta, pc["p_y"]) + delta * f22
    h22 = (2.0 * P(eta, eta_x) + P(eta_x, pc["u@1"]) + P(eta, pc["u_x@1"]))
    h3 = P(eta2, eta_x)

    spectra = {"f1_1": f1_1, "f2_1": f2_1, "h2_2": h22, "h3": h3,
               "pieces": pc, "delta": delta}
    return SourceTerms(
        f1_1=sp.values_from_coeffs(f1_1, N),
        f2_1=sp.values_from_coeffs(f2_1, N),
        h2_2=sp.values_from_coeffs(h22, N),
        h3=sp.values_from_coeffs(h3, N),
        y=y, spectra=spectra,
    )


def residual_braces(jet, field, sources, params, regime, delta=None):
    """Unscaled residual braces (modal rows) and their L2 norms."""
    regime = Regime(regime)
    if delta is None:
        delta = params.delta
    if sources is None or sources.spectra.get("delta") != delta:
        sources = source_terms(jet, field, params, delta=delta)
    pc = sources.spectra["pieces"]
    d, R, N, y = delta, params.R, field.N, field.y
    ub, uby = nusselt_profile(y)[:, None], nusselt_shear(y)[:, None]

    def P(*fs):
        return sp.spec_products(fs, N)

    eta, eta_x, eta_t = pc["eta"], pc["eta_x"], pc["eta_t"]
    eta2 = P(eta, eta)
    eta3 = P(eta2, eta)

    b1 = (d * (pc["u_t"] + ub * pc["u_x"] + uby * pc["v"])
          + (2.0 / R) * d * pc["p_x"]
          - (1.0 / R) * (d * d * pc["u_xx"] + pc["u_yy"])
          - d * sources.spectra["f1_1"])
    b2 = (d * d * (pc["v_t"] + ub * pc["v_x"])
          + (2.0 / R) * pc["p_y"]
          - (d / R) * (d * d * pc["v_xx"] + pc["v_yy"])
          - d * sources.spectra["f2_1"])
    b3 = (d * d * pc["v_x@1"] + pc["u_y@1"]
          - (2.0 * eta + 4.0 * d * eta2 + 2.0 * d * d * eta3))
    b4 = (pc["p@1"] - d * pc["v_y@1"] - params.cot_alpha * eta
          + (d * d * params.W / params.sin_alpha) * pc["eta_xx"]
          - d * d * sources.spectra["h2_2"])
    b5 = eta_t + eta_x - pc["v@1"] - d * d * sources.spectra["h3"]

    braces = {"psi1": b1, "psi2": b2, "phi1": b3, "phi2": b4, "phi3": b5}
    norms = {
        "psi1": _interior_norm(b1, y), "psi2": _interior_norm(b2, y),
        "phi1": _boundary_norm(b3), "phi2": _boundary_norm(b4),
        "phi3": _boundary_norm(b5),
    }
    return braces, norms


def residual_set(jet, field, sources, params, regime, delta=None) -> ResidualSet:
    """The five residuals, braces divided by delta^3, with L2 norms."""
    if delta is None:
        delta = params.delta
    if delta <= 0.0:
        raise ValueError(f"delta must be positive for scaled residuals, got {delta}")
    braces, raw = residual_braces(jet, field, sources, params, regime, delta)
    scale = delta ** -3
    phys = {k: sp.values_from_coeffs(scale * v, field.N) for k, v in braces.items()}
    return ResidualSet(
        psi1=phys["psi1"], psi2=phys["psi2"], phi1=phys["phi1"],
        phi2=phys["phi2"], phi3=phys["phi3"],
        norms={k: scale * v for k, v in raw.items()},
        raw_norms=raw, delta=delta,
    )


@dataclass
class OrderReport:
    """Raw residual norms across a decreasing delta ladder with slope fits."""

    regime: Regime
    deltas: np.ndarray
    raw_norms: dict          # residual name -> array over deltas
    slopes: dict
    target: float
    threshold: float
    passed: bool


def order_study(eta0: SurfaceState, params_base, regime, deltas, M=256,
                alpha=None) -> OrderReport:
    """Fit the delta-order of every raw residual norm at t = 0.

    For each delta the parameter set is rebuilt (epsilon = delta, W from
    the regime law), the jet and fields are assembled from the same
    initial surface, and the raw brace norms are recorded.  The fitted
    log-log slope is compared against the regime target.
    """
    regime = Regime(regime)
    deltas = np.asarray(list(deltas), dtype=float)
    if deltas.size < 3:
        raise ValueError("order study needs at least 3 delta values")
    if not np.all(np.diff(deltas) < 0.0):
        raise ValueError("delta ladder must be strictly decreasing")
    table = build_closure_table(regime)
    rows = {name: [] for name in RESIDUAL_NAMES}
    for d in deltas:
        p = validate_params(params_base.R, weber_for_delta(regime, d, params_base.W2),
                            params_base.alpha, d, regime=regime,
                            W2=params_base.W2, Rtilde=params_base.Rtilde)
        jet = eta_jet(eta0, p, regime, max_t_order=3)
        field = reconstruct(jet, p, regime, M=M, table=table)
        _, raw = residual_braces(jet, field, None, p, regime)
        for name in RESIDUAL_NAMES:
            rows[name].append(raw[name])
    raw_norms = {k: np.asarray(v) for k, v in rows.items()}
    slopes = {k: float(np.polyfit(np.log(deltas), np.log(v), 1)[0])
              for k, v in raw_norms.items()}
    target = SLOPE_TARGETS[regime]
    threshold = SLOPE_THRESHOLDS[regime]
    passed = all(s >= threshold for s in slopes.values())
    return OrderReport(regime, deltas, raw_norms, slopes, target, threshold, passed)


def residual_series(traj, params, regime, M=64):
    """Residual sets along a trajectory (fixed-frame evaluation).

    Each moving-frame snapshot at slow time tau is shifted to the fixed
    frame at t = tau/delta before the jet is built.
    """
    from .jets import to_fixed_frame

    out = []
    for snap in traj:
        t = snap.tau / params.delta
        state = to_fixed_frame(snap, t)
        jet = eta_jet(state, params, regime, max_t_order=3)
        field = reconstruct(jet, params, regime, M=M)
        rs = residual_set(jet, field, None, params, regime)
        out.append((snap.tau, rs))
    return out
