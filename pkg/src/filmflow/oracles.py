"""Independent verification tools.

Everything here deliberately avoids the main solver path: the Cole-Hopf
transform turns the quadratic model into the heat equation and is exact;
the finite-difference reference uses second-order stencils with classical
RK4 and no dealiasing; Sobolev norms and decay fits act on stored
spectra only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .fields import reconstruct
from .jets import eta_jet
from .params import (ModelCoefficients, Regime, model_coefficients,
                     validate_params, weber_for_delta)
from .surface import BlowUpError, SurfaceState, Trajectory
from . import spectral as sp

__all__ = [
    "sobolev_norm", "DecayFit", "decay_fit", "cole_hopf", "fd_reference",
    "DifferenceReport", "cross_model_difference", "relative_l2",
]

_UNDERFLOW = 1e-300


def sobolev_norm(state: SurfaceState, s):
    """Norm ( sum_n (1 + 2 pi |n|)^(2s) |zhat_n|^2 )^(1/2).

    s = 0 reproduces the L2(T) norm by Parseval; the weights follow the
    (1 + |D_x|)^s multiplier convention with kappa = 2 pi n.
    """
    if s < 0:
        raise ValueError(f"Sobolev order must be nonnegative, got {s}")
    w = sp.sobolev_weights(state.N, float(s))
    return float(np.sqrt(sp.parseval_sq(state.coeffs, w)))


@dataclass
class DecayFit:
    """Least-squares fit of log |z(tau)|_s^2 = log C - c tau."""

    s: float
    C: float
    c: float
    rsq: float
    window: tuple


def decay_fit(traj: Trajectory, s, window=None) -> DecayFit:
    """Fit the exponential decay rate of the squared s-norm.

    The window defaults to the last half of the trajectory (skipping the
    nonlinear transient); snapshots whose squared norm has underflowed are
    dropped automatically.  Positive c means decay per unit slow time.
    """
    if traj.metadata.get("regime") == Regime.KdVKS.value:
        warnings.warn("fitting a decay rate on a KdVKS run; the linear band "
                      "may be unstable", stacklevel=2)
    taus = traj.taus
    if window is None:
        lo = taus[0] + 0.5 * (taus[-1] - taus[0])
        window = (lo, taus[-1])
    sq = np.array([sobolev_norm(snap, s) ** 2 for snap in traj])
    keep = (taus >= window[0]) & (taus <= window[1]) & (sq > _UNDERFLOW)
    if keep.sum() < 10:
        raise ValueError("decay fit needs at least 10 usable snapshots in the window")
    t, logsq = taus[keep], np.log(sq[keep])
    slope, intercept = np.polyfit(t, logsq, 1)
    pred = slope * t + intercept
    ss_res = float(np.sum((logsq - pred) ** 2))
    ss_tot = float(np.sum((logsq - logsq.mean()) ** 2))
    rsq = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DecayFit(s=float(s), C=float(np.exp(intercept)), c=float(-slope),
                    rsq=rsq, window=(float(t[0]), float(t[-1])))


def cole_hopf(init: SurfaceState, nu, tau, fine=None) -> SurfaceState:
    """Exact solution of z_tau + 4 z z_x = nu z_xx at slow time tau.

    w = 4z satisfies the standard quadratic equation; with Phi the periodic
    antiderivative of w(., 0) (mean-zero data), theta0 = exp(-Phi/(2 nu))
    evolves under the exact Fourier heat propagator exp(-nu kappa^2 tau),
    and z = -(nu/2) d/dx log theta.  theta stays strictly positive.
    """
    if nu <= 0.0:
        raise ValueError("transform needs nu > 0")
    if tau < 0.0:
        raise ValueError("tau must be nonnegative")
    N = init.N
    Nf = fine if fine is not None else max(4 * N, 512)
    w = np.zeros(sp.nmodes(Nf), dtype=complex)
    w[: sp.nmodes(N)] = 4.0 * init.coeffs
    kap = sp.wavenumbers(Nf)
    phi = np.zeros_like(w)
    phi[1:] = w[1:] / (1j * kap[1:])
    phi_vals = sp.values_from_coeffs(phi, Nf)
    arg = -phi_vals / (2.0 * nu)
    if np.max(np.abs(arg)) > 650.0:
        raise OverflowError(
            "amplitude too large for the transform; rescale the initial data")
    theta = sp.coeffs_from_values(np.exp(arg))
    theta = theta * np.exp(-nu * kap**2 * tau)
    tvals = sp.values_from_coeffs(theta, Nf)
    txvals = sp.values_from_coeffs(theta * (1j * kap), Nf)
    z = -(nu / 2.0) * txvals / tvals
    c = sp.coeffs_from_values(z)[: sp.nmodes(N)]
    c[0] = 0.0
    c[-1] = 0.0
    return SurfaceState(c, N, init.tau + tau)


def _fd_rhs(z, h, coeffs: ModelCoefficients):
    """Second-order central-difference tendency on the periodic grid."""
    zp, zm = np.roll(z, -1), np.roll(z, 1)
    zx = (zp - zm) / (2.0 * h)
    zxx = (zp - 2.0 * z + zm) / (h * h)
    rhs = -coeffs.advect * z * zx + coeffs.nu * zxx
    if coeffs.c1 or coeffs.hyper:
        zpp, zmm = np.roll(z, -2), np.roll(z, 2)
        if coeffs.c1:
            zxxx = (zpp - 2.0 * zp + 2.0 * zm - zmm) / (2.0 * h**3)
            rhs = rhs - coeffs.delta_factor("c1") * coeffs.c1 * zxxx
        if coeffs.hyper:
            zxxxx = (zpp - 4.0 * zp + 6.0 * z - 4.0 * zm + zmm) / h**4
            rhs = rhs - coeffs.delta_factor("hyper") * coeffs.hyper * zxxxx
    if coeffs.c2 or coeffs.cubic:
        w = coeffs.delta_factor("c2")
        rhs = rhs - w * (coeffs.c2 * (z * zxx + zx * zx)
                         + coeffs.cubic * z * z * zx)
    return rhs


def fd_reference(init: SurfaceState, params, regime, Nfd, dt, T, stride=None):
    """Independent reference run: central differences plus classical RK4.

    Deliberately different error structure from the spectral path: all
    x-derivatives are second-order stencils on Nfd points and no
    dealiasing is applied.  The explicit scheme makes the step size
    stability-limited (roughly dt < 2.785 h^2 / (4 nu) for the diffusive
    models); a violation surfaces as a blow-up error.
    """
    regime = Regime(regime)
    coeffs = model_coefficients(params, regime)
    h = 1.0 / Nfd
    z = sp.values_from_coeffs(
        np.pad(init.coeffs, (0, sp.nmodes(Nfd) - sp.nmodes(init.N))), Nfd)
    nsteps = int(round(T / dt)) if T > 0 else 0
    if stride is None:
        stride = max(1, nsteps)

    def snapshot(vals, tau):
        c = sp.coeffs_from_values(vals)
        c[0] = 0.0
        c[-1] = 0.0
        return SurfaceState(c, Nfd, tau)

    traj = Trajectory(metadata={"scheme": "fd2-rk4", "Nfd": Nfd, "dt": dt,
                                "regime": regime.value})
    traj.append(snapshot(z, init.tau))
    for i in range(1, nsteps + 1):
        k1 = _fd_rhs(z, h, coeffs)
        k2 = _fd_rhs(z + 0.5 * dt * k1, h, coeffs)
        k3 = _fd_rhs(z + 0.5 * dt * k2, h, coeffs)
        k4 = _fd_rhs(z + dt * k3, h, coeffs)
        z = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(z)):
            raise BlowUpError(init.tau + i * dt, int(np.flatnonzero(~np.isfinite(z))[0]))
        if i % stride == 0 or i == nsteps:
            traj.append(snapshot(z, init.tau + i * dt))
    traj.metadata["steps"] = nsteps
    return traj


def relative_l2(a: SurfaceState, b: SurfaceState):
    """|a - b|_0 / |b|_0 over the union of resolved bands."""
    K = max(a.coeffs.shape[0], b.coeffs.shape[0])
    ca = np.pad(a.coeffs, (0, K - a.coeffs.shape[0]))
    cb = np.pad(b.coeffs, (0, K - b.coeffs.shape[0]))
    num = np.sqrt(sp.parseval_sq(ca - cb))
    den = np.sqrt(sp.parseval_sq(cb))
    return float(num / den)


@dataclass
class DifferenceReport:
    """Weighted difference between two reconstructed approximations.

    d_value = |H|_0^2 + ||(1+|Dx|)^m U||^2 + ||(1+|Dx|)^(m-1) V||^2
            + ||(1+|Dx|)^(m-1) P||^2, with H the surface difference and
    U, V, P the field differences on the strip.
    """

    tau: float
    h_l2: float
    u_w: float
    v_w: float
    p_w: float
    m: int

    @property
    def d_value(self):
        return self.h_l2**2 + self.u_w**2 + self.v_w**2 + self.p_w**2


def _weighted_interior(rows_a, rows_b, y, N, m):
    w = sp.sobolev_weights(N, m)
    simp = sp.simpson_weights(y.shape[0] - 1)
    sq = np.sum(simp * sp.parseval_sq(rows_a - rows_b, w))
    return float(np.sqrt(sq))


def cross_model_difference(traj_a: Trajectory, traj_b: Trajectory, params,
                           regime_a, regime_b, m=2, M=32):
    """Difference series between two model runs from the same data.

    Snapshot schedules and resolutions must match.  Both surfaces are
    reconstructed with their own regime's closures, each with the Weber
    number its regime law prescribes for the shared (delta, W2), and
    compared in the moving frame (the fixed-frame shift is a common phase
    and drops out of every norm).
    """
    if len(traj_a) != len(traj_b):
        raise ValueError("snapshot schedules differ in length")
    ta, tb = traj_a.taus, traj_b.taus
    if ta.shape != tb.shape or not np.allclose(ta, tb, rtol=0.0, atol=1e-12):
        raise ValueError("snapshot schedules do not match")
    if traj_a.snapshots[0].N != traj_b.snapshots[0].N:
        raise ValueError("resolutions do not match")

    regime_a, regime_b = Regime(regime_a), Regime(regime_b)

    def regime_params(reg):
        return validate_params(
            params.R, weber_for_delta(reg, params.delta, params.W2),
            params.alpha, params.delta, regime=reg, W2=params.W2,
            Rtilde=params.Rtilde)

    pa, pb = regime_params(regime_a), regime_params(regime_b)
    out = []
    for sa, sb in zip(traj_a, traj_b):
        N = sa.N
        fa = reconstruct(eta_jet(sa, pa, regime_a), pa, regime_a, M=M)
        fb = reconstruct(eta_jet(sb, pb, regime_b), pb, regime_b, M=M)
        h = sa.coeffs - sb.coeffs
        rep = DifferenceReport(
            tau=sa.tau,
            h_l2=float(np.sqrt(sp.parseval_sq(h))),
            u_w=_weighted_interior(sp.coeffs_from_values(fa.u),
                                   sp.coeffs_from_values(fb.u), fa.y, N, m),
            v_w=_weighted_interior(sp.coeffs_from_values(fa.v),
                                   sp.coeffs_from_values(fb.v), fa.y, N, m - 1),
            p_w=_weighted_interior(sp.coeffs_from_values(fa.p),
                                   sp.coeffs_from_values(fb.p), fa.y, N, m - 1),
            m=m,
        )
        out.append(rep)
    return out
