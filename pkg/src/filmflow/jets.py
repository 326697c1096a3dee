"""Derivative jets of the surface profile.

The field closures consume the surface together with its x-derivatives and
the time derivatives induced by the chosen model.  Time derivatives are
formed in the fixed frame: with the co-moving profile z and slow time
tau = delta*t, the fixed-frame surface obeys

    eta_t = -2 * eta_x + delta * ( LINEAR(eta) + NONLINEAR(eta) ),

where the right-hand side is the moving-frame tendency of the model.  The
operator has no explicit time dependence and is polynomial in eta and its
x-derivatives, so higher time derivatives are exact directional
derivatives: eta_tt = G'(eta)[eta_t], eta_ttt = G''(eta)[eta_t, eta_t]
+ G'(eta)[eta_tt].  Mixed entries are spectral x-derivatives of these.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import Regime, RegimeError, model_coefficients
from .surface import SurfaceState, linear_symbol, nonlinear_rhs
from . import spectral as sp

__all__ = ["SurfaceJet", "eta_jet", "to_fixed_frame", "MIN_JET_ENTRIES"]

# entries every order-2 closure consumes
MIN_JET_ENTRIES = (
    (0, 0), (1, 0), (2, 0), (3, 0), (4, 0),
    (0, 1), (1, 1), (2, 1), (0, 2), (1, 2),
)


class JetEntryError(KeyError):
    def __init__(self, jx, jt, why):
        self.index = (jx, jt)
        super().__init__(f"jet entry (j_x={jx}, j_t={jt}) unavailable: {why}")


@dataclass
class SurfaceJet:
    """Surface profile with x- and model-induced t-derivatives.

    ``base[jt]`` holds the spectrum of the pure time derivative of order
    jt; ``entry(jx, jt)`` applies the exact spectral x-derivative on top.
    """

    base: dict
    N: int
    delta: float
    regime: Regime
    max_x_order: int
    max_t_order: int
    _cache: dict = field(default_factory=dict, repr=False)

    def entry(self, jx, jt):
        if jt not in self.base:
            raise JetEntryError(jx, jt, f"jet built with max_t_order={self.max_t_order}")
        if jx > self.max_x_order:
            raise JetEntryError(jx, jt, f"jet built with max_x_order={self.max_x_order}")
        key = (jx, jt)
        if key not in self._cache:
            self._cache[key] = sp.deriv_factor(self.N, jx) * self.base[jt]
        return self._cache[key]

    @property
    def entries(self):
        """The minimum entry map demanded by the closures."""
        return {ix: self.entry(*ix) for ix in MIN_JET_ENTRIES if ix[1] <= self.max_t_order}

    def state(self, tau=0.0):
        return SurfaceState(self.base[0].copy(), self.N, tau)


def to_fixed_frame(state: SurfaceState, t):
    """Moving-frame profile at slow time tau -> fixed-frame surface at t."""
    return state.shifted(2.0 * t)


def _masked_product(N, mask, *phys):
    out = phys[0]
    for f in phys[1:]:
        out = out * f
    c = sp.coeffs_from_values(out)
    return np.where(mask, c, 0.0)


def eta_jet(state: SurfaceState, params, regime, coeffs=None,
            max_x_order=12, max_t_order=2, rule="2/3"):
    """Build the jet of the fixed-frame surface at the state's instant.

    ``max_t_order`` may be at most 3; order 3 exists so that assembled
    fields can themselves be differentiated exactly in time (the order-2
    closures contain eta_tt, whose time shift is eta_ttt).  For profiles
    at t > 0 shift the moving-frame state with :func:`to_fixed_frame`
    first.  The KdV models induce no closures and are rejected.
    """
    regime = Regime(regime)
    if regime.is_kdv:
        raise RegimeError("regime", f"{regime.value} has no fixed-frame jet (no closures)")
    if max_t_order > 3:
        raise JetEntryError(0, max_t_order, "time derivatives supported up to order 3")
    if coeffs is None:
        coeffs = model_coefficients(params, regime)
    N = state.N
    mask = sp.dealias_mask(N, rule)
    lam = np.where(mask, linear_symbol(coeffs, regime, sp.mode_numbers(N)), 0.0)
    dx1 = sp.deriv_factor(N, 1)
    delta = params.delta
    w = coeffs.delta_factor("c2")

    eta = np.where(mask, state.coeffs, 0.0)

    def phys(c, order=0):
        return sp.values_from_coeffs(c * sp.deriv_factor(N, order), N)

    e0, e1 = phys(eta), phys(eta, 1)

    def G(c):
        """Fixed-frame tendency applied to the surface itself."""
        nl = nonlinear_rhs(SurfaceState(c, N), coeffs, regime, rule)
        return -2.0 * dx1 * c + delta * (lam * c + nl)

    def DG(c):
        """Directional derivative of G at eta in direction c."""
        h0, h1 = phys(c), phys(c, 1)
        fluxd = coeffs.advect * e0 * h0
        if coeffs.c2 or coeffs.cubic:
            fluxd = fluxd + w * (coeffs.c2 * (h0 * e1 + e0 * h1)
                                 + coeffs.cubic * e0 * e0 * h0)
        nl = -dx1 * _masked_product(N, mask, fluxd)
        return -2.0 * dx1 * c + delta * (lam * c + nl)

    def D2G(c):
        """Second directional derivative of G at eta in direction (c, c)."""
        h0, h1 = phys(c), phys(c, 1)
        fluxdd = coeffs.advect * h0 * h0
        if coeffs.c2 or coeffs.cubic:
            fluxdd = fluxdd + w * (2.0 * coeffs.c2 * h0 * h1
                                   + 2.0 * coeffs.cubic * e0 * h0 * h0)
        return delta * (-dx1 * _masked_product(N, mask, fluxdd))

    base = {0: eta}
    if max_t_order >= 1:
        base[1] = G(eta)
    if max_t_order >= 2:
        base[2] = DG(base[1])
    if max_t_order >= 3:
        base[3] = D2G(base[1]) + DG(base[2])
    return SurfaceJet(base, N, delta, regime, max_x_order, max_t_order)
