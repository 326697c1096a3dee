"""Nondimensional parameters, Weber-number regimes, and model coefficients.

The six surface evolution models share the advection coefficient 4 and the
diffusion coefficient nu = (8/15)(R_c - R), where R_c = (5/4)/tan(alpha) is
the critical Reynolds number of the flat film.  The regime tag selects which
higher-order corrections survive and whether they carry an extra factor of
the aspect ratio delta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

__all__ = [
    "Regime",
    "PhysicalParams",
    "ModelCoefficients",
    "ParameterError",
    "RegimeError",
    "ParameterWarning",
    "critical_reynolds",
    "dispersion_c1",
    "nonlinear_c2",
    "model_coefficients",
    "validate_params",
    "weber_for_delta",
]

_REL_TOL = 1e-12


class ParameterError(ValueError):
    """Rejected parameter set.  ``field`` names the offending input."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class RegimeError(ParameterError):
    """Parameter set inconsistent with the requested regime."""


class ParameterWarning(UserWarning):
    pass


class Regime(str, Enum):
    """Model selector.

    I    Burgers equation
    II   Burgers equation with fourth-order dissipation
    III  Burgers equation with dispersion and nonlinear corrections
    IV   model III plus fourth-order dissipation
    KdVBurgers / KdVKS
         delta-independent KdV-Burgers and KdV-Kuramoto-Sivashinsky
         equations for a Reynolds number pinned to the critical value
         up to a gap of size delta.
    """

    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    KdVBurgers = "KdVBurgers"
    KdVKS = "KdVKS"

    @property
    def is_kdv(self):
        return self in (Regime.KdVBurgers, Regime.KdVKS)

    @property
    def closure_order(self):
        """Truncation order of the field closures (models I-IV only)."""
        if self.is_kdv:
            raise RegimeError("regime", f"no field closures for {self.value}")
        return 1 if self in (Regime.I, Regime.II) else 2


@dataclass(frozen=True)
class PhysicalParams:
    """Nondimensional parameter set.

    R        Reynolds number, > 0
    W        Weber number, > 0
    alpha    inclination angle in radians, 0 < alpha < pi/2
    delta    aspect ratio of the film, 0 < delta <= 1
    epsilon  nonlinearity magnitude; always equal to delta here
    W2       regime Weber constant (order-one), > 0
    Rtilde   rescaled Reynolds gap used only by the KdV-type models, > 0
    """

    R: float
    W: float
    alpha: float
    delta: float
    epsilon: float
    W2: float = 1.0
    Rtilde: float = 1.0

    @property
    def cot_alpha(self):
        return 1.0 / math.tan(self.alpha)

    @property
    def sin_alpha(self):
        return math.sin(self.alpha)

    def with_delta(self, delta):
        """Copy with a new aspect ratio (epsilon tracks delta)."""
        return replace(self, delta=delta, epsilon=delta)


@dataclass(frozen=True)
class ModelCoefficients:
    """Coefficients of one surface evolution model in the moving frame.

    The model reads, for the co-moving mean-zero profile z(x, tau),

        z_tau + advect * z*z_x - nu * z_xx
              + [delta] * ( c1 * z_xxx + c2 * (z*z_xx + z_x^2)
                            + cubic * z^2 z_x + hyper * z_xxxx ) = 0,

    where the bracketed factor delta multiplies exactly the terms named in
    ``delta_weight`` (regimes III and IV; empty otherwise).  ``delta`` is
    carried here so the linear symbol and the nonlinear tendency are
    self-contained.  For the KdV models ``nu`` is signed: positive for
    KdVBurgers (stable diffusion), negative for KdVKS (unstable band).
    """

    advect: float
    nu: float
    c1: float
    c2: float
    cubic: float
    hyper: float
    delta: float
    delta_weight: frozenset

    def delta_factor(self, name):
        """delta if ``name`` is delta-weighted in this regime, else 1."""
        return self.delta if name in self.delta_weight else 1.0

    def linear_only(self):
        """Copy with every nonlinear coefficient zeroed."""
        return replace(self, advect=0.0, c2=0.0, cubic=0.0)


def critical_reynolds(alpha):
    """Critical Reynolds number (5/4)/tan(alpha) of the flat film.

    Strictly decreasing on (0, pi/2); only below this value is the
    second-order diffusion of the long-wave models stabilizing.
    """
    if not 0.0 < alpha < math.pi / 2:
        raise ParameterError("alpha", f"must lie in (0, pi/2), got {alpha}")
    return 1.25 / math.tan(alpha)


def dispersion_c1(R, alpha):
    """Third-order dispersion coefficient C1(R, alpha)."""
    return 2.0 + (32.0 / 63.0) * R * R - (40.0 / 63.0) * R / math.tan(alpha)


def nonlinear_c2(R, alpha):
    """Quadratic-correction coefficient C2(R, alpha)."""
    return (16.0 / 5.0) * R - 2.0 / math.tan(alpha)


def _check_regime(params, regime):
    """Regime/Weber consistency.  Raises RegimeError on hard violations."""
    d, W, W2 = params.delta, params.W, params.W2
    if regime is Regime.II:
        if abs(W * d * d - W2) > _REL_TOL * max(1.0, W2):
            raise RegimeError(
                "W", f"regime II requires W*delta^2 == W2, got {W * d * d} != {W2}")
    elif regime is Regime.IV:
        if abs(W * d - W2) > _REL_TOL * max(1.0, W2):
            raise RegimeError(
                "W", f"regime IV requires W*delta == W2, got {W * d} != {W2}")
    elif regime is Regime.I:
        if W > W2 / d * (1.0 + _REL_TOL):
            raise RegimeError("W", f"regime I requires W <= W2/delta = {W2 / d}, got {W}")
    elif regime is Regime.III:
        if W > W2 * (1.0 + _REL_TOL):
            raise RegimeError("W", f"regime III requires W <= W2 = {W2}, got {W}")
    elif regime.is_kdv:
        if params.Rtilde <= 0.0:
            raise RegimeError("Rtilde", "KdV models need Rtilde > 0")


def validate_params(R, W, alpha, delta, regime=None, epsilon=None, W2=1.0, Rtilde=1.0):
    """Build a validated :class:`PhysicalParams`.

    Hard errors for out-of-range values and regime/Weber mismatches; a
    warning (only) when R >= R_c, since the KdVKS model deliberately sits
    above the critical Reynolds number.
    """
    if not 0.0 < delta <= 1.0:
        raise ParameterError("delta", f"must lie in (0, 1], got {delta}")
    if epsilon is None:
        epsilon = delta
    if epsilon != delta:
        raise ParameterError("epsilon", f"must equal delta ({delta}), got {epsilon}")
    if not R > 0.0:
        raise ParameterError("R", f"must be positive, got {R}")
    if not W > 0.0:
        raise ParameterError("W", f"must be positive, got {W}")
    if not 0.0 < alpha < math.pi / 2:
        raise ParameterError("alpha", f"must lie in (0, pi/2), got {alpha}")
    if not W2 > 0.0:
        raise ParameterError("W2", f"must be positive, got {W2}")

    params = PhysicalParams(R=float(R), W=float(W), alpha=float(alpha),
                            delta=float(delta), epsilon=float(epsilon),
                            W2=float(W2), Rtilde=float(Rtilde))
    if regime is not None:
        regime = Regime(regime)
        _check_regime(params, regime)
        if not regime.is_kdv and R >= critical_reynolds(alpha):
            warnings.warn(
                f"R = {R} >= R_c = {critical_reynolds(alpha):.6g}: the "
                "second-order term is not dissipative for this regime",
                ParameterWarning, stacklevel=2)
    return params


def weber_for_delta(regime, delta, W2):
    """Weber number consistent with the regime's scaling law at this delta.

    Regimes II and IV pin W to W2/delta^2 and W2/delta; the others admit a
    band of Weber numbers, for which the order-one choice W = W2 is used.
    """
    regime = Regime(regime)
    if regime is Regime.II:
        return W2 / delta**2
    if regime is Regime.IV:
        return W2 / delta
    return W2


def model_coefficients(params, regime):
    """Coefficients of the chosen model at the given parameters.

    Pure and deterministic: identical inputs give identical outputs.
    """
    regime = Regime(regime)
    _check_regime(params, regime)
    Rc = critical_reynolds(params.alpha)
    hyper_full = (2.0 / 3.0) * params.W2 / params.sin_alpha
    c1 = dispersion_c1(params.R, params.alpha)
    c2 = nonlinear_c2(params.R, params.alpha)

    if regime is Regime.I:
        return ModelCoefficients(4.0, (8.0 / 15.0) * (Rc - params.R), 0.0, 0.0,
                                 0.0, 0.0, params.delta, frozenset())
    if regime is Regime.II:
        return ModelCoefficients(4.0, (8.0 / 15.0) * (Rc - params.R), 0.0, 0.0,
                                 0.0, hyper_full, params.delta, frozenset())
    if regime is Regime.III:
        return ModelCoefficients(4.0, (8.0 / 15.0) * (Rc - params.R), c1, c2,
                                 2.0, 0.0, params.delta,
                                 frozenset({"c1", "c2", "cubic"}))
    if regime is Regime.IV:
        return ModelCoefficients(4.0, (8.0 / 15.0) * (Rc - params.R), c1, c2,
                                 2.0, hyper_full, params.delta,
                                 frozenset({"c1", "c2", "cubic", "hyper"}))
    if regime is Regime.KdVBurgers:
        return ModelCoefficients(4.0, (8.0 / 15.0) * params.Rtilde, c1, 0.0,
                                 0.0, 0.0, params.delta, frozenset())
    # KdVKS: negative nu encodes the destabilizing second-order term
    return ModelCoefficients(4.0, -(8.0 / 15.0) * params.Rtilde, c1, 0.0,
                             0.0, hyper_full, params.delta, frozenset())
