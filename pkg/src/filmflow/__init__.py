"""filmflow: thin-film surface models, field closures, and their defects.

A numpy library for the long-wave approximation hierarchy of film flow
down an inclined plane: pseudospectral evolution of six surface models on
the periodic unit torus, exact-rational closure tables reconstructing the
velocity and pressure fields on the strip, residual operators measuring
how well those fields satisfy the rescaled bulk equations, and independent
oracles (Cole-Hopf, finite differences, decay fits) for cross-checking.
"""

from .params import (
    ModelCoefficients, ParameterError, ParameterWarning, PhysicalParams,
    Regime, RegimeError, critical_reynolds, dispersion_c1, model_coefficients,
    nonlinear_c2, validate_params, weber_for_delta,
)
from .surface import (
    BlowUpError, ETDRK4, SurfaceState, Trajectory, initial_profile,
    linear_symbol, nonlinear_rhs, simulate, step,
)
from .jets import SurfaceJet, eta_jet, to_fixed_frame
from .closures import ClosureTable, ClosureTerm, build_closure_table
from .fields import FieldGrid, divergence, reconstruct, surface_traces
from .residuals import (
    OrderReport, ResidualSet, SourceTerms, order_study, residual_braces,
    residual_series, residual_set, source_terms,
)
from .oracles import (
    DecayFit, DifferenceReport, cole_hopf, cross_model_difference, decay_fit,
    fd_reference, relative_l2, sobolev_norm,
)

__version__ = "0.1.0"

__all__ = [
    "ModelCoefficients", "ParameterError", "ParameterWarning",
    "PhysicalParams", "Regime", "RegimeError", "critical_reynolds",
    "dispersion_c1", "model_coefficients", "nonlinear_c2", "validate_params",
    "weber_for_delta",
    "BlowUpError", "ETDRK4", "SurfaceState", "Trajectory", "initial_profile",
    "linear_symbol", "nonlinear_rhs", "simulate", "step",
    "SurfaceJet", "eta_jet", "to_fixed_frame",
    "ClosureTable", "ClosureTerm", "build_closure_table",
    "FieldGrid", "divergence", "reconstruct", "surface_traces",
    "OrderReport", "ResidualSet", "SourceTerms", "order_study",
    "residual_braces", "residual_series", "residual_set", "source_terms",
    "DecayFit", "DifferenceReport", "cole_hopf", "cross_model_difference",
    "decay_fit", "fd_reference", "relative_l2", "sobolev_norm",
    "__version__",
]
