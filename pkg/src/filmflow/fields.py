"""Reconstruction of the velocity and pressure fields on the strip.

Fields are assembled from a closure table and a surface jet: every
monomial is an exact y-polynomial times a product of jet entries, so the
wall-normal dependence is evaluated exactly at any y and the streamwise
dependence spectrally.  Products of jet entries are formed on a
zero-padded grid and truncated to the resolved band, which keeps repeated
evaluations of the same monomial bitwise identical and makes the
structural identities (no slip, incompressibility) hold to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closures import ClosureTable, build_closure_table, transform_terms
from .jets import SurfaceJet
from .params import Regime
from . import spectral as sp

__all__ = ["JetProducts", "FieldGrid", "assemble_spectra", "reconstruct",
           "divergence", "surface_traces", "SurfaceTraces"]


class JetProducts:
    """Cached band-limited spectra of jet-entry products.

    Single entries pass through unchanged; multi-factor monomials are
    multiplied on the 2N-point grid (alias-free for the band-limited jet)
    and truncated back to |n| < N/2.
    """

    def __init__(self, jet: SurfaceJet):
        self.jet = jet
        self.N = jet.N
        self._spec = {}
        self._one = np.zeros(sp.nmodes(self.N), dtype=complex)
        self._one[0] = 1.0

    def spectrum(self, jetmono):
        if jetmono not in self._spec:
            if len(jetmono) == 0:
                out = self._one
            elif len(jetmono) == 1:
                out = self.jet.entry(*jetmono[0])
            else:
                out = sp.spec_products(
                    [self.jet.entry(*ix) for ix in jetmono], self.N)
            self._spec[jetmono] = out
        return self._spec[jetmono]


def _polyval(ypoly, y):
    c = np.array([float(a) for a in ypoly])
    return np.polynomial.polynomial.polyval(y, c)


def assemble_spectra(table: ClosureTable, fld, jp: JetProducts, params, ygrid,
                     *, dt=0, dy=0, dx=0, max_order=None, delta=None):
    """Modal rows (len(ygrid), N/2+1) of one assembled field.

    ``dt`` and ``dy`` are applied exactly on the table (jet-index shifts
    and polynomial differentiation); ``dx`` is the diagonal spectral
    derivative of the assembled result.  ``delta`` overrides the expansion
    weight delta^(order + dpow), which the structural checks use to probe
    the delta -> 0 limit.
    """
    if delta is None:
        delta = params.delta
    ygrid = np.atleast_1d(np.asarray(ygrid, dtype=float))
    terms = transform_terms(table.field_terms(fld, max_order), dt=dt, dy=dy)
    out = np.zeros((ygrid.shape[0], sp.nmodes(jp.N)), dtype=complex)
    for t in terms:
        w = t.coefficient(params) * delta ** (t.order + t.dpow)
        if w == 0.0:
            continue
        out += np.multiply.outer(w * _polyval(t.ypoly, ygrid),
                                 jp.spectrum(t.jet))
    if dx:
        out = out * sp.deriv_factor(jp.N, dx)
    return out


@dataclass
class FieldGrid:
    """Velocity and pressure samples on the tensor grid (x_i, y_j).

    x is uniform on the torus (N points), y uniform on [0, 1] including
    both endpoints (M+1 points).  Arrays are real, indexed [y, x].  The
    originating jet and table are kept so that exact wall-normal
    derivatives remain available (divergence, traces).
    """

    u: np.ndarray
    v: np.ndarray
    p: np.ndarray
    x: np.ndarray
    y: np.ndarray
    params: object
    regime: Regime
    order: int
    jet: SurfaceJet = field(repr=False, default=None)
    table: ClosureTable = field(repr=False, default=None)
    products: JetProducts = field(repr=False, default=None)

    @property
    def N(self):
        return self.x.shape[0]

    @property
    def M(self):
        return self.y.shape[0] - 1


def reconstruct(jet: SurfaceJet, params, regime, M=32, max_order=None,
                table=None) -> FieldGrid:
    """Evaluate the regime's closures on an (N x M+1) tensor grid.

    The truncation order defaults to the regime's own (1 for I/II, 2 for
    III/IV).  A missing jet entry raises an error naming the multi-index.
    """
    regime = Regime(regime)
    if table is None:
        table = build_closure_table(regime)
    order = table.order if max_order is None else min(max_order, table.order)
    jp = JetProducts(jet)
    y = np.linspace(0.0, 1.0, M + 1)
    x = np.arange(jet.N) / jet.N
    grids = {}
    for fld in ("u", "v", "p"):
        rows = assemble_spectra(table, fld, jp, params, y, max_order=order)
        grids[fld] = sp.values_from_coeffs(rows, jet.N)
    return FieldGrid(grids["u"], grids["v"], grids["p"], x, y, params, regime,
                     order, jet=jet, table=table, products=jp)


def divergence(field: FieldGrid):
    """u_x + v_y on the grid.

    u_x is the spectral derivative of the assembled u; v_y uses exact
    polynomial differentiation of the v closures.  Both sides share the
    same jet-product spectra, so for closure-built fields the sum vanishes
    to rounding at every order.
    """
    ux_hat = sp.coeffs_from_values(field.u) * sp.deriv_factor(field.N, 1)
    ux = sp.values_from_coeffs(ux_hat, field.N)
    vy_rows = assemble_spectra(field.table, "v", field.products, field.params,
                               field.y, dy=1, max_order=field.order)
    vy = sp.values_from_coeffs(vy_rows, field.N)
    return ux + vy


@dataclass
class SurfaceTraces:
    """Boundary records at y = 1 (physical values, length N)."""

    u: np.ndarray
    v: np.ndarray
    p: np.ndarray
    u_y: np.ndarray
    v_x: np.ndarray
    v_y: np.ndarray


def surface_traces(field: FieldGrid, jet=None, params=None) -> SurfaceTraces:
    """Exact polynomial evaluation of the closure fields at y = 1."""
    jet = field.jet if jet is None else jet
    params = field.params if params is None else params
    jp = field.products if field.products is not None else JetProducts(jet)
    tab, order, N = field.table, field.order, field.N

    def trace(fld, **kw):
        rows = assemble_spectra(tab, fld, jp, params, [1.0],
                                max_order=order, **kw)
        return sp.values_from_coeffs(rows, N)[0]

    return SurfaceTraces(
        u=trace("u"), v=trace("v"), p=trace("p"),
        u_y=trace("u", dy=1), v_x=trace("v", dx=1), v_y=trace("v", dy=1),
    )
