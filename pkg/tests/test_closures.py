"""Exact-rational checks of the closure tables.

The golden file is an independent transcription of the order-0/1/2
monomials.  One caveat is recorded there and re-derived here: the
eta*eta_x monomial of the order-2 pressure is pinned by the interior
pressure equation together with the y = 1 dynamic condition, and the
table must satisfy both (the u-side order-2 monomials fix the 1/R
convention of the quadratic sources, which forces the -(1+y) coefficient).
"""

import json
import math
import os
from fractions import Fraction

import numpy as np
import pytest

import filmflow as ff
from filmflow import closures as cl
from filmflow.params import RegimeError

GOLDEN = os.path.join(os.path.dirname(__file__), "data",
                      "closure_table_golden.json")


def _canon(entries):
    return sorted(json.dumps(e, sort_keys=True) for e in entries)


def test_table_matches_golden_transcription():
    table = cl.build_closure_table("III")
    sig = cl.table_signature(table)
    with open(GOLDEN) as fh:
        golden = json.load(fh)
    for fld in ("u", "v", "p"):
        for order in ("0", "1", "2"):
            assert _canon(sig[fld][order]) == _canon(golden[fld][order]), \
                (fld, order)


def test_no_slip_is_structural():
    # every u and v monomial's y-polynomial vanishes at y = 0
    for regime in ("I", "II", "III", "IV"):
        table = cl.build_closure_table(regime)
        for t in table.terms:
            if t.field in ("u", "v"):
                assert t.ypoly[0] == 0, t


def test_divergence_cancels_coefficientwise():
    # d/dy of the v table equals minus d/dx of the u table, term by term
    for regime in ("I", "II", "III", "IV"):
        table = cl.build_closure_table(regime)
        vy = cl.transform_terms(table.field_terms("v"), dy=1)
        ux = cl._merge([s for t in table.field_terms("u") for s in cl.term_dx(t)])
        lhs = {(t.order, t.dpow, t.rpow, t.cotpow, t.wpow, t.jet): t.ypoly
               for t in vy}
        rhs = {(t.order, t.dpow, t.rpow, t.cotpow, t.wpow, t.jet):
               tuple(-c for c in t.ypoly) for t in ux}
        assert lhs == rhs, regime


def test_order2_pressure_satisfies_interior_equation():
    # 2 p2_y = v1_yy + 2 eta p1_y - R(v0_t + ub v0_x) + R f2(eta, u0, p0)
    base = cl._base_closures()
    u0, v0, p0 = base["u"][0], base["v"][0], base["p"][0]
    v1, p1, p2 = base["v"][1], base["p"][1], base["p"][2]
    eta = cl._e_jet(0, 0)
    rhs = cl._e_add(
        cl._e_dy(cl._e_dy(v1)),
        cl._e_scale(cl._e_mul(eta, cl._e_dy(p1)), 2),
        cl._e_neg(cl._e_pshift(cl._e_add(cl._e_dt(v0),
                                         cl._e_mulpoly(cl._e_dx(v0), cl._UBAR)),
                               dr=1)),
        cl._e_pshift(cl._f2_source(eta, u0, p0), dr=1),
    )
    assert cl._e_scale(cl._e_dy(p2), 2) == rhs


def test_order2_pressure_boundary_condition():
    # p2(1) = -u1_x(1) + (2 eta eta_x + eta_x u0(1) + eta u0_x(1))
    #         - (W/sin) eta_xx
    base = cl._base_closures()
    u0, u1, p2 = base["u"][0], base["u"][1], base["p"][2]
    eta, eta_x = cl._e_jet(0, 0), cl._e_jet(1, 0)
    bc = cl._e_add(
        cl._e_neg(cl._e_at1(cl._e_dx(u1))),
        cl._e_scale(cl._e_mul(eta, eta_x), 2),
        cl._e_mul(eta_x, cl._e_at1(u0)),
        cl._e_mul(eta, cl._e_at1(cl._e_dx(u0))),
        cl._e_neg(cl._e_pshift(cl._e_jet(2, 0), dw=1)),
    )
    assert cl._e_at1(p2) == bc


def test_order1_u_trace_coefficients():
    # at y = 1 the order-1 streamwise closure has eta_t coefficient -2/3 and
    # eta_x coefficient -cot - R/2 (exact rationals)
    table = cl.build_closure_table("III")
    at1 = {}
    for t in table.field_terms("u"):
        if t.order != 1:
            continue
        val = sum(t.ypoly, Fraction(0))
        at1[(t.rpow, t.cotpow, t.wpow, t.jet)] = val
    assert at1[(1, 0, 0, ((0, 1),))] == Fraction(-2, 3)
    assert at1[(0, 1, 0, ((1, 0),))] == Fraction(-1)
    assert at1[(1, 0, 0, ((1, 0),))] == Fraction(-1, 2)
    assert at1[(0, 0, 0, ((0, 0), (0, 0)))] == Fraction(4)


def test_regime_I_differs_from_III_only_in_weber_pressure():
    tI = cl.build_closure_table("I")
    tIII = cl.build_closure_table("III")
    low = [t for t in tIII.terms if t.order <= 1]
    extras = set(tI.terms) - set(low)
    missing = set(low) - set(tI.terms)
    assert not missing
    assert len(extras) == 1
    (t,) = extras
    assert (t.field, t.order, t.dpow, t.wpow) == ("p", 1, 1, 1)
    assert t.jet == ((2, 0),) and t.ypoly == (Fraction(-1),)


def test_regime_II_weber_corrections():
    tII = cl.build_closure_table("II")
    weber = [t for t in tII.terms if t.wpow == 1]
    keyed = {(t.field, t.order): t for t in weber}
    assert keyed[("p", 0)].dpow == 2 and keyed[("p", 0)].ypoly == (Fraction(-1),)
    assert keyed[("u", 1)].ypoly == (Fraction(0), Fraction(2), Fraction(-1))
    assert keyed[("u", 1)].jet == ((3, 0),)
    assert keyed[("v", 1)].ypoly == (Fraction(0), Fraction(0), Fraction(-1),
                                     Fraction(1, 3))
    assert keyed[("v", 1)].jet == ((4, 0),)


def test_regime_IV_order2_weber_pressure_cancels():
    # the explicit order-2 correction removes the base table's W/sin term
    tIV = cl.build_closure_table("IV")
    p2_weber = [t for t in tIV.terms
                if t.field == "p" and t.order == 2 and t.wpow == 1]
    assert p2_weber == []
    p1_weber = [t for t in tIV.terms
                if t.field == "p" and t.order == 1 and t.wpow == 1]
    assert len(p1_weber) == 1 and p1_weber[0].dpow == 1


def test_kdv_has_no_closures():
    with pytest.raises(RegimeError):
        cl.build_closure_table("KdVBurgers")


def test_jet_requirements():
    assert cl.build_closure_table("III").jet_requirements() == (3, 2)
    assert cl.build_closure_table("II").jet_requirements() == (4, 1)


# --- numeric reconstruction -------------------------------------------------

def test_reconstruct_zero_state(params_III):
    s = ff.SurfaceState(np.zeros(33, dtype=complex), 64)
    jet = ff.eta_jet(s, params_III, "III")
    f = ff.reconstruct(jet, params_III, "III", M=8)
    assert np.all(f.u == 0.0) and np.all(f.v == 0.0) and np.all(f.p == 0.0)


def test_reconstruct_order0_analytic(params_III, cos_state):
    jet = ff.eta_jet(cos_state, params_III, "III")
    f = ff.reconstruct(jet, params_III, "III", M=16, max_order=0)
    x = np.arange(64) / 64
    y = np.linspace(0, 1, 17)
    eta = 0.1 * np.cos(2 * np.pi * x)
    np.testing.assert_allclose(f.u, 2 * y[:, None] * eta, atol=1e-14)
    np.testing.assert_allclose(
        f.v, 2 * np.pi * 0.1 * y[:, None] ** 2 * np.sin(2 * np.pi * x), atol=1e-14)
    np.testing.assert_allclose(
        f.p, np.broadcast_to(eta / math.tan(params_III.alpha), f.p.shape),
        atol=1e-13)


def test_reconstruct_order0_linearity(params_III):
    a = ff.initial_profile("cos", 64, amplitude=0.02)
    b = ff.initial_profile("cos", 64, amplitude=0.06)
    fa = ff.reconstruct(ff.eta_jet(a, params_III, "III"), params_III, "III",
                        M=8, max_order=0)
    fb = ff.reconstruct(ff.eta_jet(b, params_III, "III"), params_III, "III",
                        M=8, max_order=0)
    np.testing.assert_allclose(3.0 * fa.u, fb.u, rtol=1e-13, atol=1e-16)
    np.testing.assert_allclose(3.0 * fa.p, fb.p, rtol=1e-13, atol=1e-16)


@pytest.mark.parametrize("regime", ["I", "II", "III", "IV"])
def test_no_slip_and_divergence_numeric(regime):
    p = ff.validate_params(0.25, ff.weber_for_delta(regime, 0.1, 1.0),
                           math.pi / 4, 0.1, regime=regime)
    init = ff.initial_profile("noise", 64, amplitude=0.02, seed=9, n0=3)
    jet = ff.eta_jet(init, p, regime)
    f = ff.reconstruct(jet, p, regime, M=24)
    assert np.abs(f.u[0]).max() == 0.0
    assert np.abs(f.v[0]).max() == 0.0
    div = ff.divergence(f)
    assert np.abs(div).max() <= 1e-11
    for order in range(f.order):
        sub = ff.reconstruct(jet, p, regime, M=24, max_order=order)
        assert np.abs(ff.divergence(sub)).max() <= 1e-11


def test_surface_traces(params_III, cos_state):
    jet = ff.eta_jet(cos_state, params_III, "III")
    f0 = ff.reconstruct(jet, params_III, "III", M=8, max_order=0)
    tr = ff.surface_traces(f0)
    eta = cos_state.values()
    np.testing.assert_allclose(tr.u_y, 2 * eta, atol=1e-14)
    np.testing.assert_allclose(tr.p, eta / math.tan(params_III.alpha), atol=1e-13)
    zero = ff.SurfaceState(np.zeros(33, dtype=complex), 64)
    fz = ff.reconstruct(ff.eta_jet(zero, params_III, "III"), params_III, "III", M=8)
    trz = ff.surface_traces(fz)
    for name in ("u", "v", "p", "u_y", "v_x", "v_y"):
        assert np.all(getattr(trz, name) == 0.0)


def test_reconstruct_missing_jet_entry_is_named(params_III, cos_state):
    jet = ff.eta_jet(cos_state, params_III, "III", max_t_order=1)
    with pytest.raises(KeyError, match=r"j_t=2"):
        ff.reconstruct(jet, params_III, "III", M=8)
