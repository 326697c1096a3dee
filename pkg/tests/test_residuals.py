import math

import numpy as np
import pytest

import filmflow as ff
from filmflow.residuals import (RESIDUAL_NAMES, nusselt_profile,
                                residual_braces, residual_series)

ALPHA4 = math.pi / 4


def _setup(regime, delta=0.1, amplitude=0.1, N=64, max_t=3, W2=1.0):
    p = ff.validate_params(0.25, ff.weber_for_delta(regime, delta, W2), ALPHA4,
                           delta, regime=regime, W2=W2)
    init = ff.initial_profile("cos", N, amplitude=amplitude)
    jet = ff.eta_jet(init, p, regime, max_t_order=max_t)
    field = ff.reconstruct(jet, p, regime, M=64)
    return p, init, jet, field


def test_nusselt_profile_values():
    y = np.linspace(0, 1, 5)
    np.testing.assert_allclose(nusselt_profile(y), 2 * y - y * y)
    assert nusselt_profile(1.0) == 1.0


def test_zero_state_zero_sources_and_residuals(params_III):
    s = ff.SurfaceState(np.zeros(33, dtype=complex), 64)
    jet = ff.eta_jet(s, params_III, "III", max_t_order=3)
    field = ff.reconstruct(jet, params_III, "III", M=16)
    src = ff.source_terms(jet, field, params_III)
    assert np.all(src.f1_1 == 0.0) and np.all(src.h3 == 0.0)
    rs = ff.residual_set(jet, field, src, params_III, "III")
    for name in RESIDUAL_NAMES:
        assert rs.norms[name] == 0.0


def test_h3_analytic(params_III, cos_state):
    jet = ff.eta_jet(cos_state, params_III, "III", max_t_order=3)
    field = ff.reconstruct(jet, params_III, "III", M=16)
    src = ff.source_terms(jet, field, params_III)
    x = np.arange(64) / 64
    expected = -0.001 * 2 * np.pi * np.cos(2 * np.pi * x) ** 2 * np.sin(2 * np.pi * x)
    np.testing.assert_allclose(src.h3, expected, atol=1e-15)


def test_h2_2_with_order0_fields(params_III, cos_state):
    # u(1) = 2 eta at order 0, so 2 eta eta_x + eta_x u + eta u_x = 6 eta eta_x
    jet = ff.eta_jet(cos_state, params_III, "III", max_t_order=3)
    f0 = ff.reconstruct(jet, params_III, "III", M=16, max_order=0)
    src = ff.source_terms(jet, f0, params_III)
    eta = cos_state.values()
    eta_x = -0.1 * 2 * np.pi * np.sin(2 * np.pi * np.arange(64) / 64)
    np.testing.assert_allclose(src.h2_2, 6 * eta * eta_x, atol=1e-14)


def test_residual_set_requires_positive_delta(params_III, cos_state):
    jet = ff.eta_jet(cos_state, params_III, "III", max_t_order=3)
    field = ff.reconstruct(jet, params_III, "III", M=16)
    with pytest.raises(ValueError):
        ff.residual_set(jet, field, None, params_III, "III", delta=0.0)


def test_phi3_vanishes_when_delta_weights_zero():
    # with delta = 0 in both the jet and the assembly weights, the
    # kinematic brace eta_t + eta_x - v0 cancels identically
    p = ff.validate_params(0.25, 1.0, ALPHA4, 0.1, regime="III").with_delta(0.0)
    init = ff.initial_profile("noise", 64, amplitude=0.1, seed=2)
    jet = ff.eta_jet(init, p, "III", max_t_order=3)
    field = ff.reconstruct(jet, p, "III", M=16)
    _, norms = residual_braces(jet, field, None, p, "III", delta=0.0)
    assert norms["phi3"] <= 1e-12


def test_phi1_order0_truncation_diverges():
    # with the field truncated at order 0 the stress brace is
    # -4 delta eta^2 - delta^2 (v0_x - 2 eta^3) at y = 1, so the reported
    # residual grows like delta^-2 and the truncation is insufficient
    norms = {}
    for d in (1e-4, 1e-5):
        p, init, jet, _ = _setup("III", delta=d)
        f0 = ff.reconstruct(jet, p, "III", M=8, max_order=0)
        rs = ff.residual_set(jet, f0, None, p, "III")
        eta = init.values()
        lead = np.max(np.abs(d * d * rs.phi1 + 4 * eta**2))
        assert lead <= 10.0 * d        # remaining terms are O(delta)
        norms[d] = rs.norms["phi1"]
    assert norms[1e-5] / norms[1e-4] == pytest.approx(100.0, rel=0.02)


@pytest.mark.parametrize("regime", ["I", "II", "III", "IV"])
def test_order_study_slopes(regime):
    p = ff.validate_params(0.25, ff.weber_for_delta(regime, 0.2, 1.0), ALPHA4,
                           0.2, regime=regime, W2=1.0)
    init = ff.initial_profile("cos", 64, amplitude=0.1)
    rep = ff.order_study(init, p, regime, [0.2, 0.1, 0.05, 0.025], M=256)
    assert rep.passed, rep.slopes
    for name in RESIDUAL_NAMES:
        assert rep.slopes[name] >= rep.threshold


def test_order_study_input_validation(params_III, cos_state):
    with pytest.raises(ValueError):
        ff.order_study(cos_state, params_III, "III", [0.1], M=16)
    with pytest.raises(ValueError):
        ff.order_study(cos_state, params_III, "III", [0.05, 0.1, 0.2], M=16)


def test_residuals_vanish_with_amplitude():
    p, _, jet, field = _setup("III", amplitude=0.1)
    _, big = residual_braces(jet, field, None, p, "III")
    p2, _, jet2, field2 = _setup("III", amplitude=0.01)
    _, small = residual_braces(jet2, field2, None, p2, "III")
    for name in RESIDUAL_NAMES:
        if big[name] > 0:
            assert small[name] <= 0.2 * big[name]


def test_grid_independence_in_N():
    vals = {}
    for N in (64, 128):
        p, _, jet, field = _setup("III", N=N)
        _, norms = residual_braces(jet, field, None, p, "III")
        vals[N] = norms
    for name in RESIDUAL_NAMES:
        if vals[64][name] > 0:
            rel = abs(vals[128][name] - vals[64][name]) / vals[64][name]
            assert rel <= 1e-8, (name, rel)


def test_residual_series_along_trajectory(params_III):
    co = ff.model_coefficients(params_III, "III")
    init = ff.initial_profile("cos", 64, amplitude=0.05)
    traj = ff.simulate(init, co, "III", T=0.02, dt=1e-3, stride=10)
    series = residual_series(traj, params_III, "III", M=32)
    assert len(series) == len(traj)
    assert series[0][0] == 0.0
    for tau, rs in series:
        assert all(np.isfinite(rs.norms[name]) for name in RESIDUAL_NAMES)
