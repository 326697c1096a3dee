"""Independent cross-checks of the spectral solver.

Three oracles with different failure modes: the exact transform solution
of the quadratic model, a second-order finite-difference reference run,
and the linear decay rate read off the symbol.
"""

import math

import numpy as np

import filmflow as ff

ALPHA = math.pi / 4

# 1. exact transform solution of z_tau + 4 z z_x = nu z_xx
params = ff.validate_params(0.25, 1.0, ALPHA, 0.1, regime="I")
coeffs = ff.model_coefficients(params, "I")
init = ff.initial_profile("sin", 128, amplitude=0.1)
traj = ff.simulate(init, coeffs, "I", T=0.5, dt=1e-4, stride=5000)
exact = ff.cole_hopf(init, coeffs.nu, 0.5)
gap = np.max(np.abs(traj.final.values() - exact.values()))
print(f"transform oracle   : max-norm gap at tau=0.5     {gap:.2e}")

# 2. independent discretization (central differences + classical RK4)
p9 = ff.validate_params(1.2375, 1.0, ALPHA, 0.1, regime="I")
c9 = ff.model_coefficients(p9, "I")
small = ff.initial_profile("cos", 128, amplitude=0.02)
spectral = ff.simulate(small, c9, "I", T=0.25, dt=1e-3, stride=250)
fd = ff.fd_reference(small, p9, "I", Nfd=512, dt=2e-4, T=0.25)
print(f"FD reference       : relative L2 vs spectral      "
      f"{ff.relative_l2(fd.final, spectral.final):.2e}")

# 3. decay-rate fit against the linear symbol
pd = ff.validate_params(0.625, 1.0, ALPHA, 0.1, regime="I")
cd = ff.model_coefficients(pd, "I")
tiny = ff.initial_profile("cos", 64, amplitude=1e-4)
fit = ff.decay_fit(ff.simulate(tiny, cd, "I", T=0.2, dt=1e-4, stride=20), 0.0)
expected = 2.0 * cd.nu * (2 * np.pi) ** 2
print(f"decay fit          : c = {fit.c:.3f}, linear rate 2 nu kappa^2 = "
      f"{expected:.3f} (r^2 = {fit.rsq:.6f})")
