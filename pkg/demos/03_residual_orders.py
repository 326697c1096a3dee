"""Asymptotic order of the closure defects.

Substituting the reconstructed fields into the rescaled bulk equations
and boundary conditions leaves five residual braces.  Their norms should
shrink like delta^2 for the two-term closures (regimes I, II) and like
delta^3 for the three-term closures (III, IV).  This script runs the
ladder delta = 0.2 ... 0.025 and prints the fitted log-log slopes.
"""

import math
import os

import filmflow as ff
from filmflow import io as ffio
from filmflow.residuals import RESIDUAL_NAMES

OUT = os.path.join(os.path.dirname(__file__), "output")

DELTAS = [0.2, 0.1, 0.05, 0.025]
init = ff.initial_profile("cos", 64, amplitude=0.1)

print("fitted slope of each raw residual norm vs delta\n")
print(f"{'regime':>7} " + " ".join(f"{n:>7}" for n in RESIDUAL_NAMES)
      + "   target")
for regime in ("I", "II", "III", "IV"):
    params = ff.validate_params(0.25, ff.weber_for_delta(regime, 0.2, 1.0),
                                math.pi / 4, 0.2, regime=regime)
    report = ff.order_study(init, params, regime, DELTAS, M=256)
    row = " ".join(f"{report.slopes[n]:7.2f}" for n in RESIDUAL_NAMES)
    print(f"{regime:>7} {row}   {report.target:.0f}"
          f"  ({'pass' if report.passed else 'FAIL'})")
    ffio.write_order_report_csv(
        os.path.join(OUT, f"order_report_{regime}.csv"), report)

print(f"\nraw norms written to {OUT}/order_report_<regime>.csv")
