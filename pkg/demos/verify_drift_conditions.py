"""
Checking supermartingale conditions by exact enumeration
========================================================

The classifier's verdicts rest on drift conditions: a scalar functional of
(x, t) whose one-step expected change has a definite sign on a stated
region.  Because the lattice kernels have two-point jump laws, that
expectation is a finite sum -- so the conditions can be *checked*, not
sampled, over millions of lattice points.  `verify_region` does the scan
and reports the worst margin it saw; margins that round to zero are
re-decided in exact rational arithmetic.
"""

import math

from driftlab.kernels import DriftSpec, build_kernel, const_drift_kernel
from driftlab.lyapunov import Functional, Region, nu_bound, verify_region

# --- transient side: Y = t / x^2 ------------------------------------------
# For the strong walk (rho = 0.7 on the critical line), Y shrinks in the
# mean wherever t is comfortably below 0.1 * x^2 and the drift clamp is
# inactive (t >= 0.7 x).
strong = build_kernel(DriftSpec(0.7, 1.0, 1.0), 1.0, "LatticeNN")
report = verify_region(
    Functional("TransienceY"), strong,
    Region("50<=x<=400, 0.7x<=t<=0.1x^2", 50, 400,
           lambda x: math.ceil(0.7 * x), lambda x: (x * x) // 10),
    "<=0")
print(f"transience scan : {report.points_checked:,} points, "
      f"{len(report.violations)} violations, worst drift {report.max_drift:.2e}")

# --- recurrent side: Y = x^2 / t -------------------------------------------
# For the weak walk (rho = 0.3) the same calculation flips: x^2/t shrinks
# exactly when x^2/t >= 2.5, and the threshold is sharp -- just past it the
# drift turns positive.
weak = build_kernel(DriftSpec(0.3, 1.0, 1.0), 2.0, "LatticeNN")
clean = verify_region(
    Functional("RecurrenceY"), weak,
    Region("3<=x<=300, x^2/t>=2.5", 3, 300,
           lambda x: math.ceil(0.3 * x), lambda x: (x * x * 2) // 5),
    "<=0")
past = verify_region(
    Functional("RecurrenceY"), weak,
    Region("x^2/t<=2.4 sample", 10, 60,
           lambda x: (x * x * 5) // 12 + 1, lambda x: (x * x * 5) // 12 + 60,
           x_stride=10, t_stride=7),
    "<=0")
print(f"recurrence scan : {clean.points_checked:,} points, "
      f"{len(clean.violations)} violations on the good side; "
      f"{len(past.violations)} positive-drift points past the threshold")

# --- exit bound: Z^k with Z = 2n - x ---------------------------------------
# For the constant-drift test kernel the power functional certifies a
# lower bound nu on the probability of exiting a box at its bottom.
const = const_drift_kernel(0.25, 200, a=2.0)
power = verify_region(
    Functional("ExitPower", k=6, n=200.0), const,
    Region("2<=x<=200", 2, 200, 1, 1), ">=0")
print(f"exit-power scan : {power.points_checked} states, "
      f"{len(power.violations)} violations; "
      f"certified floor nu = {nu_bound(0.5, 6):.5f}")
