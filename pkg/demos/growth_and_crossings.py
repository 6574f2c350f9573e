"""
How fast transient walks grow, and how often driftless ones spike
=================================================================

Two trajectory-level diagnostics.

First, growth: on the critical line alpha = beta = 1, a transient walk with
drift strength rho escapes like t^rho.  Fitting a log-log slope over the
last decade of each path recovers the exponent directly from simulation.

Second, sqrt-t crossings: a *driftless* walk (rho = 0) keeps brushing past
A*sqrt(t) at arbitrarily late times -- the hallmark of the iterated-
logarithm regime.  Reading first-crossing times off one batch of paths
gives P(cross by horizon T) for a nested family of T, nondecreasing in T
seed by seed.
"""

from driftlab.engine import ReplicaPlan, run_trajectories
from driftlab.kernels import DriftSpec, build_kernel
from driftlab.stats import growth_exponent, lil_crossing

SEED = 424150

# --- growth exponent of the strong transient walk --------------------------
kernel = build_kernel(DriftSpec(0.7, 1.0, 1.0), 1.5, "LatticeNN")
batch = run_trajectories(kernel, 3.0, 100, 10**5, ReplicaPlan(SEED, 400))
est = growth_exponent(batch)
print(f"growth exponent (rho = 0.7): {est.point:.4f} "
      f"[{est.lo:.4f}, {est.hi:.4f}] from {est.n} paths "
      f"({est.exclusions} excluded)")
print("   drift strength rho is     0.7000")
print()

# --- sqrt-t crossing frequencies for the driftless walk ---------------------
flat = build_kernel(DriftSpec(0.0, 1.0, 1.0), 1.0, "LatticeNN")
rows = lil_crossing(flat, 1.0, [10**3, 10**4, 10**5], 1.0, 100, 1000, SEED)
print("P(exists t <= T with X_t > sqrt(t)), driftless walk from x0 = 1:")
for horizon, e in zip([10**3, 10**4, 10**5], rows):
    print(f"   T = 10^{len(str(horizon)) - 1}: {e.point:.4f} "
          f"[{e.lo:.4f}, {e.hi:.4f}]")
