"""
A two-color urn that secretly is a drifting walk
================================================

Draw a ball, put it back with A extra copies of its color, and top up the
other color so the urn gains exactly sigma balls per draw.  The signed
color difference Z = W - B then performs a walk whose conditional drift is
*exactly* rho * Z / t with rho = (2A - sigma) / sigma and t the urn clock
(W + B) / sigma -- the critical-line drift, realized by a sampling scheme
rather than imposed by formula.

Below: first the identity is checked state by state along one long urn
history; then a return census shows the recurrence/transience split --
the rho = 2/3 urn's color difference revisits its starting value a handful
of times and stops, while the rho = 1/3 urn keeps coming back.
"""

from driftlab.urn import (coupled_walk, deterministic_urn, run_urn, urn_rho,
                          zero_return_census)

SEED = 77003

# --- the coupling identity, checked exactly ---------------------------------
spec = deterministic_urn(3.0, 2.0, 2.0, 1.0)   # sigma=3, A=2: rho = 1/3
xs, record = coupled_walk(run_urn(spec, 20_000, SEED))
print(f"urn sigma=3, A=2  =>  rho = {urn_rho(spec):.6f}")
print(f"drift-identity residual over 20,000 states: "
      f"{record.drift_identity_residual:.3e}")
print(f"step magnitudes of the coupled walk: {record.step_magnitudes}")
print(f"final coupled value: x = {record.x:.1f}")
print()

# --- return census: recurrent vs transient ----------------------------------
recurrent = deterministic_urn(3.0, 2.0, 2.0, 1.0)   # rho = 1/3 < 1/2
transient = deterministic_urn(6.0, 5.0, 5.0, 1.0)   # rho = 2/3 > 1/2
horizon, replicas = 100_000, 1000
rec = zero_return_census(recurrent, horizon, replicas, SEED)
tra = zero_return_census(transient, horizon, replicas, SEED)

print(f"returns of W - B to its start over {horizon:,} draws "
      f"({replicas} urns each):")
for label, census in (("rho = 1/3", rec), ("rho = 2/3", tra)):
    mean_returns = census.return_count.mean()
    never = (census.return_count == 0).mean()
    late = (census.lasts_at[:, -1] > horizon // 10).mean()
    print(f"   {label}: mean returns {mean_returns:7.2f}, "
          f"never {never:.3f}, still returning late {late:.3f}")
