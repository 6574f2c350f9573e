"""One-step transition kernels with drift rho*x^alpha/t^beta and certified bounds.

Three lattice variants realize the drift exactly on the clamp-free region:

* ``LatticeNN``     - nearest neighbour +-1 steps, P(+1) = 1/2 + drift/2.
* ``LazyLattice``   - holds in place with probability ``hold`` (default 1/2),
                      P(+-1) = (1-hold)/2 +- drift/2; exercises B2 < B1**2.
* ``ConstDriftTest``- +-1 steps with constant drift c/n on [a, n]; exists to
                      exercise the interval-exit bound, whose hypothesis
                      (drift <= c/n uniformly) no power-law kernel satisfies.

All variants reflect deterministically (+1) below the threshold ``a``, which
certifies a finite mean exit time from [0, a], and clamp the drift at the
largest value their law can carry (1 for +-1 laws, 1-hold for the lazy one).
States stay on the integer grid when started there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

VARIANTS = ("LatticeNN", "LazyLattice", "ConstDriftTest")


@dataclass(frozen=True)
class DriftSpec:
    """Drift parameter triple (rho, alpha, beta).

    Admissible region: beta >= 0 and alpha <= beta, with rho <= 1 on the
    alpha = beta line (unit-jump normalization). rho = 0 is accepted as the
    symmetric baseline walk.
    """

    rho: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("rho", "alpha", "beta"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"{name} must be a finite real, got {v!r}")
        if self.rho < 0:
            raise ValueError(f"rho must be nonnegative, got {self.rho}")
        if self.beta < 0 or self.alpha > self.beta:
            raise ValueError(
                f"(alpha, beta) = ({self.alpha}, {self.beta}) outside the "
                "admissible region (beta >= 0 and alpha <= beta)")
        if self.alpha == self.beta and self.rho > 1:
            raise ValueError(
                f"rho = {self.rho} > 1 not admissible on the alpha = beta "
                "line (jumps bounded by 1 force rho <= 1 there)")


@dataclass(frozen=True)
class StepLaw:
    """Finite one-step law: ((jump, probability), ...)."""

    outcomes: tuple[tuple[float, float], ...]

    def mean(self) -> float:
        return sum(j * p for j, p in self.outcomes)

    def second_moment(self) -> float:
        return sum(j * j * p for j, p in self.outcomes)


@dataclass(frozen=True)
class HypothesisBounds:
    """Certified constants: jump bound B1, second-moment floor B2 on [a, inf),
    and the mean of a variable dominating the exit time of [0, a]."""

    B1: float
    B2: float
    a: float
    exit_bound_mean: float

    def __post_init__(self):
        if self.B2 > self.B1 ** 2:
            raise ValueError("B2 cannot exceed B1**2")
        if not math.isfinite(self.exit_bound_mean) or self.exit_bound_mean <= 0:
            raise ValueError("exit_bound_mean must be finite and positive")


@dataclass(frozen=True)
class Kernel:
    """Immutable transition kernel; all operations are pure in (kernel, x, t)."""

    spec: DriftSpec
    a: float
    t0: int
    variant: str
    const_drift_c: float | None = None
    const_drift_n: int | None = None
    hold: float = 0.5

    @property
    def b1(self) -> float:
        return 1.0

    @property
    def drift_cap(self) -> float:
        # largest mean step the law can represent
        return 1.0 - self.hold if self.variant == "LazyLattice" else 1.0

    def drift_raw(self, x: float, t: float) -> float:
        """Unclamped target drift at (x, t) for x >= a."""
        if self.variant == "ConstDriftTest":
            return self.const_drift_c / self.const_drift_n
        s = self.spec
        if s.rho == 0.0:
            return 0.0
        if s.alpha == 1.0 and s.beta == 1.0:
            return s.rho * x / t
        return s.rho * x ** s.alpha / t ** s.beta

    def drift(self, x: float, t: float) -> float:
        """Clamped drift: min(drift_raw, drift_cap)."""
        return min(self.drift_raw(x, t), self.drift_cap)

    def is_clamped(self, x: float, t: float) -> bool:
        return self.drift_raw(x, t) > self.drift_cap


def build_kernel(spec: DriftSpec, a: float, variant: str, *, t0: int = 1,
                 const_drift_c: float | None = None,
                 const_drift_n: int | None = None,
                 hold: float = 0.5) -> Kernel:
    """Construct a kernel with validated parameters.

    ``a >= 1`` keeps the reflection zone nonempty on the grid and the drift
    evaluation away from x = 0. ConstDriftTest requires its (c, n) pair and a
    spec equal to the constant-drift triple (c/n, 0, 0); use
    :func:`const_drift_kernel` to build both at once.
    """
    if not isinstance(spec, DriftSpec):
        raise TypeError("spec must be a DriftSpec")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    if not (isinstance(a, (int, float)) and math.isfinite(a)) or a < 1:
        raise ValueError(f"a must be a real >= 1, got {a!r}")
    if not isinstance(t0, int) or t0 < 1:
        raise ValueError(f"t0 must be a positive integer, got {t0!r}")
    if variant == "ConstDriftTest":
        if const_drift_c is None or const_drift_n is None:
            raise ValueError("ConstDriftTest needs const_drift_c and const_drift_n")
        if const_drift_c <= 0:
            raise ValueError("const_drift_c must be positive")
        if not isinstance(const_drift_n, int) or const_drift_n < 1:
            raise ValueError("const_drift_n must be a positive integer")
        want = const_drift_c / const_drift_n
        if spec.alpha != 0 or spec.beta != 0 or abs(spec.rho - want) > 1e-12:
            raise ValueError(
                "ConstDriftTest spec must be the constant-drift triple "
                f"(c/n, 0, 0) = ({want}, 0, 0)")
    else:
        if const_drift_c is not None or const_drift_n is not None:
            raise ValueError(f"{variant} takes no const_drift parameters")
    if variant == "LazyLattice":
        if not 0 < hold < 1:
            raise ValueError(f"hold probability must be in (0, 1), got {hold}")
    return Kernel(spec=spec, a=float(a), t0=t0, variant=variant,
                  const_drift_c=const_drift_c, const_drift_n=const_drift_n,
                  hold=hold)


def const_drift_kernel(c: float, n: int, a: float = 1.0, *, t0: int = 1) -> Kernel:
    """ConstDriftTest kernel with drift exactly c/n on [a, n]."""
    return build_kernel(DriftSpec(rho=c / n, alpha=0.0, beta=0.0), a,
                        "ConstDriftTest", t0=t0, const_drift_c=c, const_drift_n=n)


def step_law(kernel: Kernel, x: float, t: int) -> StepLaw:
    """One-step jump law at (x, t).

    Below the threshold a the jump is a deterministic +1 (reflection); at or
    above a the law carries mean drift min(rho*x^alpha/t^beta, drift_cap).
    """
    if t < kernel.t0:
        raise ValueError(f"t = {t} below the kernel's first time index {kernel.t0}")
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x < kernel.a:
        return StepLaw(outcomes=((1.0, 1.0),))
    d = kernel.drift(x, t)
    if kernel.variant == "LazyLattice":
        base = (1.0 - kernel.hold) / 2.0
        p_up = base + d / 2.0
        p_dn = base - d / 2.0
        return StepLaw(outcomes=((1.0, p_up), (0.0, kernel.hold), (-1.0, p_dn)))
    p_up = 0.5 + d / 2.0
    return StepLaw(outcomes=((1.0, p_up), (-1.0, 1.0 - p_up)))


def moments(kernel: Kernel, x: float, t: int) -> tuple[float, float]:
    """(mean, second moment) of the one-step jump, by exact enumeration."""
    law = step_law(kernel, x, t)
    return law.mean(), law.second_moment()


def hypothesis_bounds(kernel: Kernel) -> HypothesisBounds:
    """Analytically certified (B1, B2, a, exit_bound_mean) for the kernel.

    B1 = 1 (unit jumps). B2 = E D^2 on [a, inf): 1 for the +-1 laws, 1-hold
    for the lazy one. The exit-time mean for [0, a]: every state below a
    forces +1, so any start in [0, a) exits within ceil(a) steps; when a sits
    on the grid the state x = a leaves only through the random law, which
    succeeds in one step with probability p >= pmin and otherwise detours for
    two (down to a-1, forced back), so E steps from a <= (1+q)/p <= 3 for the
    +-1 laws (pmin = 1/2) and <= 5 for the lazy law (pmin = (1-hold)/2 = 1/4
    at hold = 1/2; the hold outcome costs one step).
    """
    a = kernel.a
    if kernel.variant == "LazyLattice":
        b2 = 1.0 - kernel.hold
        at_a_mean = (1.0 + (1.0 - kernel.hold) / 2.0) / ((1.0 - kernel.hold) / 2.0)
    else:
        b2 = 1.0
        at_a_mean = 3.0
    if a == math.floor(a):
        mu = a + at_a_mean
    else:
        mu = math.ceil(a)
    return HypothesisBounds(B1=1.0, B2=b2, a=a, exit_bound_mean=mu)


def jump_probs_vec(kernel: Kernel, x: float, t: np.ndarray):
    """Jumps and their probabilities at fixed x >= a over a vector of times.

    Returns (jumps, probs) with probs.shape == (len(jumps), len(t)). Used by
    the region scans; reflection states (x < a) are rejected because scan
    regions declare x >= max(a, 1).
    """
    if x < kernel.a:
        raise ValueError(f"x = {x} below the non-degeneracy threshold {kernel.a}")
    t = np.asarray(t, dtype=np.float64)
    if kernel.variant == "ConstDriftTest":
        d = np.full_like(t, kernel.const_drift_c / kernel.const_drift_n)
    else:
        s = kernel.spec
        if s.alpha == 1.0 and s.beta == 1.0:
            d = s.rho * x / t
        else:
            d = s.rho * x ** s.alpha / t ** s.beta
    np.minimum(d, kernel.drift_cap, out=d)
    if kernel.variant == "LazyLattice":
        base = (1.0 - kernel.hold) / 2.0
        hold = np.full_like(t, kernel.hold)
        return (1.0, 0.0, -1.0), np.stack([base + d / 2.0, hold, base - d / 2.0])
    p_up = 0.5 + d / 2.0
    return (1.0, -1.0), np.stack([p_up, 1.0 - p_up])
