"""Exact one-step drift verification for super/submartingale functionals.

Every check enumerates E[f(X_{t+1}, t+1) - f(x, t)] over the kernel's finite
step support -- no Taylor expansion anywhere. Region scans run a vectorized
float pass and re-check any point whose margin is within 1e-12 of zero in
exact rational arithmetic (kernel probabilities as Fractions of the stored
parameters), so sign verdicts at razor-thin margins are decided exactly, not
by rounding luck. The rational path exists whenever the functional and the
drift are rational in (x, t): integer exponents, integer lattice states, and
one of the t/x^2, x^2/t, (2n-x)^k functionals.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .kernels import Kernel, jump_probs_vec, step_law

KINDS = ("TransienceY", "RecurrenceY", "FractionalW", "ExitPower", "ScaledX")

# float margins closer to zero than this are re-decided in exact arithmetic
SIGN_BAND = 1e-12


@dataclass(frozen=True)
class Functional:
    """One of the proof functionals: t/x^2, x^2/t, x^(1-nu), (2n-x)^k, x/t^zeta."""

    kind: str
    nu: float | None = None
    k: int | None = None
    n: float | None = None
    zeta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown functional kind {self.kind!r}")
        if self.kind == "FractionalW":
            if self.nu is None or not 0 < self.nu < 1:
                raise ValueError("FractionalW needs nu in (0, 1)")
        elif self.kind == "ExitPower":
            if self.k is None or not isinstance(self.k, int) or self.k < 1:
                raise ValueError("ExitPower needs integer k >= 1")
            if self.n is None or self.n <= 0:
                raise ValueError("ExitPower needs n > 0")
        elif self.kind == "ScaledX":
            if self.zeta is None or not 0 < self.zeta < 1:
                raise ValueError("ScaledX needs zeta in (0, 1)")

    def value(self, x: float, t: float) -> float:
        if self.kind == "TransienceY":
            if x <= 0:
                raise ValueError("t/x^2 undefined at x <= 0")
            return t / (x * x)
        if self.kind == "RecurrenceY":
            return x * x / t
        if self.kind == "FractionalW":
            if x <= 0:
                raise ValueError("x^(1-nu) undefined at x <= 0")
            return x ** (1.0 - self.nu)
        if self.kind == "ExitPower":
            return (2.0 * self.n - x) ** self.k
        return x / t ** self.zeta  # ScaledX


@dataclass(frozen=True)
class Region:
    """Finite lattice scan region: integer x range with stride, and an
    inclusive t range per x (constants or callables of x)."""

    description: str
    x_lo: int
    x_hi: int
    t_lo: int | Callable[[int], int]
    t_hi: int | Callable[[int], int]
    x_stride: int = 1
    t_stride: int = 1

    def t_range(self, x: int) -> tuple[int, int]:
        lo = self.t_lo(x) if callable(self.t_lo) else self.t_lo
        hi = self.t_hi(x) if callable(self.t_hi) else self.t_hi
        return int(lo), int(hi)


@dataclass(frozen=True)
class RegionReport:
    """Scan outcome. max_drift is the extremal increment toward the violating
    side (max for want '<=0', min for want '>=0'), so near-misses are visible
    even when the sign holds everywhere."""

    region: str
    points_checked: int
    violations: tuple[tuple[float, float, float], ...]
    max_drift: float
    want: str = "<=0"

    def merge(self, other: "RegionReport") -> "RegionReport":
        if self.want != other.want:
            raise ValueError("cannot merge reports with different sign goals")
        ext = max if self.want == "<=0" else min
        return RegionReport(
            region=f"{self.region} + {other.region}",
            points_checked=self.points_checked + other.points_checked,
            violations=self.violations + other.violations,
            max_drift=ext(self.max_drift, other.max_drift),
            want=self.want)

    def to_json(self) -> str:
        return json.dumps({
            "region": self.region,
            "points_checked": self.points_checked,
            "violations": [list(v) for v in self.violations],
            "max_drift": self.max_drift,
            "want": self.want,
        })


def expected_increment(f: Functional, kernel: Kernel, x: float, t: int) -> float:
    """E[f(X_{t+1}, t+1) - f(x, t)] by exact enumeration of the step law."""
    if x <= 0:
        raise ValueError("scan states must satisfy x > 0")
    if f.kind == "ExitPower" and x >= 2 * f.n:
        raise ValueError("ExitPower increment requires x < 2n")
    law = step_law(kernel, x, t)
    terms = [p * f.value(x + j, t + 1) for j, p in law.outcomes]
    terms.append(-f.value(x, t))
    return math.fsum(terms)  # compensated: exact sum of the rounded terms


def _exact_drift_fraction(kernel: Kernel, x: int, t: int) -> Fraction:
    """Clamped drift as an exact rational; requires integer exponents."""
    if kernel.variant == "ConstDriftTest":
        d = Fraction(kernel.const_drift_c) / kernel.const_drift_n
    else:
        s = kernel.spec
        if not (float(s.alpha).is_integer() and float(s.beta).is_integer()):
            raise ValueError("exact drift needs integer exponents")
        d = Fraction(s.rho) * Fraction(x) ** int(s.alpha) / Fraction(t) ** int(s.beta)
    cap = Fraction(1) - Fraction(kernel.hold) if kernel.variant == "LazyLattice" \
        else Fraction(1)
    return min(d, cap)


def _exact_value(f: Functional, x: int, t: int) -> Fraction:
    if f.kind == "TransienceY":
        return Fraction(t, x * x)
    if f.kind == "RecurrenceY":
        return Fraction(x * x, t)
    if f.kind == "ExitPower":
        return (2 * Fraction(f.n) - x) ** f.k
    raise ValueError(f"{f.kind} has no rational evaluation")


def exact_increment(f: Functional, kernel: Kernel, x: int, t: int) -> Fraction:
    """Rational E[f(X_{t+1}, t+1)] - f(x, t) for rational-valued functionals
    on integer lattice states; ValueError when not exactly representable."""
    if not (float(x).is_integer() and float(t).is_integer()):
        raise ValueError("exact increments need integer lattice (x, t)")
    x, t = int(x), int(t)
    if x <= 0:
        raise ValueError("scan states must satisfy x > 0")
    if x < kernel.a:
        raise ValueError("exact increments are for the non-reflected zone x >= a")
    d = _exact_drift_fraction(kernel, x, t)
    if kernel.variant == "LazyLattice":
        hold = Fraction(kernel.hold)
        base_p = (1 - hold) / 2
        outcomes = ((1, base_p + d / 2), (0, hold), (-1, base_p - d / 2))
    else:
        outcomes = ((1, Fraction(1, 2) + d / 2), (-1, Fraction(1, 2) - d / 2))
    total = -_exact_value(f, x, t)
    for j, p in outcomes:
        total += p * _exact_value(f, x + j, t + 1)
    return total


def _values_vec(f: Functional, x: float, t: np.ndarray) -> np.ndarray:
    if f.kind == "TransienceY":
        if x <= 0:
            raise ValueError("t/x^2 undefined at x <= 0")
        return t / (x * x)
    if f.kind == "RecurrenceY":
        return (x * x) / t
    if f.kind == "FractionalW":
        if x <= 0:
            raise ValueError("x^(1-nu) undefined at x <= 0")
        return np.full_like(t, x ** (1.0 - f.nu))
    if f.kind == "ExitPower":
        return np.full_like(t, (2.0 * f.n - x) ** f.k)
    return x / t ** f.zeta


def verify_region(f: Functional, kernel: Kernel, region: Region,
                  want: str = "<=0") -> RegionReport:
    """Check the sign of expected_increment at every lattice point of region.

    Float pass first; margins within SIGN_BAND of zero are re-decided by
    exact_increment when a rational path exists. Violations hold the points
    where the wanted sign genuinely fails.
    """
    if want not in ("<=0", ">=0"):
        raise ValueError("want must be '<=0' or '>=0'")
    if region.x_lo > region.x_hi:
        raise ValueError("empty region: x_lo > x_hi")
    if region.x_lo < max(kernel.a, 1):
        raise ValueError("regions must declare x >= max(a, 1)")
    sign = 1.0 if want == "<=0" else -1.0  # violation when sign*drift > 0
    try:
        exact_increment(f, kernel, max(int(region.x_lo), 1) + 1, 2)
        have_exact = True
    except (ValueError, TypeError, ZeroDivisionError):
        have_exact = False

    points = 0
    worst = -math.inf
    violations: list[tuple[float, float, float]] = []
    for x in range(region.x_lo, region.x_hi + 1, region.x_stride):
        t_lo, t_hi = region.t_range(x)
        if t_lo > t_hi:
            continue
        if t_lo < kernel.t0:
            raise ValueError(f"region dips below the kernel's t0 at x={x}")
        if f.kind == "ExitPower" and x + 1 > 2 * f.n:
            raise ValueError("ExitPower region requires x < 2n")
        ts = np.arange(t_lo, t_hi + 1, region.t_stride, dtype=np.float64)
        jumps, probs = jump_probs_vec(kernel, float(x), ts)
        drift = -_values_vec(f, float(x), ts)
        for row, j in enumerate(jumps):
            drift += probs[row] * _values_vec(f, float(x) + j, ts + 1.0)
        points += ts.size
        worst = max(worst, float(np.max(sign * drift)))
        near = np.nonzero(sign * drift > -SIGN_BAND)[0]
        for i in near:
            t = int(ts[i])
            if have_exact:
                bad = sign * exact_increment(f, kernel, x, t) > 0
            else:
                bad = sign * drift[i] > 0
            if bad:
                violations.append((float(x), float(t), float(drift[i])))
    if points == 0:
        raise ValueError("empty region: no lattice points")
    return RegionReport(region=region.description, points_checked=points,
                        violations=tuple(violations),
                        max_drift=sign * worst, want=want)


def choose_exit_exponent(c: float, B2: float) -> int:
    """Smallest integer k with k > 1 + 16 c / B2 (exit-power submartingale)."""
    if c <= 0 or B2 <= 0:
        raise ValueError("c and B2 must be positive")
    threshold = 1 + 16 * Fraction(c) / Fraction(B2)
    return math.floor(threshold) + 1


def nu_bound(gamma: float, k: int) -> float:
    """Lower bound ((2-gamma)^k - 1)/(2^k - 1) for P(exit low) from x0 = gamma*n."""
    if not 0 < gamma < 1:
        raise ValueError("gamma must be in (0, 1)")
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be an integer >= 1")
    return ((2.0 - gamma) ** k - 1.0) / (2.0 ** k - 1.0)
