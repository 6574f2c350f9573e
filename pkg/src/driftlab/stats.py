"""Monte Carlo estimators over walk batches.

Almost-sure asymptotic statements are not observable at finite horizons, so
every estimator here reports a finite-replica surrogate with a confidence
interval: hitting probabilities against exit levels, sqrt-envelope crossing
fractions, running-minimum tail frequencies against the analytic
submartingale bound, exit-probability lower-bound checks, and log-log growth
exponents.  All estimators are deterministic functions of their inputs and
the master seed; monotonicity claims between nested runs hold per seed
because the underlying uniform streams are shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .engine import (ReplicaPlan, TrajectoryBatch, run_first_exits,
                     run_ruin_scan, run_trajectories)
from .kernels import Kernel, const_drift_kernel
from .lyapunov import choose_exit_exponent, nu_bound

# 95% two-sided normal quantile, pinned so intervals are bit-reproducible
Z95 = 1.959964

ESTIMATE_CSV_HEADER = "experiment,parameters,point,lo,hi,n,exclusions"


@dataclass(frozen=True)
class EstimateCI:
    """Point estimate with a confidence interval.

    ``method`` is "wilson" for proportions (point = s/n in [0,1]) and
    "normal" for real-valued statistics such as fitted slopes.
    """

    point: float
    lo: float
    hi: float
    n: int
    method: str
    exclusions: int = 0

    def __post_init__(self):
        if self.method not in ("wilson", "normal"):
            raise ValueError(f"unknown interval method: {self.method!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.exclusions < 0:
            raise ValueError("exclusions must be >= 0")
        if not (self.lo <= self.point <= self.hi):
            raise ValueError("interval must contain the point estimate")
        if self.method == "wilson" and not (0.0 <= self.lo and self.hi <= 1.0):
            raise ValueError("proportion interval must lie in [0,1]")

    @property
    def half_width(self) -> float:
        return (self.hi - self.lo) / 2

    def csv_row(self, experiment: str, parameters: str) -> str:
        if "," in parameters or '"' in parameters:
            raise ValueError("parameter string must be comma- and quote-free")
        return (f"{experiment},{parameters},{self.point!r},{self.lo!r},"
                f"{self.hi!r},{self.n},{self.exclusions}")


def wilson(successes: int, n: int, *, z: float = Z95,
           exclusions: int = 0) -> EstimateCI:
    """Wilson score interval for a binomial proportion.

    Contains s/n for every (s, n); at s=0 and s=n the interior endpoint
    stays strictly inside (0, 1).
    """
    if not 0 <= successes <= n:
        raise ValueError("successes must lie in [0, n]")
    phat = successes / n
    z2 = z * z
    denom = n + z2
    center = (successes + z2 / 2) / denom
    spread = z * math.sqrt(successes * (n - successes) / n + z2 / 4) / denom
    lo = max(0.0, min(center - spread, phat))
    hi = min(1.0, max(center + spread, phat))
    return EstimateCI(phat, lo, hi, n, "wilson", exclusions)


def normal_mean(values: Sequence[float], *, z: float = Z95,
                exclusions: int = 0) -> EstimateCI:
    """Normal interval for the mean of a sample (slope estimates etc.)."""
    vals = np.asarray(values, dtype=np.float64)
    if vals.size < 2:
        raise ValueError("need at least two values for a normal interval")
    mean = float(vals.mean())
    half = z * float(vals.std(ddof=1)) / math.sqrt(vals.size)
    return EstimateCI(mean, mean - half, mean + half, int(vals.size),
                      "normal", exclusions)


@dataclass(frozen=True)
class HittingCurve:
    """P(hit [0,a) before exceeding level) across a ladder of levels."""

    levels: tuple
    estimates: tuple
    a: float
    start: tuple  # (x0, t0)
    capped_fraction: tuple

    @property
    def unreliable(self) -> bool:
        # capped replicas are counted as "did not hit low", which biases the
        # estimate down; past 1% the curve should not be trusted
        return any(cf > 0.01 for cf in self.capped_fraction)


def hitting_curve(kernel: Kernel, a: float, levels: Sequence[float],
                  x0: float, t0: int, replicas: int, master_seed: int,
                  cap: int, *, threads: int = 1) -> HittingCurve:
    """Estimate P(X enters [0,a) before (level,inf)) for each level.

    One ruin scan to the low boundary serves every level: with the running
    maximum M before the low hit, the walk exited low at level L iff it
    reached low and M <= L.  All levels therefore share paths, and the
    estimates are nondecreasing in L seed-by-seed.
    """
    lv = [float(v) for v in levels]
    if len(lv) < 1 or any(b <= a_ for a_, b in zip(lv, lv[1:])):
        raise ValueError("levels must be nonempty and strictly increasing")
    if not a < x0 < lv[0]:
        raise ValueError("need a < x0 < min(levels)")
    plan = ReplicaPlan(master_seed, replicas)
    scan = run_ruin_scan(kernel, x0, t0, a, cap, plan, threads=threads)
    ests = []
    capped = []
    for level in lv:
        under = scan.max_xs <= level
        ests.append(wilson(int((scan.reached_low & under).sum()), replicas))
        capped.append(float((~scan.reached_low & under).mean()))
    return HittingCurve(tuple(lv), tuple(ests), a, (x0, t0), tuple(capped))


def lil_crossing(kernel: Kernel, crossing_level: float,
                 horizons: Sequence[int], x0: float, t0: int, replicas: int,
                 master_seed: int, *, threads: int = 1) -> list:
    """Estimate P(exists t <= T with X_t > A*sqrt(t)) for each horizon T.

    A single run at the largest horizon records the first crossing time per
    replica; smaller horizons are read off the same paths, so the estimates
    are nondecreasing in T for every seed.
    """
    if crossing_level < 0:
        raise ValueError("crossing level must be >= 0")
    hs = [int(h) for h in horizons]
    if len(hs) < 1 or any(b <= a for a, b in zip(hs, hs[1:])):
        raise ValueError("horizons must be nonempty and strictly increasing")
    if hs[0] < t0:
        raise ValueError("horizons are absolute times and must be >= t0")
    plan = ReplicaPlan(master_seed, replicas)
    batch = run_trajectories(kernel, x0, t0, hs[-1] - t0, plan,
                             cross_level=crossing_level, threads=threads)
    out = []
    for horizon in hs:
        crossed = (batch.cross_ts >= 0) & (batch.cross_ts <= horizon)
        out.append(wilson(int(crossed.sum()), replicas))
    return out


def doob_tail(kernel: Kernel, x: float, h: float, b: float, x0: float,
              t0: int, replicas: int, master_seed: int,
              *, threads: int = 1) -> tuple:
    """Running-minimum tail frequency vs the bound 4*h*B1^2/b^2.

    Over ceil(h*x^2) steps, estimates P(min X < x0 - b*x) and pairs it with
    the analytic submartingale bound.  The bound only applies where the
    drift is nonnegative, so any visited negative-drift state aborts.
    """
    if x <= 0 or h <= 0 or b <= 0:
        raise ValueError("x, h, b must all be positive")
    if b > x0 / x:
        raise ValueError("need b <= x0/x so the barrier stays nonnegative")
    steps = math.ceil(h * x * x)
    plan = ReplicaPlan(master_seed, replicas)
    batch = run_trajectories(kernel, x0, t0, steps, plan, threads=threads)
    if int(batch.neg_drift_hits.sum()) > 0:
        raise RuntimeError(
            "negative-drift state visited: the submartingale bound "
            "does not apply to this kernel on the region explored")
    barrier = x0 - b * x
    est = wilson(int((batch.min_xs < barrier).sum()), replicas)
    bound = 4.0 * h * kernel.b1 ** 2 / (b * b)
    return est, bound


@dataclass(frozen=True)
class ExitBoundReport:
    """Empirical exit-low probability against its analytic lower bound."""

    estimate: EstimateCI
    nu: float
    k: int
    capped: int

    @property
    def passed(self) -> bool:
        if self.capped > 0:
            return False
        p = self.estimate.point
        se = math.sqrt(p * (1 - p) / self.estimate.n)
        return p - 3 * se >= self.nu


def exit_bound_check(c: float, b2: float, gamma: float, a: float, n: float,
                     replicas: int, master_seed: int, cap: int,
                     *, threads: int = 1) -> ExitBoundReport:
    """Check P(X_tau < a) >= nu for the constant-drift kernel on [a, n].

    Starts at x0 = gamma*n, runs every replica to its exit from (a, n), and
    compares the exit-low frequency (minus three standard errors) to the
    uniform-in-n lower bound nu(gamma, k).
    """
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    k = choose_exit_exponent(c, b2)
    if not n > 2 * k * 1.0:  # B1 = 1 for the lattice test kernel
        raise ValueError(f"need n > 2*k*B1 = {2 * k}; got n = {n}")
    if n != int(n):
        raise ValueError("the exit level n must be a lattice point")
    kern = const_drift_kernel(c, int(n), a=a)
    nu = nu_bound(gamma, k)
    plan = ReplicaPlan(master_seed, replicas)
    batch = run_first_exits(kern, gamma * n, kern.t0, a, n, cap, plan,
                            threads=threads)
    capped = int(batch.capped.sum())
    est = wilson(int(batch.exited_low.sum()), replicas, exclusions=capped)
    return ExitBoundReport(est, nu, k, capped)


def _slopes_from_grid(sample_ts: np.ndarray, samples: np.ndarray,
                      t_end: int) -> tuple:
    """Per-replica log-log LS slopes over the last decade of the grid."""
    window = sample_ts >= t_end / 10
    if int(window.sum()) < 2:
        raise ValueError("fewer than two sample points in the last decade")
    lt = np.log(sample_ts[window].astype(np.float64))
    xs = samples[:, window]
    good = (xs > 0).all(axis=1)
    lx = np.log(np.where(xs > 0, xs, 1.0))
    lt_c = lt - lt.mean()
    denom = float((lt_c * lt_c).sum())
    slopes = ((lx - lx.mean(axis=1, keepdims=True)) * lt_c).sum(axis=1) / denom
    return slopes[good], int((~good).sum())


def growth_exponent(trajectories, *, z: float = Z95) -> EstimateCI:
    """Fitted exponent of x ~ t^s over the last decade of each trajectory.

    Accepts a TrajectoryBatch or an iterable of Trajectory sharing the same
    start and horizon.  Trajectories touching zero inside the fit window are
    excluded and counted; more than 1% exclusions is an error rather than a
    silent bias.
    """
    if isinstance(trajectories, TrajectoryBatch):
        batch = trajectories
        t_end = batch.t0 + batch.horizon
        if t_end < 100 * batch.t0:
            raise ValueError("horizon must span at least two decades of t")
        slopes, excluded = _slopes_from_grid(batch.sample_ts, batch.samples,
                                             t_end)
        total = batch.samples.shape[0]
    else:
        trajs = list(trajectories)
        if not trajs:
            raise ValueError("no trajectories given")
        starts = {(tr.t0, tr.horizon, tr.samples[0]) for tr in trajs}
        if len(starts) != 1:
            raise ValueError("trajectories must share start and horizon")
        t_end = trajs[0].t0 + trajs[0].horizon
        if t_end < 100 * trajs[0].t0:
            raise ValueError("horizon must span at least two decades of t")
        ts = np.array([t for t, _ in trajs[0].samples], dtype=np.int64)
        xs = np.array([[x for _, x in tr.samples] for tr in trajs])
        slopes, excluded = _slopes_from_grid(ts, xs, t_end)
        total = len(trajs)
    if excluded > 0.01 * total:
        raise RuntimeError(
            f"{excluded} of {total} trajectories hit zero in the fit "
            "window; the growth fit is not meaningful")
    return normal_mean(slopes, z=z, exclusions=excluded)
