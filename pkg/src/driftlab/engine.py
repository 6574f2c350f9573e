"""Deterministic trajectory and first-exit simulation.

Reproducibility contract: replica r of a run with master seed s draws its
uniforms from the counter-based generator keyed (s, r + stream_offset), one
uniform per step -- reflection steps included -- so any prefix of a walk is
independent of the horizon, and replicas are independent of scheduling.
Multi-threaded runs split the replica range into contiguous chunks writing
into disjoint slices of preallocated arrays: results are bit-identical for
every thread count.

The hot loops are numba-compiled (single trajectory step ~10 ns), with the
uniform layout frozen as: LatticeNN/ConstDriftTest step +1 iff u < p_up;
LazyLattice steps +1 on [0, p_up), holds on [p_up, p_up + hold), else -1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .kernels import Kernel
from .rng import U53, philox4_nb

_U64_1 = np.uint64(1)
_U64_11 = np.uint64(11)


@dataclass(frozen=True)
class Trajectory:
    """A single simulated path with its running diagnostics."""

    seed: int
    x0: float
    t0: int
    horizon: int
    samples: tuple[tuple[int, float], ...]  # geometric (t, x) downsample
    final: tuple[int, float]
    sup_ratio: float     # max over all steps of x_t / sqrt(t), full resolution
    min_x: float
    clamp_hits: int


@dataclass(frozen=True)
class ExitOutcome:
    """Terminal event of a first-exit run from the interval (a, n)."""

    exited_low: bool
    exit_time: int       # absolute t of the terminal state
    exit_x: float
    capped: bool


@dataclass(frozen=True)
class ReplicaPlan:
    """Monte Carlo sizing: replica r uses generator key (master_seed, r)."""

    master_seed: int
    replicas: int

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")


@dataclass
class TrajectoryBatch:
    """Struct-of-arrays result of run_trajectories (one row per replica)."""

    plan: ReplicaPlan
    t0: int
    horizon: int
    sample_ts: np.ndarray    # shared absolute sample times, int64
    samples: np.ndarray      # float64 (replicas, len(sample_ts))
    finals: np.ndarray
    sup_ratios: np.ndarray
    min_xs: np.ndarray
    clamp_hits: np.ndarray
    neg_drift_hits: np.ndarray
    cross_ts: np.ndarray     # first t with x^2 > A^2 t; -1 if never


@dataclass
class ExitBatch:
    """Struct-of-arrays result of run_first_exits."""

    plan: ReplicaPlan
    exited_low: np.ndarray
    exit_times: np.ndarray
    exit_xs: np.ndarray
    capped: np.ndarray
    clamp_hits: np.ndarray


@dataclass
class RuinBatch:
    """One pass per replica until the walk drops below `a` (or cap steps):
    enough to reconstruct every first_exit(a, n=L) verdict for all levels L
    at once, because exiting low before L just means max_x stayed <= L."""

    plan: ReplicaPlan
    reached_low: np.ndarray  # bool: dropped below a within cap steps
    steps: np.ndarray        # steps consumed (== cap when not reached_low)
    max_xs: np.ndarray       # running max of x up to the stop


def _codes(kernel: Kernel) -> tuple[int, int, float]:
    """(lazy flag, drift mode, const drift) for the jitted loops."""
    lazy = 1 if kernel.variant == "LazyLattice" else 0
    if kernel.variant == "ConstDriftTest":
        return lazy, 3, kernel.const_drift_c / kernel.const_drift_n
    s = kernel.spec
    if s.rho == 0.0:
        return lazy, 4, 0.0
    if s.alpha == 1.0 and s.beta == 1.0:
        return lazy, 0, 0.0
    if s.alpha == 0.0:
        return lazy, 1, 0.0
    return lazy, 2, 0.0


@njit(cache=True, nogil=True, inline="always")
def _drift_at(mode, rho, alpha, beta, cdrift, x, t):
    if mode == 0:
        return rho * x / t
    if mode == 1:
        return rho / t ** beta
    if mode == 2:
        return rho * x ** alpha / t ** beta
    if mode == 3:
        return cdrift
    return 0.0


@njit(cache=True, nogil=True)
def _walk_batch(lazy, mode, rho, alpha, beta, a, hold, cap_d, cdrift,
                x0, t0, horizon, key0, stream_offset, grid, a2,
                r_lo, r_hi, samples, finals, sup2, minxs, clamps, negd,
                cross_ts):
    ngrid = grid.shape[0]
    for r in range(r_lo, r_hi):
        k0 = key0
        k1 = stream_offset + np.uint64(r)
        blk = np.uint64(0)
        w0 = np.uint64(0); w1 = np.uint64(0); w2 = np.uint64(0); w3 = np.uint64(0)
        wpos = 4
        x = x0
        best2 = x * x / t0
        minx = x
        nclamp = 0
        nneg = 0
        cross = np.int64(-1)
        if x * x > a2 * t0:
            cross = np.int64(t0)
        g = 0
        while g < ngrid and grid[g] <= t0:
            samples[r, g] = x
            g += 1
        for s in range(horizon):
            if wpos == 4:
                w0, w1, w2, w3 = philox4_nb(blk, np.uint64(0), np.uint64(0),
                                            np.uint64(0), k0, k1)
                blk += _U64_1
                wpos = 0
            if wpos == 0:
                word = w0
            elif wpos == 1:
                word = w1
            elif wpos == 2:
                word = w2
            else:
                word = w3
            wpos += 1
            u = np.float64(word >> _U64_11) * U53
            t = np.float64(t0 + s)
            if x < a:
                x += 1.0
            else:
                d = _drift_at(mode, rho, alpha, beta, cdrift, x, t)
                if d < 0.0:
                    nneg += 1
                if d > cap_d:
                    d = cap_d
                    nclamp += 1
                if lazy == 1:
                    pu = (1.0 - hold) * 0.5 + 0.5 * d
                    if u < pu:
                        x += 1.0
                    elif u >= pu + hold:
                        x -= 1.0
                else:
                    if u < 0.5 + 0.5 * d:
                        x += 1.0
                    else:
                        x -= 1.0
            tn = t + 1.0
            r2 = x * x / tn
            if r2 > best2:
                best2 = r2
            if x < minx:
                minx = x
            if cross < 0 and x * x > a2 * tn:
                cross = np.int64(tn)
            if g < ngrid and grid[g] == np.int64(tn):
                samples[r, g] = x
                g += 1
        finals[r] = x
        sup2[r] = best2
        minxs[r] = minx
        clamps[r] = nclamp
        negd[r] = nneg
        cross_ts[r] = cross


@njit(cache=True, nogil=True)
def _exit_batch(lazy, mode, rho, alpha, beta, refl_a, hold, cap_d, cdrift,
                x0, t0, a, n, cap, key0, stream_offset, r_lo, r_hi,
                exited_low, exit_ts, exit_xs, capped, clamps):
    for r in range(r_lo, r_hi):
        k0 = key0
        k1 = stream_offset + np.uint64(r)
        blk = np.uint64(0)
        w0 = np.uint64(0); w1 = np.uint64(0); w2 = np.uint64(0); w3 = np.uint64(0)
        wpos = 4
        x = x0
        nclamp = 0
        low = False
        done = False
        t_end = np.int64(t0 + cap)
        for s in range(cap):
            if wpos == 4:
                w0, w1, w2, w3 = philox4_nb(blk, np.uint64(0), np.uint64(0),
                                            np.uint64(0), k0, k1)
                blk += _U64_1
                wpos = 0
            if wpos == 0:
                word = w0
            elif wpos == 1:
                word = w1
            elif wpos == 2:
                word = w2
            else:
                word = w3
            wpos += 1
            u = np.float64(word >> _U64_11) * U53
            t = np.float64(t0 + s)
            if x < refl_a:
                x += 1.0
            else:
                d = _drift_at(mode, rho, alpha, beta, cdrift, x, t)
                if d > cap_d:
                    d = cap_d
                    nclamp += 1
                if lazy == 1:
                    pu = (1.0 - hold) * 0.5 + 0.5 * d
                    if u < pu:
                        x += 1.0
                    elif u >= pu + hold:
                        x -= 1.0
                else:
                    if u < 0.5 + 0.5 * d:
                        x += 1.0
                    else:
                        x -= 1.0
            if x < a or x > n:
                low = x < a
                done = True
                t_end = np.int64(t0 + s + 1)
                break
        exited_low[r] = low
        exit_ts[r] = t_end
        exit_xs[r] = x
        capped[r] = not done
        clamps[r] = nclamp


@njit(cache=True, nogil=True)
def _ruin_batch(lazy, mode, rho, alpha, beta, refl_a, hold, cap_d, cdrift,
                x0, t0, a, cap, key0, stream_offset, r_lo, r_hi,
                reached, steps, maxxs):
    for r in range(r_lo, r_hi):
        k0 = key0
        k1 = stream_offset + np.uint64(r)
        blk = np.uint64(0)
        w0 = np.uint64(0); w1 = np.uint64(0); w2 = np.uint64(0); w3 = np.uint64(0)
        wpos = 4
        x = x0
        mx = x
        hit = False
        used = np.int64(cap)
        for s in range(cap):
            if wpos == 4:
                w0, w1, w2, w3 = philox4_nb(blk, np.uint64(0), np.uint64(0),
                                            np.uint64(0), k0, k1)
                blk += _U64_1
                wpos = 0
            if wpos == 0:
                word = w0
            elif wpos == 1:
                word = w1
            elif wpos == 2:
                word = w2
            else:
                word = w3
            wpos += 1
            u = np.float64(word >> _U64_11) * U53
            t = np.float64(t0 + s)
            if x < refl_a:
                x += 1.0
            else:
                d = _drift_at(mode, rho, alpha, beta, cdrift, x, t)
                if d > cap_d:
                    d = cap_d
                if lazy == 1:
                    pu = (1.0 - hold) * 0.5 + 0.5 * d
                    if u < pu:
                        x += 1.0
                    elif u >= pu + hold:
                        x -= 1.0
                else:
                    if u < 0.5 + 0.5 * d:
                        x += 1.0
                    else:
                        x -= 1.0
            if x > mx:
                mx = x
            if x < a:
                hit = True
                used = np.int64(s + 1)
                break
        reached[r] = hit
        steps[r] = used
        maxxs[r] = mx


def geometric_grid(t0: int, horizon: int, ratio: float = 1.05) -> np.ndarray:
    """Strictly increasing absolute sample times: t0, ceil(t0*ratio^k), ...,
    t0 + horizon."""
    if ratio <= 1.0:
        raise ValueError("ratio must exceed 1")
    ts = [t0]
    v = float(t0)
    end = t0 + horizon
    while True:
        v *= ratio
        t = math.ceil(v)
        if t >= end:
            break
        if t > ts[-1]:
            ts.append(t)
    ts.append(end)
    return np.array(ts, dtype=np.int64)


def _chunks(replicas: int, threads: int):
    threads = max(1, min(threads, replicas))
    size = (replicas + threads - 1) // threads
    return [(lo, min(lo + size, replicas)) for lo in range(0, replicas, size)]


def _run_chunked(fn, args_before, args_after, replicas, threads):
    spans = _chunks(replicas, threads)
    if len(spans) == 1:
        fn(*args_before, spans[0][0], spans[0][1], *args_after)
        return
    with ThreadPoolExecutor(max_workers=len(spans)) as ex:
        futs = [ex.submit(fn, *args_before, lo, hi, *args_after)
                for lo, hi in spans]
        for f in futs:
            f.result()


def _common_args(kernel: Kernel):
    lazy, mode, cdrift = _codes(kernel)
    s = kernel.spec
    return (lazy, mode, s.rho, s.alpha, s.beta, kernel.a, kernel.hold,
            kernel.drift_cap, cdrift)


def _check_start(kernel: Kernel, x0: float, t0: int, horizon: int):
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if x0 < 0:
        raise ValueError("x0 must be nonnegative")
    if t0 < kernel.t0:
        raise ValueError(f"t0 = {t0} below the kernel's first time index")
    if t0 + horizon >= 2 ** 63:
        raise ValueError("time index would overflow int64")


def run_trajectories(kernel: Kernel, x0: float, t0: int, horizon: int,
                     plan: ReplicaPlan, *, cross_level: float = 0.0,
                     sample_grid: np.ndarray | None = None,
                     stream_offset: int = 0, threads: int = 1) -> TrajectoryBatch:
    """Simulate plan.replicas independent paths; cross_level is the A of the
    first-crossing diagnostic x > A*sqrt(t) (A=0 crosses at the first x > 0)."""
    _check_start(kernel, x0, t0, horizon)
    grid = geometric_grid(t0, horizon) if sample_grid is None \
        else np.asarray(sample_grid, dtype=np.int64)
    R = plan.replicas
    samples = np.full((R, grid.shape[0]), np.nan)
    finals = np.empty(R)
    sup2 = np.empty(R)
    minxs = np.empty(R)
    clamps = np.zeros(R, dtype=np.int64)
    negd = np.zeros(R, dtype=np.int64)
    cross = np.full(R, -1, dtype=np.int64)
    args_b = _common_args(kernel) + (
        float(x0), np.int64(t0), np.int64(horizon),
        np.uint64(plan.master_seed & 0xFFFFFFFFFFFFFFFF),
        np.uint64(stream_offset), grid, float(cross_level) ** 2)
    _run_chunked(_walk_batch, args_b,
                 (samples, finals, sup2, minxs, clamps, negd, cross),
                 R, threads)
    return TrajectoryBatch(plan=plan, t0=t0, horizon=horizon, sample_ts=grid,
                           samples=samples, finals=finals,
                           sup_ratios=np.sqrt(sup2), min_xs=minxs,
                           clamp_hits=clamps, neg_drift_hits=negd,
                           cross_ts=cross)


def simulate(kernel: Kernel, x0: float, t0: int, horizon: int,
             seed: int) -> Trajectory:
    """Single path: replica 0 of master seed `seed`."""
    batch = run_trajectories(kernel, x0, t0, horizon, ReplicaPlan(seed, 1))
    pairs = tuple((int(t), float(x))
                  for t, x in zip(batch.sample_ts, batch.samples[0]))
    return Trajectory(seed=seed, x0=x0, t0=t0, horizon=horizon, samples=pairs,
                      final=(t0 + horizon, float(batch.finals[0])),
                      sup_ratio=float(batch.sup_ratios[0]),
                      min_x=float(batch.min_xs[0]),
                      clamp_hits=int(batch.clamp_hits[0]))


def run_first_exits(kernel: Kernel, x0: float, t0: int, a: float, n: float,
                    cap: int, plan: ReplicaPlan, *, stream_offset: int = 0,
                    threads: int = 1) -> ExitBatch:
    """First exit from (a, n) for every replica, capped at `cap` steps."""
    if not a < x0 < n:
        raise ValueError(f"need a < x0 < n, got a={a}, x0={x0}, n={n}")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    _check_start(kernel, x0, t0, cap)
    R = plan.replicas
    exited_low = np.zeros(R, dtype=np.bool_)
    exit_ts = np.empty(R, dtype=np.int64)
    exit_xs = np.empty(R)
    capped = np.zeros(R, dtype=np.bool_)
    clamps = np.zeros(R, dtype=np.int64)
    args_b = _common_args(kernel) + (
        float(x0), np.int64(t0), float(a), float(n), np.int64(cap),
        np.uint64(plan.master_seed & 0xFFFFFFFFFFFFFFFF),
        np.uint64(stream_offset))
    _run_chunked(_exit_batch, args_b,
                 (exited_low, exit_ts, exit_xs, capped, clamps), R, threads)
    return ExitBatch(plan=plan, exited_low=exited_low, exit_times=exit_ts,
                     exit_xs=exit_xs, capped=capped, clamp_hits=clamps)


def first_exit(kernel: Kernel, x0: float, t0: int, a: float, n: float,
               cap: int, seed: int) -> ExitOutcome:
    """Single first-exit run: replica 0 of master seed `seed`."""
    b = run_first_exits(kernel, x0, t0, a, n, cap, ReplicaPlan(seed, 1))
    return ExitOutcome(exited_low=bool(b.exited_low[0]),
                       exit_time=int(b.exit_times[0]),
                       exit_x=float(b.exit_xs[0]), capped=bool(b.capped[0]))


def run_ruin_scan(kernel: Kernel, x0: float, t0: int, a: float, cap: int,
                  plan: ReplicaPlan, *, stream_offset: int = 0,
                  threads: int = 1) -> RuinBatch:
    """Walk each replica until x < a (or cap steps), recording the running
    max; one scan serves first_exit verdicts for every upper level at once."""
    if not a < x0:
        raise ValueError("need a < x0")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    _check_start(kernel, x0, t0, cap)
    R = plan.replicas
    reached = np.zeros(R, dtype=np.bool_)
    steps = np.empty(R, dtype=np.int64)
    maxxs = np.empty(R)
    args_b = _common_args(kernel) + (
        float(x0), np.int64(t0), float(a), np.int64(cap),
        np.uint64(plan.master_seed & 0xFFFFFFFFFFFFFFFF),
        np.uint64(stream_offset))
    _run_chunked(_ruin_batch, args_b, (reached, steps, maxxs), R, threads)
    return RuinBatch(plan=plan, reached_low=reached, steps=steps, max_xs=maxxs)
