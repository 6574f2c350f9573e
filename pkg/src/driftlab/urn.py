"""Two-color urn with a fixed total addition per draw, coupled to the walk.

Each draw picks white with probability W/(W+B), then adds A balls of the
drawn color and sigma - A of the other, A sampled fresh from a finite law on
[0, sigma].  With alpha_bar = E A and beta_bar = sigma - alpha_bar, the
normalized difference (W - B)/(alpha_bar - beta_bar) has conditional drift
exactly rho * x / t for rho = (alpha_bar - beta_bar)/sigma and t =
(W + B)/sigma, i.e. the urn realizes the alpha = beta = 1 walk family.

Note the normalization divides by alpha_bar - beta_bar (positive under the
standing assumption alpha_bar > beta_bar), keeping the coupled walk
nonnegative; dividing by its negation only flips the sign convention.

Frozen stream layout (same generator and keying as the engine): replica r of
a census keyed (master_seed, stream_offset + r) consumes one uniform per
draw for the color -- white iff u * (W + B) < W -- plus, for non-degenerate
laws only, a second uniform for A by inverse CDF.  run_urn uses the same
layout with key (seed, 0).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .rng import U53, philox4_nb, uniforms

_U64_1 = np.uint64(1)
_U64_11 = np.uint64(11)


@dataclass(frozen=True)
class UrnSpec:
    """Replacement rule: sigma balls added per draw, A of the drawn color.

    a_law is a finite discrete law as ((value, prob), ...) with support in
    [0, sigma].  The coupling to the walk needs alpha_bar > beta_bar > 0,
    and the urn clock (W0+B0)/sigma must start at a positive integer.
    """

    sigma: float
    a_law: tuple
    w0: float
    b0: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError("sigma must be a positive real")
        if not self.a_law:
            raise ValueError("a_law must be a nonempty discrete law")
        total = math.fsum(p for _, p in self.a_law)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"a_law probabilities sum to {total}, not 1")
        for v, p in self.a_law:
            if not (math.isfinite(v) and 0.0 <= v <= self.sigma):
                raise ValueError(f"a_law value {v} outside [0, sigma]")
            if not (math.isfinite(p) and p > 0.0):
                raise ValueError("a_law probabilities must be positive")
        if not (self.w0 > 0 and self.b0 > 0):
            raise ValueError("W0 and B0 must be positive")
        if not self.alpha_bar > self.beta_bar > 0:
            raise ValueError(
                "need alpha_bar > beta_bar > 0 for the walk coupling; got "
                f"alpha_bar={self.alpha_bar}, beta_bar={self.beta_bar}")
        start = (self.w0 + self.b0) / self.sigma
        if abs(start - round(start)) > 1e-9 or round(start) < 1:
            raise ValueError("(W0+B0)/sigma must be a positive integer")

    @property
    def alpha_bar(self) -> float:
        return math.fsum(v * p for v, p in self.a_law)

    @property
    def beta_bar(self) -> float:
        return self.sigma - self.alpha_bar

    @property
    def t_start(self) -> int:
        return round((self.w0 + self.b0) / self.sigma)

    @property
    def deterministic(self) -> bool:
        return len(self.a_law) == 1


def deterministic_urn(sigma: float, a: float, w0: float, b0: float) -> UrnSpec:
    """Urn with the degenerate law A == a."""
    return UrnSpec(sigma, ((a, 1.0),), w0, b0)


def urn_rho(spec: UrnSpec) -> float:
    """Drift coefficient of the coupled walk: (alpha_bar - beta_bar)/sigma."""
    return (spec.alpha_bar - spec.beta_bar) / spec.sigma


@dataclass(frozen=True)
class UrnState:
    """Composition after some number of draws, at urn clock t = (W+B)/sigma."""

    w: float
    b: float
    t: int

    def __post_init__(self):
        if not (self.w > 0 and self.b > 0):
            raise ValueError("urn composition must stay positive")
        if self.t < 1:
            raise ValueError("urn clock starts at a positive integer")


class UrnTrajectory:
    """Sequence of UrnState, stored as composition arrays."""

    def __init__(self, spec: UrnSpec, ws: np.ndarray, bs: np.ndarray):
        if ws.shape != bs.shape or ws.ndim != 1 or ws.size < 1:
            raise ValueError("ws and bs must be equal-length 1-d arrays")
        self.spec = spec
        self.ws = ws
        self.bs = bs

    def __len__(self) -> int:
        return self.ws.size

    def __getitem__(self, i: int) -> UrnState:
        n = self.ws.size
        if not -n <= i < n:
            raise IndexError(i)
        i %= n
        return UrnState(float(self.ws[i]), float(self.bs[i]),
                        self.spec.t_start + i)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


def run_urn(spec: UrnSpec, draws: int, seed: int) -> UrnTrajectory:
    """Simulate `draws` draws; index i of the result is the state after i."""
    if draws < 1:
        raise ValueError("draws must be >= 1")
    words = draws if spec.deterministic else 2 * draws
    us = uniforms(seed, 0, 0, words)
    vals = [v for v, _ in spec.a_law]
    cums = np.cumsum([p for _, p in spec.a_law])
    ws = np.empty(draws + 1, dtype=np.float64)
    bs = np.empty(draws + 1, dtype=np.float64)
    w, b = float(spec.w0), float(spec.b0)
    ws[0], bs[0] = w, b
    for i in range(draws):
        if spec.deterministic:
            u, aval = us[i], vals[0]
        else:
            u = us[2 * i]
            j = int(np.searchsorted(cums, us[2 * i + 1], side="right"))
            aval = vals[min(j, len(vals) - 1)]
        if u * (w + b) < w:
            w += aval
            b += spec.sigma - aval
        else:
            b += aval
            w += spec.sigma - aval
        ws[i + 1], bs[i + 1] = w, b
    return UrnTrajectory(spec, ws, bs)


@dataclass(frozen=True)
class CouplingRecord:
    """State-by-state verification of the urn-to-walk coupling.

    x is the final coupled value; drift_identity_residual the worst analytic
    gap between the signed difference walk's conditional drift and rho*x/t
    over every visited state; step_magnitudes the distinct |step| sizes seen.
    """

    x: float
    drift_identity_residual: float
    step_magnitudes: tuple


def coupled_walk(traj: UrnTrajectory) -> tuple:
    """Walk values |W-B|/(alpha_bar-beta_bar) plus the coupling record."""
    spec = traj.spec
    denom = spec.alpha_bar - spec.beta_bar
    if denom <= 0:
        raise ValueError("coupling requires alpha_bar > beta_bar")
    z = (traj.ws - traj.bs) / denom
    xs = np.abs(z)
    ts = spec.t_start + np.arange(len(traj), dtype=np.float64)
    # conditional drift of z from each state: (2 W/(W+B) - 1); the coupling
    # identity says this equals rho * z / t exactly
    drift = 2.0 * traj.ws[:-1] / (traj.ws[:-1] + traj.bs[:-1]) - 1.0
    target = urn_rho(spec) * z[:-1] / ts[:-1]
    residual = float(np.max(np.abs(drift - target))) if len(traj) > 1 else 0.0
    mags = tuple(sorted(set(np.abs(np.diff(z)).tolist())))
    return xs, CouplingRecord(float(xs[-1]), residual, mags)


@njit(cache=True, nogil=True)
def _census_batch(w0, b0, sigma, vals, cums, det, horizon, cks, key0,
                  stream_offset, r_lo, r_hi, counts_at, lasts_at):
    ncks = cks.shape[0]
    d0 = w0 - b0
    for r in range(r_lo, r_hi):
        k0 = key0
        k1 = stream_offset + np.uint64(r)
        blk = np.uint64(0)
        y0 = np.uint64(0); y1 = np.uint64(0); y2 = np.uint64(0); y3 = np.uint64(0)
        wpos = 4
        w = w0
        b = b0
        count = np.int64(0)
        last = np.int64(0)
        ci = 0
        for s in range(horizon):
            if wpos == 4:
                y0, y1, y2, y3 = philox4_nb(blk, np.uint64(0), np.uint64(0),
                                            np.uint64(0), k0, k1)
                blk += _U64_1
                wpos = 0
            if wpos == 0:
                word = y0
            elif wpos == 1:
                word = y1
            elif wpos == 2:
                word = y2
            else:
                word = y3
            wpos += 1
            u = np.float64(word >> _U64_11) * U53
            if det == 1:
                aval = vals[0]
            else:
                if wpos == 4:
                    y0, y1, y2, y3 = philox4_nb(blk, np.uint64(0),
                                                np.uint64(0), np.uint64(0),
                                                k0, k1)
                    blk += _U64_1
                    wpos = 0
                if wpos == 0:
                    word = y0
                elif wpos == 1:
                    word = y1
                elif wpos == 2:
                    word = y2
                else:
                    word = y3
                wpos += 1
                u2 = np.float64(word >> _U64_11) * U53
                j = 0
                while u2 >= cums[j]:
                    j += 1
                aval = vals[j]
            if u * (w + b) < w:
                w += aval
                b += sigma - aval
            else:
                b += aval
                w += sigma - aval
            if w - b == d0:
                count += 1
                last = np.int64(s + 1)
            if ci < ncks and np.int64(s + 1) == cks[ci]:
                counts_at[r, ci] = count
                lasts_at[r, ci] = last
                ci += 1


@dataclass
class ZeroReturnCensus:
    """Per-replica returns of W - B to its initial value, per checkpoint.

    counts_at[r, i] is the number of draws n in [1, checkpoints[i]] with
    W_n - B_n = W0 - B0 for replica r; lasts_at[r, i] the largest such n
    (0 when there is none).  The final checkpoint is always the horizon.
    """

    spec: UrnSpec
    horizon: int
    checkpoints: tuple
    counts_at: np.ndarray
    lasts_at: np.ndarray

    @property
    def return_count(self) -> np.ndarray:
        return self.counts_at[:, -1]

    @property
    def last_return_time(self) -> np.ndarray:
        return self.lasts_at[:, -1]

    def late_return_fractions(self) -> list:
        """Per checkpoint T: fraction of replicas returning after T/10."""
        return [float((self.lasts_at[:, i] > ck // 10).mean())
                for i, ck in enumerate(self.checkpoints)]


def zero_return_census(spec: UrnSpec, horizon: int, replicas: int,
                       master_seed: int, *, checkpoints=None,
                       stream_offset: int = 0,
                       threads: int = 1) -> ZeroReturnCensus:
    """Count exact returns of W - B to W0 - B0 over `replicas` urns.

    Exact testability restricts the parameters to an integer lattice: sigma,
    every support value of a_law, W0 and B0 must all be integers, so W - B
    moves on Z and the return event is an exact comparison.
    """
    for name, v in (("sigma", spec.sigma), ("W0", spec.w0), ("B0", spec.b0)):
        if v != int(v):
            raise ValueError(f"census needs integer urn parameters; {name}={v}")
    if any(v != int(v) for v, _ in spec.a_law):
        raise ValueError("census needs integer a_law support values")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    if checkpoints is None:
        cks = [horizon]
    else:
        cks = [int(c) for c in checkpoints]
        if any(b <= a for a, b in zip(cks, cks[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if cks and (cks[0] < 1 or cks[-1] > horizon):
            raise ValueError("checkpoints must lie in [1, horizon]")
        if not cks or cks[-1] != horizon:
            cks.append(horizon)
    counts = np.zeros((replicas, len(cks)), dtype=np.int64)
    lasts = np.zeros((replicas, len(cks)), dtype=np.int64)
    if horizon == 0:
        return ZeroReturnCensus(spec, 0, tuple(cks), counts, lasts)
    vals = np.array([v for v, _ in spec.a_law], dtype=np.float64)
    cums = np.cumsum([p for _, p in spec.a_law])
    cums[-1] = np.inf  # guard the inverse-CDF scan against u2 ~ 1 rounding
    args = (float(spec.w0), float(spec.b0), float(spec.sigma), vals, cums,
            1 if spec.deterministic else 0, horizon,
            np.array(cks, dtype=np.int64), np.uint64(master_seed),
            np.uint64(stream_offset))
    if threads <= 1 or replicas == 1:
        _census_batch(*args, 0, replicas, counts, lasts)
    else:
        spans = []
        base, extra = divmod(replicas, threads)
        lo = 0
        for i in range(threads):
            hi = lo + base + (1 if i < extra else 0)
            if hi > lo:
                spans.append((lo, hi))
            lo = hi
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            futs = [pool.submit(_census_batch, *args, lo, hi, counts, lasts)
                    for lo, hi in spans]
            for f in futs:
                f.result()
    return ZeroReturnCensus(spec, horizon, tuple(cks), counts, lasts)
