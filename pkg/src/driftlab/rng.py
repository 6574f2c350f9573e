"""Counter-based random numbers: Philox4x64-10 keyed per replica.

Every stochastic component draws from one fixed layout:

    word(seed, stream, s) = output word s % 4 of the Philox4x64-10 block
                            with counter (s // 4, 0, 0, 0) and key (seed, stream)
    uniform = (word >> 11) * 2**-53          # in [0, 1)

so the s-th uniform of a replica depends only on (seed, stream, s). Replicas
can therefore run in any order, on any number of workers, in lockstep batches
or one at a time, and reproduce bit-identical paths. Splitting a master seed
is the identity map stream = replica index; distinct indices give distinct
keys, hence independent Philox streams.

The block function is implemented three ways - plain Python (reference),
vectorized numpy (scans, tests), and a numba-inlined scalar (step loops) -
and is validated against numpy.random.Philox, which vendors the Random123
reference implementation. numpy's generator bumps its 256-bit counter before
producing each block, so its first block equals ours at counter + 1; the
tests account for that offset.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Philox4x64 round multipliers and Weyl key increments (Random123).
PHILOX_M0 = 0xD2E7470EE14C6C93
PHILOX_M1 = 0xCA5A826395121157
PHILOX_W0 = 0x9E3779B97F4A7C15
PHILOX_W1 = 0xBB67AE8584CAA73B

_MASK64 = (1 << 64) - 1
# 2**-53, so uniforms take the 53 high bits of a word: u in [0, 1).
U53 = 1.0 / 9007199254740992.0


def philox4_block(c0: int, c1: int, c2: int, c3: int, k0: int, k1: int):
    """One Philox4x64-10 block over Python ints. Reference implementation."""
    c0, c1, c2, c3 = c0 & _MASK64, c1 & _MASK64, c2 & _MASK64, c3 & _MASK64
    k0, k1 = k0 & _MASK64, k1 & _MASK64
    for _ in range(10):
        p0 = PHILOX_M0 * c0
        p1 = PHILOX_M1 * c2
        c0, c1, c2, c3 = ((p1 >> 64) ^ c1 ^ k0, p1 & _MASK64,
                          (p0 >> 64) ^ c3 ^ k1, p0 & _MASK64)
        k0 = (k0 + PHILOX_W0) & _MASK64
        k1 = (k1 + PHILOX_W1) & _MASK64
    return c0, c1, c2, c3


def philox4_blocks(c0, k0, k1):
    """Philox4x64-10 blocks, vectorized over broadcast uint64 inputs.

    Counter words 1..3 are zero (the stream layout never touches them).
    Returns the four output words as uint64 arrays of the broadcast shape.
    """
    c0, k0, k1 = np.broadcast_arrays(np.asarray(c0, dtype=np.uint64),
                                     np.asarray(k0, dtype=np.uint64),
                                     np.asarray(k1, dtype=np.uint64))
    c0 = c0.copy()
    c1 = np.zeros_like(c0)
    c2 = np.zeros_like(c0)
    c3 = np.zeros_like(c0)
    k0 = k0.copy()
    k1 = k1.copy()
    mask = np.uint64(0xFFFFFFFF)
    s32 = np.uint64(32)
    for _ in range(10):
        hilo = []
        for m, c in ((PHILOX_M0, c0), (PHILOX_M1, c2)):
            xlo = np.uint64(m & 0xFFFFFFFF)
            xhi = np.uint64(m >> 32)
            ylo = c & mask
            yhi = c >> s32
            t0 = xlo * ylo
            t1 = xhi * ylo
            t2 = xlo * yhi
            carry = ((t0 >> s32) + (t1 & mask) + (t2 & mask)) >> s32
            hi = xhi * yhi + (t1 >> s32) + (t2 >> s32) + carry
            hilo.append((hi, np.uint64(m) * c))  # low word wraps mod 2**64
        (hi0, lo0), (hi1, lo1) = hilo
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = k0 + np.uint64(PHILOX_W0)
        k1 = k1 + np.uint64(PHILOX_W1)
    return c0, c1, c2, c3


@njit(cache=True, nogil=True, inline="always")
def philox4_nb(c0, c1, c2, c3, k0, k1):
    """Philox4x64-10 block on scalar uint64, for use inside numba kernels."""
    mask = np.uint64(0xFFFFFFFF)
    s32 = np.uint64(32)
    m0 = np.uint64(PHILOX_M0)
    m1 = np.uint64(PHILOX_M1)
    for _ in range(10):
        ylo = c0 & mask
        yhi = c0 >> s32
        xlo = m0 & mask
        xhi = m0 >> s32
        t0 = xlo * ylo
        t1 = xhi * ylo
        t2 = xlo * yhi
        carry = ((t0 >> s32) + (t1 & mask) + (t2 & mask)) >> s32
        hi0 = xhi * yhi + (t1 >> s32) + (t2 >> s32) + carry
        lo0 = m0 * c0
        ylo = c2 & mask
        yhi = c2 >> s32
        xlo = m1 & mask
        xhi = m1 >> s32
        t0 = xlo * ylo
        t1 = xhi * ylo
        t2 = xlo * yhi
        carry = ((t0 >> s32) + (t1 & mask) + (t2 & mask)) >> s32
        hi1 = xhi * yhi + (t1 >> s32) + (t2 >> s32) + carry
        lo1 = m1 * c2
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = k0 + np.uint64(PHILOX_W0)
        k1 = k1 + np.uint64(PHILOX_W1)
    return c0, c1, c2, c3


def split(master_seed: int, stream: int) -> tuple[int, int]:
    """Per-replica Philox key. Injective in the stream index by construction."""
    return master_seed & _MASK64, stream & _MASK64


def uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniform words start .. start+count-1 of the (seed, stream) sequence.

    Vectorized convenience for tests and non-hot paths; the step loops in
    engine/urn consume the very same layout block by block.
    """
    if count < 0 or start < 0:
        raise ValueError("start and count must be nonnegative")
    if count == 0:
        return np.empty(0, dtype=np.float64)
    k0, k1 = split(seed, stream)
    first_block = start >> 2
    last_block = (start + count - 1) >> 2
    blocks = np.arange(first_block, last_block + 1, dtype=np.uint64)
    words = np.stack(philox4_blocks(blocks, np.uint64(k0), np.uint64(k1)), axis=1)
    flat = words.reshape(-1)[start - 4 * first_block:][:count]
    return (flat >> np.uint64(11)) * U53
