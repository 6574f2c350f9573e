"""Counter-based RNG: known-answer vectors, cross-checks, stream layout."""

import numpy as np
import pytest
from numpy.random import Philox

from driftlab.rng import (U53, philox4_block, philox4_blocks, philox4_nb,
                          split, uniforms)

# Frozen vectors, generated once from numpy.random.Philox (Random123 reference
# implementation). numpy bumps its 256-bit counter before producing a block,
# so its buffer after one fill at counter = [c, 0, 0, 0] is our block c+1.
KAT = [
    ((0x0000000000000000, 0x0000000000000000), 1,
     (0x02F4BA6408E4D89B, 0x3DD62B0B9CA8C5B2, 0x1C8667A55D902E79, 0x907D7A052FD5B4DC)),
    ((0x00000000DEADBEEF, 0x0000000000000000), 1,
     (0xA4E930DC738ACAF1, 0xB1C7ECC6484E9CF0, 0x6B88A411909298AA, 0x66F3C896201F7262)),
    ((0x243F6A8885A308D3, 0x13198A2E03707344), 1,
     (0xD96148ED4EEF3177, 0x3756C9977974E2E4, 0xACA97084472822A9, 0xF84393111BC816FC)),
    ((0xFFFFFFFFFFFFFFFF, 0xFFFFFFFFFFFFFFFF), 42,
     (0x03218C7B90D068EE, 0xEF74AC6E73BA9779, 0x70C6F34B7CC06000, 0x1FCBF6CEEA93AA5C)),
]


@pytest.mark.parametrize("key,c0,want", KAT)
def test_known_answer_scalar(key, c0, want):
    assert philox4_block(c0, 0, 0, 0, key[0], key[1]) == want


@pytest.mark.parametrize("key,c0,want", KAT)
def test_known_answer_vectorized(key, c0, want):
    w0, w1, w2, w3 = philox4_blocks(np.array([c0], dtype=np.uint64), key[0], key[1])
    assert (int(w0[0]), int(w1[0]), int(w2[0]), int(w3[0])) == want


@pytest.mark.parametrize("key,c0,want", KAT)
def test_known_answer_numba(key, c0, want):
    got = philox4_nb(np.uint64(c0), np.uint64(0), np.uint64(0), np.uint64(0),
                     np.uint64(key[0]), np.uint64(key[1]))
    assert tuple(int(w) for w in got) == want


def test_cross_check_against_numpy():
    # random keys/counters; numpy state counter c yields our block c+1
    rs = np.random.default_rng(20260816)
    for _ in range(25):
        k0, k1, c0 = (int(v) for v in rs.integers(0, 2**64, 3, dtype=np.uint64))
        ph = Philox(key=np.array([k0, k1], dtype=np.uint64))
        st = ph.state
        st["state"]["counter"] = np.array([c0, 0, 0, 0], dtype=np.uint64)
        ph.state = st
        want = tuple(int(w) for w in ph.random_raw(4))
        c_next = (c0 + 1) & 0xFFFFFFFFFFFFFFFF
        carry = 1 if c_next == 0 else 0
        assert philox4_block(c_next, carry, 0, 0, k0, k1) == want


def test_counter_carry_across_limbs():
    # wrap of limb 0 increments limb 1 (numpy pre-increment reaches (0,8,0,0))
    ph = Philox(key=np.array([5, 6], dtype=np.uint64))
    st = ph.state
    st["state"]["counter"] = np.array([2**64 - 1, 7, 0, 0], dtype=np.uint64)
    ph.state = st
    want = tuple(int(w) for w in ph.random_raw(4))
    assert philox4_block(0, 8, 0, 0, 5, 6) == want


def test_three_implementations_agree():
    rs = np.random.default_rng(7)
    for _ in range(50):
        c0, k0, k1 = (int(v) for v in rs.integers(0, 2**64, 3, dtype=np.uint64))
        ref = philox4_block(c0, 0, 0, 0, k0, k1)
        vec = philox4_blocks(np.array([c0], dtype=np.uint64), k0, k1)
        assert tuple(int(w[0]) for w in vec) == ref
        nb = philox4_nb(np.uint64(c0), np.uint64(0), np.uint64(0), np.uint64(0),
                        np.uint64(k0), np.uint64(k1))
        assert tuple(int(w) for w in nb) == ref


def test_uniforms_word_layout():
    # word s of a stream is word s%4 of block s//4
    seed, stream = split(0x1234ABCD, 17)
    u = uniforms(seed, stream, 0, 13)
    for s in [0, 1, 2, 3, 4, 7, 8, 12]:
        block = philox4_block(s // 4, 0, 0, 0, seed, stream)
        assert u[s] == (block[s % 4] >> 11) * U53


def test_uniforms_prefix_property():
    seed, stream = split(99, 3)
    whole = uniforms(seed, stream, 0, 40)
    assert np.array_equal(whole[10:25], uniforms(seed, stream, 10, 15))
    assert np.array_equal(whole[:1], uniforms(seed, stream, 0, 1))
    assert uniforms(seed, stream, 5, 0).size == 0


def test_uniforms_range_and_distribution():
    seed, stream = split(2**63 + 11, 0)
    u = uniforms(seed, stream, 0, 200_000)
    assert u.min() >= 0.0 and u.max() < 1.0
    # crude sanity: mean of U(0,1) within 5 sigma
    assert abs(u.mean() - 0.5) < 5 * (1 / 12) ** 0.5 / 200_000 ** 0.5


def test_streams_differ():
    seed, s0 = split(42, 0)
    _, s1 = split(42, 1)
    a = uniforms(seed, s0, 0, 64)
    b = uniforms(seed, s1, 0, 64)
    assert not np.array_equal(a, b)


def test_uniforms_rejects_negative():
    with pytest.raises(ValueError):
        uniforms(1, 1, -1, 4)
    with pytest.raises(ValueError):
        uniforms(1, 1, 0, -4)
