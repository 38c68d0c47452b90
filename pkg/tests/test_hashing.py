import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussmaurer.errors import ParameterError
from gaussmaurer.hashing import seed_length, toeplitz_hash, toeplitz_matrix


def all_vectors(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)


def test_matrix_layout():
    seed = np.array([1, 0, 0, 1, 1], dtype=np.uint8)
    t = toeplitz_matrix(seed, 3, 3)
    for i in range(3):
        for j in range(3):
            assert t[i, j] == seed[i - j + 2]
    # constant along diagonals
    assert np.all(t[1:, 1:] == t[:-1, :-1])


def test_zero_input_hashes_to_zero():
    assert not toeplitz_hash(np.zeros(7), np.ones(9), 3).any()


def test_wrong_seed_length():
    with pytest.raises(ParameterError):
        toeplitz_hash(np.ones(4), np.ones(4), 2)
    with pytest.raises(ParameterError):
        toeplitz_hash(np.ones(4), np.ones(6), -1)


def test_degenerate_lengths():
    assert toeplitz_hash(np.ones(4), np.ones(seed_length(4, 0)), 0).size == 0
    assert not toeplitz_hash(np.zeros(0), np.ones(1), 2).any()
    assert seed_length(0, 0) == 0


@given(st.lists(st.integers(0, 1), min_size=1, max_size=16), st.lists(st.integers(0, 1), min_size=1, max_size=16),
       st.integers(1, 6), st.integers(0, 2 ** 30))
def test_linear_and_deterministic(a, b, out_len, s):
    n = min(len(a), len(b))
    a, b = np.array(a[:n], dtype=np.uint8), np.array(b[:n], dtype=np.uint8)
    seed = np.random.default_rng(s).integers(0, 2, seed_length(n, out_len), dtype=np.uint8)
    ha, hb = toeplitz_hash(a, seed, out_len), toeplitz_hash(b, seed, out_len)
    assert np.array_equal(ha ^ hb, toeplitz_hash(a ^ b, seed, out_len))
    assert np.array_equal(ha, toeplitz_hash(a, seed.copy(), out_len))


@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 7) for m in range(1, 4)])
def test_two_universal_exhaustive(n, m):
    seeds = all_vectors(n + m - 1)
    xs = all_vectors(n)
    # images of every input under every seed: shape (seeds, inputs, m)
    img = np.stack([toeplitz_matrix(s, n, m).astype(np.int64) @ xs.T % 2 for s in seeds]).transpose(0, 2, 1)
    code = img @ (1 << np.arange(m))
    worst = 0.0
    for i, j in itertools.combinations(range(len(xs)), 2):
        worst = max(worst, float(np.mean(code[:, i] == code[:, j])))
    assert worst <= 1 / 2 ** m + 1e-15


def test_collision_example():
    # input length 3, two output bits, all 16 seeds
    seeds = all_vectors(4)
    xs = all_vectors(3)
    for x, y in itertools.combinations(xs, 2):
        same = sum(np.array_equal(toeplitz_hash(x, s, 2), toeplitz_hash(y, s, 2)) for s in seeds)
        assert same / 16 <= 1 / 4
