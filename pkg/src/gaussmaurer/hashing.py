"""Toeplitz-matrix two-universal hashing over GF(2)."""

from __future__ import annotations

import numpy as np
from scipy.linalg import toeplitz

from .errors import ParameterError


def toeplitz_matrix(seed, in_len: int, out_len: int) -> np.ndarray:
    """``out_len x in_len`` binary matrix with ``T[i, j] = seed[i - j + in_len - 1]``."""
    seed = np.asarray(seed, dtype=np.uint8)
    if in_len == 0 or out_len == 0:
        return np.zeros((out_len, in_len), dtype=np.uint8)
    if seed.size != in_len + out_len - 1:
        raise ParameterError(f"seed length {seed.size} != {in_len} + {out_len} - 1")
    col = seed[in_len - 1:]
    row = seed[in_len - 1::-1]
    return toeplitz(col, row)


def toeplitz_hash(bits, seed, out_len: int) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    if out_len < 0:
        raise ParameterError("out_len must be non-negative")
    if out_len == 0:
        return np.zeros(0, dtype=np.uint8)
    if bits.size == 0:
        if np.asarray(seed).size != out_len - 1:
            raise ParameterError(f"seed length must be {out_len - 1} for empty input")
        return np.zeros(out_len, dtype=np.uint8)
    t = toeplitz_matrix(seed, bits.size, out_len)
    return (t.astype(np.int64) @ bits % 2).astype(np.uint8)


def seed_length(in_len: int, out_len: int) -> int:
    return max(in_len + out_len - 1, 0)
