"""Random binning with side-information decoding.

Bins are the cosets of a seeded random affine map ``x -> H x + c`` over
GF(2).  Distinct inputs collide with probability exactly ``1 / bin_count``
over the seed, and the random offset makes every index marginally uniform.
Because bins are cosets, the decoder can list a bin's members by solving a
linear system instead of scanning all ``2^L`` sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ParameterError
from .rng import stream

MAX_DECODE_LEN = 24


@dataclass(frozen=True)
class SwCode:
    """Binning code: ``bin_count`` bins (a power of two), seed and rate slack."""

    bin_count: int
    seed: int
    gamma: float = 0.0

    def __post_init__(self):
        if self.bin_count < 1 or self.bin_count & (self.bin_count - 1):
            raise ParameterError(f"bin_count must be a power of two, got {self.bin_count!r}")

    @property
    def bits(self) -> int:
        return self.bin_count.bit_length() - 1

    def is_injective(self, length: int) -> bool:
        return self.bits >= length


def size_code(cond_entropies, gamma: float, seed: int) -> SwCode:
    """Smallest power-of-two bin count exceeding ``sum(H) + gamma * L`` bits.

    ``cond_entropies`` are the per-position conditional entropies (bits) of
    the kept sequence given the decoder's side information.  The count is
    capped at ``2^L``, where binning becomes a full disclosure.
    """
    h = np.asarray(cond_entropies, dtype=float)
    length = h.size
    bits = min(length, int(math.floor(h.sum() + gamma * length)) + 1) if length else 0
    return SwCode(2 ** bits, seed, gamma)


@lru_cache(maxsize=4096)
def _affine_map(seed: int, bits: int, length: int):
    if bits >= length:
        h = np.zeros((bits, length), dtype=np.uint8)
        h[:length, :length] = np.eye(length, dtype=np.uint8)
        c = np.zeros(bits, dtype=np.uint8)
    else:
        g = stream(seed, "bin-map", bits, length)
        h = g.integers(0, 2, size=(bits, length), dtype=np.uint8)
        c = g.integers(0, 2, size=bits, dtype=np.uint8)
    h.setflags(write=False)
    c.setflags(write=False)
    return h, c


def _offset(code: SwCode, length: int):
    h, c = _affine_map(code.seed, code.bits, length)
    if code.bits >= length:
        # full disclosure still gets a seeded offset so indices are uniform across seeds
        c = stream(code.seed, "bin-offset", code.bits).integers(0, 2, size=code.bits, dtype=np.uint8)
    return h, c


def bits_to_int(bits) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | int(b)
    return v


def int_to_bits(v: int, width: int) -> np.ndarray:
    return np.array([(v >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def syndrome(bits, code: SwCode) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    h, c = _offset(code, bits.size)
    return ((h.astype(np.int64) @ bits + c) % 2).astype(np.uint8)


def bin_encode(bits, code: SwCode) -> int:
    """Bin index in ``1..bin_count`` of a kept bit sequence."""
    return bits_to_int(syndrome(bits, code)) + 1


def bin_encode_many(rows, code: SwCode) -> np.ndarray:
    """Vectorised :func:`bin_encode` for a 2-d array of equal-length sequences."""
    rows = np.asarray(rows, dtype=np.int64)
    h, c = _offset(code, rows.shape[1])
    syn = (rows @ h.T.astype(np.int64) + c) % 2
    weights = 1 << np.arange(code.bits - 1, -1, -1, dtype=np.int64)
    return syn @ weights + 1


def _solve_gf2(h, s):
    """One solution of ``h x = s`` over GF(2) and a basis of the null space."""
    m, n = h.shape
    a = np.concatenate([h.astype(np.uint8), s.reshape(-1, 1).astype(np.uint8)], axis=1)
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        p = row + nz[0]
        if p != row:
            a[[row, p]] = a[[p, row]]
        others = np.nonzero(a[:, col])[0]
        others = others[others != row]
        a[others] ^= a[row]
        pivots.append(col)
        row += 1
    if np.any(a[row:, -1]):
        return None, None
    x0 = np.zeros(n, dtype=np.uint8)
    for r, col in enumerate(pivots):
        x0[col] = a[r, -1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, col in enumerate(pivots):
            basis[k, col] = a[r, f]
    return x0, basis


def _member_chunks(index: int, length: int, code: SwCode, chunk: int = 1 << 15):
    if length > MAX_DECODE_LEN:
        raise CapacityError(f"kept length {length} exceeds the exhaustive decoding limit {MAX_DECODE_LEN}")
    if length == 0:
        yield np.zeros((1, 0), dtype=np.uint8)
        return
    h, c = _offset(code, length)
    target = (int_to_bits(index - 1, code.bits) + c) % 2
    x0, basis = _solve_gf2(h, target)
    if x0 is None:
        return
    d = basis.shape[0]
    shifts = np.arange(d - 1, -1, -1)
    basis = basis.astype(np.int64)
    for start in range(0, 2 ** d, chunk):
        ids = np.arange(start, min(start + chunk, 2 ** d), dtype=np.int64)
        combos = (ids[:, None] >> shifts) & 1
        yield ((x0 + combos @ basis) % 2).astype(np.uint8)


def _lex_sorted(rows):
    return rows[np.lexsort(rows.T[::-1])] if rows.shape[1] else rows


def bin_members(index: int, length: int, code: SwCode) -> np.ndarray:
    """All sequences of ``length`` bits in bin ``index`` (rows, lexicographic order)."""
    chunks = list(_member_chunks(index, length, code))
    if not chunks:
        return np.zeros((0, length), dtype=np.uint8)
    return _lex_sorted(np.concatenate(chunks))


def decode_in_bin(index: int, p_one, code: SwCode, decoder: str = "ml", threshold_bits: float | None = None):
    """Recover a kept sequence from its bin index and side information.

    ``p_one[i]`` is the decoder's posterior that bit ``i`` equals 1 given its
    own observation and the public reliability cells.  ``ml`` returns the
    most probable member of the bin (ties go to the lexicographically
    smallest).  ``typicality`` returns the unique member whose
    ``-log2 P(x | side info)`` is at most ``threshold_bits`` and ``None`` when
    there are zero or several; the default threshold is the summed
    per-position entropy plus ``gamma`` bits per position.
    """
    if decoder not in ("ml", "typicality"):
        raise ParameterError(f"unknown decoder {decoder!r}")
    p = np.clip(np.asarray(p_one, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore"):
        l1 = np.log2(p)
        l0 = np.log2(1.0 - p)
    if decoder == "typicality" and threshold_bits is None:
        h = -(p * np.nan_to_num(l1, neginf=0.0) + (1 - p) * np.nan_to_num(l0, neginf=0.0))
        threshold_bits = h.sum() + code.gamma * p.size
    best_ll, best = -np.inf, []
    hits, hit = 0, None
    for rows in _member_chunks(index, p.size, code):
        ll = np.where(rows == 1, l1, l0).sum(axis=1)
        if decoder == "ml":
            top = ll.max()
            if top > best_ll:
                best_ll, best = top, [rows[ll == top]]
            elif top == best_ll:
                best.append(rows[ll == top])
        else:
            ok = -ll <= threshold_bits
            hits += int(ok.sum())
            if hits > 1:
                return None
            if ok.any():
                hit = rows[np.argmax(ok)].copy()
    if decoder == "ml":
        if not best:
            return None
        return _lex_sorted(np.concatenate(best))[0].copy()
    return hit if hits == 1 else None
