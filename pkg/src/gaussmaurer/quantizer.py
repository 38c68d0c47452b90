"""Soft-decision reliability levels and hard-decision bits.

A threshold sequence ``0 < a_1 < ... < a_K`` splits the real line into
``2(K + 1)`` cells indexed by ``(bit, level)``.  ``bit`` is the hard decision
(1 iff ``x >= 0``) and ``level`` counts the thresholds strictly below ``|x|``,
so ``|x| == a_j`` falls in the lower level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import special

from .errors import ParameterError, ThresholdError


@dataclass(frozen=True)
class Thresholds:
    a: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        _check(self.a)

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def n_levels(self) -> int:
        return len(self.a) + 1

    @property
    def edges(self) -> np.ndarray:
        """Magnitude edges ``[0, a_1, ..., a_K, inf]``; level j is ``(edges[j], edges[j+1]]``."""
        return np.concatenate(([0.0], np.asarray(self.a, dtype=float), [np.inf]))

    def level_interval(self, level: int) -> tuple[float, float]:
        e = self.edges
        return float(e[level]), float(e[level + 1])

    def cells(self):
        return [Cell(b, j) for j in range(self.n_levels) for b in (0, 1)]

    def __str__(self):
        return ",".join(repr(v) for v in self.a)


class Cell(NamedTuple):
    bit: int
    level: int


def _check(a):
    prev = 0.0
    for i, v in enumerate(a):
        if not math.isfinite(v):
            raise ThresholdError(i, f"non-finite value {v!r}")
        if v <= 0:
            raise ThresholdError(i, f"must be positive, got {v!r}")
        if i > 0 and v <= prev:
            raise ThresholdError(i, f"{v!r} does not exceed previous value {prev!r}")
        prev = v


def validate_thresholds(raw: Sequence[float]) -> Thresholds:
    return Thresholds(tuple(raw))


def parse_thresholds(text: str) -> Thresholds:
    """Parse a comma-separated list such as ``"0.3333,0.6667,1"``; empty means K = 0."""
    text = text.strip()
    if not text:
        return Thresholds(())
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise ThresholdError(-1, f"cannot parse {text!r}") from exc
    return Thresholds(tuple(vals))


PAPER_THRESHOLDS = Thresholds((1.0 / 3.0, 2.0 / 3.0, 1.0))


def reliability_level(x, t: Thresholds):
    """Number of thresholds strictly below ``|x|``."""
    lv = np.searchsorted(np.asarray(t.a, dtype=float), np.abs(np.asarray(x, dtype=float)), side="left")
    return int(lv) if np.ndim(lv) == 0 else lv


def hard_bit(x):
    b = (np.asarray(x, dtype=float) >= 0).astype(np.int64)
    return int(b) if b.ndim == 0 else b


def _tail_diff(lo, hi):
    """P(lo < N <= hi) for standard normal N, evaluated on the short tail."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    upper = lo >= 0
    # on the right use survival functions to keep relative accuracy in the tail
    right = special.ndtr(-lo) - special.ndtr(-hi)
    left = special.ndtr(hi) - special.ndtr(lo)
    return np.where(upper, right, left)


def cell_prob(u: float, cell: Cell, v: float, t: Thresholds) -> float:
    """P(u + N in cell) for N ~ normal(0, v)."""
    if not v > 0:
        raise ParameterError(f"variance must be positive, got {v!r}")
    return float(cell_prob_table(u, v, t)[cell.bit, cell.level])


def cell_prob_table(u: float, v: float, t: Thresholds) -> np.ndarray:
    """Array ``P[bit, level]`` of cell probabilities given ``U = u``."""
    if not v > 0:
        raise ParameterError(f"variance must be positive, got {v!r}")
    s = math.sqrt(v)
    e = t.edges
    lo, hi = e[:-1], e[1:]
    p1 = _tail_diff((lo - u) / s, (hi - u) / s)
    p0 = _tail_diff((-hi - u) / s, (-lo - u) / s)
    return np.vstack([p0, p1])


def level_prob_table(u: float, v: float, t: Thresholds) -> np.ndarray:
    """``P[level]`` given ``U = u``."""
    return cell_prob_table(u, v, t).sum(axis=0)
