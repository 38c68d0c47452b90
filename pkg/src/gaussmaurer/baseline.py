"""Hard-decision comparison baseline.

Block length 1 keeps Eve's continuous observation and reuses the entropy
engine with a single reliability level.  Longer blocks follow the
repetition-code advantage distillation of the binary satellite model, with
the three Gaussian channels converted to binary symmetric channels.

The repetition-protocol rate below is a reconstruction: Alice draws a random
bit ``C`` and publishes ``X^N xor C^N``; Bob accepts iff ``Y^N xor`` that
message is constant and takes the constant as his guess of ``C``.  The rate is
``(P_accept / N) * max(0, H(C | Eve) - H(C | Bob's bit))``, where Eve's
sufficient statistic is the number of ones in ``Z^N xor`` the message.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .entropy import build_cell_table, conditional_bit_entropy
from .errors import ParameterError
from .model import ModelParams, binary_entropy, erfc
from .quantizer import Thresholds

MODES = ("exact", "paper")
HARD = Thresholds(())


def bsc_crossover(v: float, mode: str = "exact") -> float:
    """Crossover probability of a hard-decided unit-amplitude signal.

    ``exact`` gives ``0.5 * erfc(1 / sqrt(2 v))``; ``paper`` gives the
    alternative conversion ``0.5 * erfc(sqrt(1 / v))``, i.e. twice the SNR.
    """
    if not v > 0:
        raise ParameterError(f"variance must be positive, got {v!r}")
    if mode == "exact":
        return float(0.5 * erfc(1.0 / math.sqrt(2.0 * v)))
    if mode == "paper":
        return float(0.5 * erfc(math.sqrt(1.0 / v)))
    raise ParameterError(f"unknown conversion mode {mode!r}")


@dataclass(frozen=True)
class BscTriple:
    eps_a: float
    eps_b: float
    eps_e: float

    def __post_init__(self):
        for name in ("eps_a", "eps_b", "eps_e"):
            e = getattr(self, name)
            if not 0.0 < e <= 0.5:
                raise ParameterError(f"{name} must lie in (0, 0.5], got {e!r}")

    @classmethod
    def from_params(cls, params: ModelParams, mode: str = "exact") -> "BscTriple":
        return cls(*(bsc_crossover(v, mode) for v in (params.v_a, params.v_b, params.v_e)))

    @property
    def eps_xy(self) -> float:
        return combine(self.eps_a, self.eps_b)

    @property
    def eps_xz(self) -> float:
        return combine(self.eps_a, self.eps_e)


def combine(e1, e2):
    """Crossover of two cascaded binary symmetric channels."""
    return e1 * (1.0 - e2) + e2 * (1.0 - e1)


def hard_rate_n1(params: ModelParams) -> float:
    """Rate of keeping one hard bit per symbol against a continuous-output Eve."""
    table = build_cell_table(params, HARD)
    h = [conditional_bit_entropy(tg, cd, (0, 0), params, HARD, table)
         for tg, cd in (("x", "z"), ("x", "y"), ("y", "z"), ("y", "x"))]
    return max(0.0, h[0] - h[1], h[2] - h[3])


def _entropy_of_c(joint):
    """H(C | T) in bits from a table ``joint[c, t]``."""
    col = joint.sum(axis=0)
    safe = np.where(col > 0, col, 1.0)
    return float(np.sum(col * binary_entropy(np.clip(joint[1] / safe, 0.0, 1.0))))


def repetition_law(n_rep: int, t: BscTriple):
    """Joint law of ``(C, Bob's bit, Eve's count)`` given acceptance.

    Returns ``(p_accept, joint)`` with ``joint[c, b, k]``.
    """
    if n_rep < 1:
        raise ParameterError(f"block length must be >= 1, got {n_rep!r}")
    ea, eb, ee = t.eps_a, t.eps_b, t.eps_e
    # per-position law of (Bob flip d, Eve flip e) relative to C
    pde = np.zeros((2, 2))
    for na in (0, 1):
        for nb in (0, 1):
            for ne in (0, 1):
                p = ((ea if na else 1 - ea) * (eb if nb else 1 - eb) * (ee if ne else 1 - ee))
                pde[na ^ nb, na ^ ne] += p
    pd = pde.sum(axis=1)
    k = np.arange(n_rep + 1)
    joint = np.zeros((2, 2, n_rep + 1))
    block = [pd[d] ** n_rep for d in (0, 1)]
    p_accept = block[0] + block[1]
    for d in (0, 1):
        q = pde[d, 1] / pd[d]
        ones = stats.binom.pmf(k, n_rep, q) * block[d] / p_accept
        for c in (0, 1):
            counts = ones if c == 0 else ones[::-1]
            joint[c, c ^ d] += 0.5 * counts
    return p_accept, joint


def bsc_repetition_rate(n_rep: int, t: BscTriple) -> float:
    p_accept, joint = repetition_law(n_rep, t)
    h_eve = _entropy_of_c(joint.sum(axis=1))
    h_bob = _entropy_of_c(joint.sum(axis=2))
    return p_accept / n_rep * max(0.0, h_eve - h_bob)


@dataclass
class BaselineReport:
    rate_per_n: list
    mode: str = "exact"

    @property
    def best_rate(self) -> float:
        return max(r for _, r in self.rate_per_n)

    @property
    def best_n(self) -> int:
        best = self.best_rate
        return min(n for n, r in self.rate_per_n if r == best)

    @property
    def rate_n1(self) -> float:
        return self.rate_per_n[0][1]


def optimal_block_length(params: ModelParams, n_max: int = 10, mode: str = "exact") -> BaselineReport:
    """Best repetition block length in ``1..n_max`` for the hard-decision protocol."""
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max!r}")
    rates = [(1, hard_rate_n1(params))]
    if n_max > 1:
        triple = BscTriple.from_params(params, mode)
        rates += [(n, bsc_repetition_rate(n, triple)) for n in range(2, n_max + 1)]
    return BaselineReport(rates, mode)
