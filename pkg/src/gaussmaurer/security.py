"""Exact small-n evaluation of the privacy-amplification security bounds.

For a handful of satellite symbols every joint outcome of reliability cells
and kept bits can be listed.  Given Eve's observation ``z^n`` the law of
``(W^n, R^n)`` factorises over positions, so the distribution of the hashed
key and public messages given ``(z^n, w^n)`` is computed exactly.  Only the
outer averages over ``z^n`` and over the hash function are sampled.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .binning import SwCode, bin_encode, size_code
from .entropy import Label, RateReport, build_cell_table, soft_rate_lower_bound
from .errors import CapacityError, ParameterError
from .model import ModelParams
from .quantizer import Thresholds
from .rng import stream

log = logging.getLogger(__name__)

MAX_ENUMERATION = 8 ** 8


def entropy_security_floor(delta: float, key_size: int) -> float:
    """Lower bound ``(1 - d) log2|S| - d log2(1/d)`` on the key's conditional entropy.

    ``delta`` is clamped to ``[0, 1]``, the range where the expression is used.
    """
    if not 0.0 <= delta <= 2.0:
        raise ParameterError(f"delta must lie in [0, 2], got {delta!r}")
    if key_size < 1:
        raise ParameterError(f"key_size must be >= 1, got {key_size!r}")
    if delta > 1.0:
        log.info("clamping delta %.6g to 1 for the entropy floor", delta)
        delta = 1.0
    return (1.0 - delta) * math.log2(key_size) - float(special.entr(delta)) / math.log(2.0)


def floor_slope(delta: float, key_size: int) -> float:
    """d/d(delta) of :func:`entropy_security_floor`, for error propagation."""
    if delta <= 0.0 or delta >= 1.0:
        delta = min(max(delta, 1e-12), 1.0)
    return -math.log2(key_size) + math.log2(delta) + 1.0 / math.log(2.0)


@dataclass
class SecurityEstimate:
    n: int
    key_bits: int
    message_bits: int
    alpha: float
    delta_mean: float
    delta_stderr: float
    first_term: float
    second_term: float
    entropy_floor: float
    exact_entropy: float
    exact_entropy_stderr: float
    z_samples: int
    f_samples: int

    @property
    def bound_rhs(self) -> float:
        return self.first_term + self.second_term

    @property
    def floor_stderr(self) -> float:
        slope = floor_slope(min(self.delta_mean, 1.0), 2 ** self.key_bits)
        return math.hypot(slope * self.delta_stderr, self.exact_entropy_stderr)

    @property
    def lemma4_ok(self) -> bool:
        return self.delta_mean <= self.bound_rhs + 3.0 * self.delta_stderr

    @property
    def lemma3_ok(self) -> bool:
        return self.exact_entropy >= self.entropy_floor - 3.0 * self.floor_stderr

    def as_row(self) -> dict:
        return {
            "n": self.n, "alpha": self.alpha, "delta_mean": self.delta_mean,
            "delta_stderr": self.delta_stderr, "bound_rhs": self.bound_rhs,
            "entropy_floor": self.entropy_floor, "exact_conditional_entropy": self.exact_entropy,
        }


def _atoms(table, report: RateReport):
    """Per-position outcomes ``(cell, kind, bit)`` and their likelihoods under u = -1, +1.

    ``kind`` is 0 for a discarded cell, 1 when Alice's bit is kept and 2 when
    Bob's is.
    """
    levels = table.thresholds.n_levels
    la, lb = table.alice.sum(axis=1), table.bob.sum(axis=1)
    desc, lik = [], []
    for i in range(levels):
        for j in range(levels):
            lab = report.labels[i][j]
            cell = i * levels + j
            if lab is Label.USE_X:
                for b in (0, 1):
                    desc.append((cell, 1, b))
                    lik.append(table.alice[:, b, i] * lb[:, j])
            elif lab is Label.USE_Y:
                for b in (0, 1):
                    desc.append((cell, 2, b))
                    lik.append(la[:, i] * table.bob[:, b, j])
            else:
                desc.append((cell, 0, 0))
                lik.append(la[:, i] * lb[:, j])
    return np.array(desc, dtype=np.int64), np.array(lik)


def default_codes(n, report: RateReport, gamma: float, seed: int):
    """Bin codes sized from the ensemble conditional entropies over ``n`` symbols."""
    ha = [report.h_xdelta_given_y] * n
    hb = [report.h_ydelta_given_x] * n
    return (size_code(ha, gamma, int(stream(seed, "sec-bin-a").integers(2 ** 62))),
            size_code(hb, gamma, int(stream(seed, "sec-bin-b").integers(2 ** 62))))


def estimate_security(n: int, params: ModelParams, t: Thresholds, out_len: int = 1,
                      codes: tuple[SwCode, SwCode] | None = None, z_samples: int = 1000,
                      f_samples: int = 100, seed: int = 0, delta: float = 0.05,
                      alpha: float | None = None, gamma: float = 0.1,
                      report: RateReport | None = None) -> SecurityEstimate:
    """Estimate ``E_f[Delta_f]`` and the right-hand side of the leftover-hash bound.

    The hash input is the kept bits ``(x_delta, y_delta)`` zero-padded to
    ``n`` bits and hashed by an ``out_len x n`` Toeplitz matrix; this is a
    fixed function on every reliability pattern and is two-universal on each.
    """
    if n < 1 or z_samples < 1 or f_samples < 1:
        raise ParameterError("n, z_samples and f_samples must be >= 1")
    levels = t.n_levels
    if (2 * levels) ** (2 * n) > MAX_ENUMERATION:
        raise CapacityError(f"(2(K+1))^(2n) = {(2 * levels) ** (2 * n)} exceeds the enumeration limit")
    report = report or soft_rate_lower_bound(params, t)
    table = build_cell_table(params, t)
    codes = codes or default_codes(n, report, gamma, seed)
    code_a, code_b = codes
    if alpha is None:
        alpha = max(0.0, report.h_pair_given_z - delta)

    desc, lik = _atoms(table, report)
    n_atoms = len(desc)
    seqs = np.indices((n_atoms,) * n).reshape(n, -1).T
    q = seqs.shape[0]

    # static per-sequence data: reliability key, message key, padded hash input
    w_key = np.zeros(q, dtype=np.int64)
    pad = np.zeros((q, n), dtype=np.int64)
    msg = np.zeros(q, dtype=np.int64)
    for k, row in enumerate(seqs):
        d = desc[row]
        w_key[k] = int(np.dot(d[:, 0], (levels * levels) ** np.arange(n)))
        xb = d[d[:, 1] == 1, 2]
        yb = d[d[:, 1] == 2, 2]
        r = np.concatenate([xb, yb])
        pad[k, :r.size] = r
        msg[k] = (bin_encode(xb, code_a) - 1) * code_b.bin_count + bin_encode(yb, code_b) - 1
    _, group = np.unique(np.stack([w_key, msg], axis=1), axis=0, return_inverse=True)
    group = group.ravel()
    n_groups = int(group.max()) + 1
    _, w_group = np.unique(w_key, return_inverse=True)
    w_group = w_group.ravel()

    # sample Eve's observations and weight every sequence exactly
    g = stream(seed, "sec-z")
    u = np.where(g.integers(0, 2, size=(z_samples, n)) == 1, 1.0, -1.0)
    z = u + math.sqrt(params.v_e) * g.standard_normal((z_samples, n))
    pi_p = special.expit(2.0 * z / params.v_e)
    atom_p = pi_p[..., None] * lik[:, 1] + (1.0 - pi_p)[..., None] * lik[:, 0]
    prob = np.ones((z_samples, q))
    for i in range(n):
        prob *= atom_p[:, i, seqs[:, i]]
    prob /= prob.sum(axis=1, keepdims=True)

    key_size = 2 ** out_len
    msg_size = code_a.bin_count * code_b.bin_count
    first = math.sqrt(key_size * msg_size / 2.0 ** (alpha * n))

    pw = np.zeros((z_samples, int(w_group.max()) + 1))
    np.add.at(pw.T, w_group, prob.T)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = prob / pw[:, w_group]
        low = -np.log2(cond) / n < alpha
    second = 2.0 * float(np.mean(np.where(low, prob, 0.0).sum(axis=1)))

    hg = stream(seed, "sec-hash")
    rows = np.arange(z_samples)[:, None]
    dist = np.empty((f_samples, z_samples))
    ent = np.empty((f_samples, z_samples))
    weights = 1 << np.arange(out_len - 1, -1, -1)
    for fi in range(f_samples):
        fseed = hg.integers(0, 2, size=max(n + out_len - 1, 0), dtype=np.uint8)
        if out_len:
            tmat = _toeplitz_rows(fseed, n, out_len)
            s_idx = ((pad @ tmat.T) % 2) @ weights
        else:
            s_idx = np.zeros(q, dtype=np.int64)
        flat = (rows * (n_groups * key_size) + group * key_size + s_idx).ravel()
        joint = np.bincount(flat, weights=prob.ravel(), minlength=z_samples * n_groups * key_size)
        joint = joint.reshape(z_samples, n_groups, key_size)
        marg = joint.sum(axis=2, keepdims=True)
        dist[fi] = np.abs(joint - marg / key_size).sum(axis=(1, 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(joint > 0, -joint * np.log2(joint / marg), 0.0)
        ent[fi] = terms.sum(axis=(1, 2))

    dmean = float(dist.mean())
    hmean = float(ent.mean())
    est = SecurityEstimate(
        n=n, key_bits=out_len, message_bits=code_a.bits + code_b.bits, alpha=alpha,
        delta_mean=dmean, delta_stderr=_crossed_stderr(dist), first_term=first, second_term=second,
        entropy_floor=entropy_security_floor(min(dmean, 2.0), key_size),
        exact_entropy=hmean, exact_entropy_stderr=_crossed_stderr(ent),
        z_samples=z_samples, f_samples=f_samples)
    return est


def _toeplitz_rows(seed, in_len, out_len):
    from .hashing import toeplitz_matrix

    return toeplitz_matrix(seed, in_len, out_len).astype(np.int64)


def _crossed_stderr(m: np.ndarray) -> float:
    """Standard error of the grand mean of a hash-by-observation sample matrix."""
    nf, nz = m.shape
    v = 0.0
    if nf > 1:
        v += m.mean(axis=1).var(ddof=1) / nf
    if nz > 1:
        v += m.mean(axis=0).var(ddof=1) / nz
    return math.sqrt(v)
