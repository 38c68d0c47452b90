"""Monte-Carlo execution of the soft-decision key agreement protocol.

One run draws ``n`` satellite symbols, publishes both reliability sequences,
keeps each position for Alice's or Bob's hard bit according to the cell
labels of a :class:`~gaussmaurer.entropy.RateReport`, reconciles the kept
bits with random binning in both directions and hashes the concatenation
``(X_delta, Y_delta)`` with a Toeplitz matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .binning import MAX_DECODE_LEN, SwCode, bin_encode, decode_in_bin, size_code
from .entropy import Label, RateReport, _Problem, build_cell_table
from .errors import CapacityError, ParameterError
from .hashing import seed_length, toeplitz_hash
from .model import ModelParams
from .quantizer import Thresholds, hard_bit, reliability_level
from .rng import stream


def sample_round(n: int, params: ModelParams, seed: int):
    """Draw ``(u, x, y, z)`` for ``n`` channel uses."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n!r}")
    g = stream(seed, "channel")
    u = np.where(g.integers(0, 2, size=n) == 1, 1.0, -1.0)
    noise = g.standard_normal((3, n))
    x = u + math.sqrt(params.v_a) * noise[0]
    y = u + math.sqrt(params.v_b) * noise[1]
    z = u + math.sqrt(params.v_e) * noise[2]
    return u, x, y, z


@dataclass
class Distilled:
    w_a: np.ndarray
    w_b: np.ndarray
    x_tilde: np.ndarray
    y_tilde: np.ndarray
    keep_x: np.ndarray
    keep_y: np.ndarray

    @property
    def pos_x(self):
        return np.flatnonzero(self.keep_x)

    @property
    def pos_y(self):
        return np.flatnonzero(self.keep_y)

    @property
    def x_kept(self):
        return self.x_tilde[self.keep_x]

    @property
    def y_kept(self):
        return self.y_tilde[self.keep_y]


def label_grid(report: RateReport) -> np.ndarray:
    """Integer label array: 1 for UseX, 2 for UseY, 0 for Discard."""
    code = {Label.DISCARD: 0, Label.USE_X: 1, Label.USE_Y: 2}
    return np.array([[code[lab] for lab in row] for row in report.labels], dtype=np.int8)


def distill(x, y, t: Thresholds, report: RateReport) -> Distilled:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ParameterError("x and y must have the same length")
    w_a = np.atleast_1d(reliability_level(x, t))
    w_b = np.atleast_1d(reliability_level(y, t))
    lab = label_grid(report)[w_a, w_b]
    return Distilled(w_a, w_b, np.atleast_1d(hard_bit(x)).astype(np.uint8),
                     np.atleast_1d(hard_bit(y)).astype(np.uint8), lab == 1, lab == 2)


def cell_posteriors(target: str, conditioner: str, obs, w_a, w_b, table) -> np.ndarray:
    """Per-position P(target bit = 1 | conditioner observation, cell)."""
    obs = np.asarray(obs, dtype=float)
    out = np.empty(obs.size)
    cells = np.stack([w_a, w_b], axis=1) if obs.size else np.zeros((0, 2), dtype=int)
    for cell in {tuple(c) for c in cells.tolist()}:
        sel = (cells[:, 0] == cell[0]) & (cells[:, 1] == cell[1])
        out[sel] = _Problem(target, conditioner, cell, table).posterior(obs[sel])
    return out


@dataclass
class Transcript:
    n: int
    u: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    w_a: np.ndarray
    w_b: np.ndarray
    x_tilde: np.ndarray
    y_tilde: np.ndarray
    keep_x: np.ndarray
    keep_y: np.ndarray
    m_a: int
    m_b: int
    bins_a: int
    bins_b: int
    x_hat: np.ndarray
    y_hat: np.ndarray
    hash_seed: np.ndarray
    s: np.ndarray
    s_prime: np.ndarray
    outcome: str = "ok"
    extras: dict = field(default_factory=dict)

    @property
    def key_len(self) -> int:
        return int(self.s.size)

    @property
    def agree(self) -> bool:
        return bool(np.array_equal(self.s, self.s_prime))

    @property
    def key_rate(self) -> float:
        return self.key_len / self.n

    def public(self) -> dict:
        """The public discussion: reliability sequences, bin indices, hash seed."""
        return {"w_a": self.w_a.tolist(), "w_b": self.w_b.tolist(), "m_a": self.m_a,
                "m_b": self.m_b, "hash_seed": _bitstr(self.hash_seed)}

    def to_dict(self) -> dict:
        d = {
            "n": self.n, "outcome": self.outcome,
            "u": self.u.tolist(), "x": self.x.tolist(), "y": self.y.tolist(), "z": self.z.tolist(),
            "x_tilde": _bitstr(self.x_tilde), "y_tilde": _bitstr(self.y_tilde),
            "keep_x": _bitstr(self.keep_x), "keep_y": _bitstr(self.keep_y),
            "bins_a": self.bins_a, "bins_b": self.bins_b,
            "x_hat": _bitstr(self.x_hat), "y_hat": _bitstr(self.y_hat),
            "s": _bitstr(self.s), "s_prime": _bitstr(self.s_prime),
        }
        d.update(self.public())
        d.update(self.extras)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _bitstr(bits) -> str:
    return "".join("1" if b else "0" for b in np.asarray(bits).ravel())


def lemma2_key_length(n: int, h_pair_given_z: float, bins_a: int, bins_b: int, delta: float) -> int:
    """``floor(n * H(X_d Y_d | Z W) - log2 |M_A| |M_B| - 2 n delta)``."""
    return math.floor(n * h_pair_given_z - math.log2(bins_a) - math.log2(bins_b) - 2.0 * n * delta)


def run_protocol(n: int, params: ModelParams, t: Thresholds, gamma: float = 0.1, delta: float = 0.01,
                 seed: int = 0, report: RateReport | None = None, decoder: str = "ml",
                 table=None) -> Transcript:
    """Simulate one run of the protocol on ``n`` satellite symbols."""
    from .entropy import soft_rate_lower_bound

    report = report or soft_rate_lower_bound(params, t)
    table = table or build_cell_table(params, t)
    u, x, y, z = sample_round(n, params, seed)
    d = distill(x, y, t, report)
    px, py = d.pos_x, d.pos_y
    if max(px.size, py.size) > MAX_DECODE_LEN:
        raise CapacityError(f"kept length exceeds {MAX_DECODE_LEN}; reduce n")

    # Lemma-1 sizing from the realised (public) cells
    hx = report.entropies[d.w_a[px], d.w_b[px], 1]
    hy = report.entropies[d.w_a[py], d.w_b[py], 3]
    code_a = size_code(hx, gamma, int(stream(seed, "bin-seed-a").integers(2 ** 62)))
    code_b = size_code(hy, gamma, int(stream(seed, "bin-seed-b").integers(2 ** 62)))
    m_a = bin_encode(d.x_kept, code_a)
    m_b = bin_encode(d.y_kept, code_b)

    # Bob estimates Alice's kept bits from y; Alice estimates Bob's from x
    pb = cell_posteriors("x", "y", y[px], d.w_a[px], d.w_b[px], table)
    pa = cell_posteriors("y", "x", x[py], d.w_a[py], d.w_b[py], table)
    x_hat = decode_in_bin(m_a, pb, code_a, decoder)
    y_hat = decode_in_bin(m_b, pa, code_b, decoder)
    failed = []
    if x_hat is None:
        failed.append("bob")
        x_hat = np.zeros(px.size, dtype=np.uint8)
    if y_hat is None:
        failed.append("alice")
        y_hat = np.zeros(py.size, dtype=np.uint8)

    in_len = px.size + py.size
    ell = min(lemma2_key_length(n, report.h_pair_given_z, code_a.bin_count, code_b.bin_count, delta), in_len)
    outcome = "ok"
    if ell <= 0:
        outcome, ell = "no_key", 0
    hash_seed = stream(seed, "hash").integers(0, 2, size=seed_length(in_len, ell), dtype=np.uint8)
    s = toeplitz_hash(np.concatenate([d.x_kept, y_hat]), hash_seed, ell)
    s_prime = toeplitz_hash(np.concatenate([x_hat, d.y_kept]), hash_seed, ell)
    return Transcript(n, u, x, y, z, d.w_a, d.w_b, d.x_tilde, d.y_tilde, d.keep_x, d.keep_y,
                      m_a, m_b, code_a.bin_count, code_b.bin_count, x_hat, y_hat, hash_seed,
                      s, s_prime, outcome, {"decode_failures": failed})


def reconciliation_error(length: int, params: ModelParams, t: Thresholds, gamma: float, trials: int,
                         seed: int = 0, report: RateReport | None = None, decoder: str = "ml",
                         full_disclosure: bool = False) -> tuple[int, int]:
    """Count Bob's decoding errors on ``length`` kept bits of Alice's.

    Each trial draws channel symbols until ``length`` positions land in
    Alice's set, bins her bits with a fresh code sized for margin ``gamma``
    (or ``2^length`` bins when ``full_disclosure``) and decodes with Bob's
    observations.  Returns ``(errors, trials)``.
    """
    from .entropy import soft_rate_lower_bound

    if length > MAX_DECODE_LEN:
        raise CapacityError(f"length {length} exceeds {MAX_DECODE_LEN}")
    report = report or soft_rate_lower_bound(params, t)
    table = build_cell_table(params, t)
    frac = report.mask(Label.USE_X)
    if not (report.weights * frac).sum() > 0:
        raise ParameterError("no reliability cell keeps Alice's bit at these parameters")
    keep_prob = float((report.weights * frac).sum())
    g = stream(seed, "reconcile", length)
    errors = 0
    batch = int(4 * length / keep_prob) + 16
    for _ in range(trials):
        xs, ys, wa, wb = [], [], [], []
        got = 0
        while got < length:
            u = np.where(g.integers(0, 2, size=batch) == 1, 1.0, -1.0)
            x = u + math.sqrt(params.v_a) * g.standard_normal(batch)
            y = u + math.sqrt(params.v_b) * g.standard_normal(batch)
            d = distill(x, y, t, report)
            sel = d.pos_x
            xs.append(x[sel]); ys.append(y[sel]); wa.append(d.w_a[sel]); wb.append(d.w_b[sel])
            got += sel.size
        x = np.concatenate(xs)[:length]
        y = np.concatenate(ys)[:length]
        w_a = np.concatenate(wa)[:length]
        w_b = np.concatenate(wb)[:length]
        bits = np.atleast_1d(hard_bit(x)).astype(np.uint8)
        code_seed = int(g.integers(2 ** 62))
        if full_disclosure:
            code = SwCode(2 ** length, code_seed, gamma)
        else:
            code = size_code(report.entropies[w_a, w_b, 1], gamma, code_seed)
        p = cell_posteriors("x", "y", y, w_a, w_b, table)
        guess = decode_in_bin(bin_encode(bits, code), p, code, decoder)
        errors += guess is None or not np.array_equal(guess, bits)
    return errors, trials
