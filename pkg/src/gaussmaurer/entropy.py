"""Conditional entropies of the hard bits given reliability cells.

For every reliability pair ``(w_A, w_B)`` the engine evaluates the four
entropies that decide whether Alice's bit, Bob's bit or neither should be
kept, and sums the resulting per-cell gains into the soft-decision key-rate
lower bound.  Each entropy is a one-dimensional integral over the continuous
observation of the conditioning party, computed with adaptive
Gauss-Legendre panels.  Given ``U``, the receivers' signals are independent,
which reduces every posterior to a two-term mixture over ``u = +-1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import quadrature
from .errors import ParameterError, UndefinedConditionalError
from .model import LN2, ModelParams, binary_entropy_nats
from .quantizer import Thresholds, cell_prob_table

#: observations are integrated over [-(1 + TAIL_SIGMAS * sigma), 1 + TAIL_SIGMAS * sigma]
TAIL_SIGMAS = 8.0
#: Gaussian mass beyond the truncation point on both sides of a component
TAIL_MASS = float(2.0 * special.ndtr(-TAIL_SIGMAS))
QUAD_TOL = 1e-12
ZERO_CELL = 1e-300


class Label(str, enum.Enum):
    USE_X = "UseX"
    USE_Y = "UseY"
    DISCARD = "Discard"


@dataclass(frozen=True)
class CellTable:
    """Per-party cell probabilities and the joint reliability weights.

    ``alice[i, b, j]`` is ``P(bit=b, level=j | U=u_i)`` with ``u_0 = -1`` and
    ``u_1 = +1``; ``bob`` likewise.  ``joint[w_a, w_b]`` is ``P(W_A, W_B)``.
    """

    params: ModelParams
    thresholds: Thresholds
    alice: np.ndarray
    bob: np.ndarray
    joint: np.ndarray

    def level_probs(self, party: str) -> np.ndarray:
        return self._party(party).sum(axis=1)

    def _party(self, party):
        return self.alice if party == "x" else self.bob


def build_cell_table(params: ModelParams, t: Thresholds) -> CellTable:
    alice = np.stack([cell_prob_table(u, params.v_a, t) for u in (-1.0, 1.0)])
    bob = np.stack([cell_prob_table(u, params.v_b, t) for u in (-1.0, 1.0)])
    la, lb = alice.sum(axis=1), bob.sum(axis=1)
    joint = 0.5 * (np.outer(la[0], lb[0]) + np.outer(la[1], lb[1]))
    return CellTable(params, t, alice, bob, joint)


def _other(party):
    return "y" if party == "x" else "x"


def _variance(params, party):
    return {"x": params.v_a, "y": params.v_b, "z": params.v_e}[party]


class _Problem:
    """Integrand data for H(target bit | conditioner observation, cell)."""

    def __init__(self, target, conditioner, cell, table: CellTable):
        if target not in ("x", "y"):
            raise ParameterError(f"target must be 'x' or 'y', got {target!r}")
        if conditioner not in ("x", "y", "z") or conditioner == target:
            raise ParameterError(f"invalid conditioner {conditioner!r} for target {target!r}")
        w_a, w_b = cell
        n = table.thresholds.n_levels
        if not (0 <= w_a < n and 0 <= w_b < n):
            raise ParameterError(f"cell {cell!r} outside the level alphabet 0..{n - 1}")
        params = table.params
        w_t = w_a if target == "x" else w_b
        w_o = w_b if target == "x" else w_a
        tt = table._party(target)
        self.p_one = tt[:, 1, w_t]
        self.p_level = tt[:, :, w_t].sum(axis=1)
        if conditioner == "z":
            self.extra = table._party(_other(target)).sum(axis=1)[:, w_o]
        else:
            self.extra = np.ones(2)
        self.var = _variance(params, conditioner)
        self.sigma = math.sqrt(self.var)
        self.mass = float(0.5 * np.dot(self.p_level, self.extra * (1.0 if conditioner == "z" else
                                                                   table._party(conditioner).sum(axis=1)[:, w_o])))
        if self.mass < ZERO_CELL:
            raise UndefinedConditionalError(f"cell {tuple(cell)} has zero probability")
        reach = TAIL_SIGMAS * self.sigma
        if conditioner == "z":
            self.regions = [(-(1.0 + reach), 1.0 + reach)]
        else:
            lo, hi = table.thresholds.level_interval(w_o)
            top = min(hi, max(lo, 1.0) + reach)
            self.regions = [(lo, top), (-top, -lo)] if top > lo else []

    def posterior(self, obs):
        lam = 2.0 * np.asarray(obs, dtype=float) / self.var
        wp = special.expit(lam) * self.extra[1]
        wm = special.expit(-lam) * self.extra[0]
        num = self.p_one[1] * wp + self.p_one[0] * wm
        den = self.p_level[1] * wp + self.p_level[0] * wm
        if np.any(den <= 0):
            raise UndefinedConditionalError("posterior denominator vanished")
        return np.clip(num / den, 0.0, 1.0)

    def density(self, obs):
        """Unnormalised joint density of the observation and the cell."""
        obs = np.asarray(obs, dtype=float)
        s = self.sigma
        phi_p = np.exp(-0.5 * ((obs - 1.0) / s) ** 2)
        phi_m = np.exp(-0.5 * ((obs + 1.0) / s) ** 2)
        c = 0.5 / (s * math.sqrt(2.0 * math.pi) * self.mass)
        return c * (self.p_level[1] * self.extra[1] * phi_p + self.p_level[0] * self.extra[0] * phi_m)

    def entropy_bits(self):
        def f(x):
            g = self.density(x)
            return np.vstack([g, g * binary_entropy_nats(self.posterior(x))])

        tot = np.zeros(2)
        for lo, hi in self.regions:
            tot += quadrature.integrate(f, lo, hi, tol=QUAD_TOL)
        if tot[0] <= 0:
            raise UndefinedConditionalError("cell carries no integrable mass")
        return float(np.clip(tot[1] / tot[0] / LN2, 0.0, 1.0))


def posterior_bit(target, conditioner, obs, cell, params: ModelParams, t: Thresholds, table=None):
    """P(target hard bit = 1 | conditioner's observation ``obs``, cell)."""
    table = table or build_cell_table(params, t)
    return _Problem(target, conditioner, cell, table).posterior(obs)


def conditional_bit_entropy(target, conditioner, cell, params: ModelParams, t: Thresholds, table=None) -> float:
    """H(target hard bit | conditioner observation, W_A = w_a, W_B = w_b) in bits."""
    table = table or build_cell_table(params, t)
    return _Problem(target, conditioner, cell, table).entropy_bits()


def classify_cell(h_xz, h_xy, h_yz, h_yx) -> Label:
    """Sort a cell into Alice's set, Bob's set, or neither.

    Ties between the two gains go to Alice (``>=`` against ``>``).
    """
    dx = h_xz - h_xy
    dy = h_yz - h_yx
    if dx >= max(0.0, dy):
        return Label.USE_X
    if dy > max(0.0, dx):
        return Label.USE_Y
    return Label.DISCARD


@dataclass
class RateReport:
    params: ModelParams
    thresholds: Thresholds
    weights: np.ndarray
    #: entropies[w_a, w_b] = (H(X~|Z), H(X~|Y), H(Y~|Z), H(Y~|X)); NaN for zero-probability cells
    entropies: np.ndarray
    labels: list = field(default_factory=list)
    contributions: np.ndarray = None
    tail_mass: float = TAIL_MASS

    @property
    def soft_rate(self) -> float:
        return float(np.sort(self.contributions.ravel()).sum())

    @property
    def diff_x(self):
        return self.entropies[..., 0] - self.entropies[..., 1]

    @property
    def diff_y(self):
        return self.entropies[..., 2] - self.entropies[..., 3]

    def mask(self, label: Label) -> np.ndarray:
        return np.array([[lab is label for lab in row] for row in self.labels])

    # Aggregate entropies of the distilled variables, bits per satellite symbol.
    @property
    def h_xdelta_given_y(self) -> float:
        return _masked_sum(self.weights, self.entropies[..., 1], self.mask(Label.USE_X))

    @property
    def h_ydelta_given_x(self) -> float:
        return _masked_sum(self.weights, self.entropies[..., 3], self.mask(Label.USE_Y))

    @property
    def h_pair_given_z(self) -> float:
        return (_masked_sum(self.weights, self.entropies[..., 0], self.mask(Label.USE_X))
                + _masked_sum(self.weights, self.entropies[..., 2], self.mask(Label.USE_Y)))

    @property
    def keep_fraction(self) -> float:
        keep = self.mask(Label.USE_X) | self.mask(Label.USE_Y)
        return float(self.weights[keep].sum())

    def to_dict(self) -> dict:
        n = self.weights.shape[0]
        cells = []
        for i in range(n):
            for j in range(n):
                e = self.entropies[i, j]
                cells.append({
                    "w_a": i, "w_b": j,
                    "weight": float(self.weights[i, j]),
                    "h_x_given_z": _num(e[0]), "h_x_given_y": _num(e[1]),
                    "h_y_given_z": _num(e[2]), "h_y_given_x": _num(e[3]),
                    "label": self.labels[i][j].value,
                    "contribution": float(self.contributions[i, j]),
                })
        return {
            "params": self.params.as_dict(),
            "thresholds": list(self.thresholds.a),
            "soft_rate": self.soft_rate,
            "h_xdelta_given_y": self.h_xdelta_given_y,
            "h_ydelta_given_x": self.h_ydelta_given_x,
            "h_pair_given_z": self.h_pair_given_z,
            "tail_mass": self.tail_mass,
            "cells": cells,
        }


def _num(v):
    return None if np.isnan(v) else float(v)


def _masked_sum(w, h, m):
    return float(np.sum(np.where(m, w * np.nan_to_num(h), 0.0)))


def cell_entropies(table: CellTable, cell) -> np.ndarray:
    """The quadruple (H(X~|Z), H(X~|Y), H(Y~|Z), H(Y~|X)) for one cell."""
    return np.array([
        _Problem("x", "z", cell, table).entropy_bits(),
        _Problem("x", "y", cell, table).entropy_bits(),
        _Problem("y", "z", cell, table).entropy_bits(),
        _Problem("y", "x", cell, table).entropy_bits(),
    ])


def soft_rate_lower_bound(params: ModelParams, t: Thresholds) -> RateReport:
    """Evaluate the soft-decision lower bound on the secret key rate.

    Returns the per-cell entropies, the keep/discard labels and the
    contributions ``P(w_a, w_b) * max(0, diffX, diffY)`` whose sum is the rate.
    """
    table = build_cell_table(params, t)
    n = t.n_levels
    ent = np.full((n, n, 4), np.nan)
    labels = [[Label.DISCARD] * n for _ in range(n)]
    contrib = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            try:
                q = cell_entropies(table, (i, j))
            except UndefinedConditionalError:
                continue
            ent[i, j] = q
            labels[i][j] = classify_cell(*q)
            contrib[i, j] = table.joint[i, j] * max(0.0, q[0] - q[1], q[2] - q[3])
    return RateReport(params, t, table.joint, ent, labels, contrib)
