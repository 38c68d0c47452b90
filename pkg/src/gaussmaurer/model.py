"""Channel model parameters and scalar Gaussian helpers.

The satellite emits U in {-1, +1} with equal probability and the three
receivers see ``X = U + N_A``, ``Y = U + N_B`` and ``Z = U + N_E`` with
independent zero-mean Gaussian noise.  Everything downstream is expressed
through the three noise variances held by :class:`ModelParams`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ParameterError

LN2 = math.log(2.0)


@dataclass(frozen=True)
class ModelParams:
    v_a: float
    v_b: float
    v_e: float
    amplitude: float = 1.0

    def __post_init__(self):
        for name in ("v_a", "v_b", "v_e"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be a positive finite variance, got {v!r}")
        if self.amplitude != 1.0:
            raise ParameterError("the constellation is fixed at +-1")

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(1.0 / self.v_a)

    @property
    def nnr(self) -> float:
        return self.v_e / self.v_b

    def swapped(self) -> "ModelParams":
        """Exchange the roles of Alice and Bob."""
        return ModelParams(self.v_b, self.v_a, self.v_e)

    def as_dict(self) -> dict:
        return {"v_a": self.v_a, "v_b": self.v_b, "v_e": self.v_e}


def snr_nnr_to_params(snr_db: float, nnr: float) -> ModelParams:
    """Build symmetric-receiver parameters from SNR (dB) and NNR.

    SNR is ``1 / v_a`` and NNR is ``v_e / v_b`` with ``v_a == v_b``.
    """
    if not math.isfinite(snr_db):
        raise ParameterError(f"snr_db must be finite, got {snr_db!r}")
    if not (math.isfinite(nnr) and nnr > 0):
        raise ParameterError(f"nnr must be positive, got {nnr!r}")
    v = 10.0 ** (-snr_db / 10.0)
    return ModelParams(v, v, nnr * v)


def gaussian_cdf(x, mean=0.0, var=1.0):
    """P(N <= x) for N ~ normal(mean, var)."""
    if not var > 0:
        raise ParameterError(f"variance must be positive, got {var!r}")
    return special.ndtr((np.asarray(x, dtype=float) - mean) / math.sqrt(var))


def gaussian_pdf(x, mean=0.0, var=1.0):
    if not var > 0:
        raise ParameterError(f"variance must be positive, got {var!r}")
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * (x - mean) ** 2 / var) / math.sqrt(2.0 * math.pi * var)


def erfc(z):
    """Complementary error function, ``(2/sqrt(pi)) * int_z^inf exp(-t^2) dt``."""
    z = np.asarray(z, dtype=float)
    if np.any(np.isnan(z)):
        raise ParameterError("erfc argument is NaN")
    return special.erfc(z)


def binary_entropy(p):
    """Binary entropy in bits, with ``0 log 0 = 0``.

    Accepts scalars or arrays.  Values outside ``[0, 1]`` raise
    :class:`ParameterError`.
    """
    p = np.asarray(p, dtype=float)
    if np.any(~((p >= 0.0) & (p <= 1.0))):
        raise ParameterError("probability outside [0, 1]")
    nats = special.entr(p) + special.entr(1.0 - p)
    out = nats / LN2
    return float(out) if out.ndim == 0 else out


def binary_entropy_nats(p):
    """Unchecked vectorised binary entropy in nats."""
    return special.entr(p) + special.entr(1.0 - p)
