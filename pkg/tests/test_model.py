import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussmaurer.errors import ParameterError
from gaussmaurer.model import (ModelParams, binary_entropy, erfc, gaussian_cdf, gaussian_pdf,
                               snr_nnr_to_params)

# high-precision reference values (mpmath, 30 digits)
PHI_MINUS_2 = 0.0227501319481792072
ERFC_1 = 0.157299207050285130659
H_018 = 0.680077045728280
TEN_POW_MINUS_HALF = 0.316227766016837933


@pytest.mark.parametrize("snr, nnr, va, ve", [
    (0.0, 1.0, 1.0, 1.0),
    (10.0, 1.0, 0.1, 0.1),
    (5.0, 10.0, TEN_POW_MINUS_HALF, 10 * TEN_POW_MINUS_HALF),
])
def test_snr_nnr_examples(snr, nnr, va, ve):
    p = snr_nnr_to_params(snr, nnr)
    assert p.v_a == pytest.approx(va, rel=1e-14)
    assert p.v_b == p.v_a
    assert p.v_e == pytest.approx(ve, rel=1e-14)
    assert p.amplitude == 1.0


@pytest.mark.parametrize("snr, nnr", [(0.0, 0.0), (0.0, -1.0), (math.inf, 1.0), (math.nan, 1.0), (1.0, math.inf)])
def test_snr_nnr_rejects(snr, nnr):
    with pytest.raises(ParameterError):
        snr_nnr_to_params(snr, nnr)


@pytest.mark.parametrize("bad", [dict(v_a=0.0), dict(v_b=-1.0), dict(v_e=math.inf), dict(amplitude=2.0)])
def test_model_params_invariants(bad):
    kw = dict(v_a=1.0, v_b=1.0, v_e=1.0) | bad
    with pytest.raises(ParameterError):
        ModelParams(**kw)


@given(st.floats(-40, 40), st.floats(1e-3, 1e3))
def test_snr_round_trip(snr, nnr):
    p = snr_nnr_to_params(snr, nnr)
    assert abs(10 * math.log10(1 / p.v_a) - snr) <= 1e-9
    assert p.nnr == pytest.approx(nnr, rel=1e-12)
    assert p.snr_db == pytest.approx(snr, abs=1e-9)


def test_gaussian_cdf_examples():
    assert gaussian_cdf(0.0, 0.0, 1.0) == 0.5
    assert gaussian_cdf(math.inf, 0.0, 1.0) == 1.0
    assert abs(gaussian_cdf(-2.0, 0.0, 1.0) - PHI_MINUS_2) <= 1e-12


def test_gaussian_cdf_rejects_bad_variance():
    with pytest.raises(ParameterError):
        gaussian_cdf(0.0, 0.0, 0.0)
    with pytest.raises(ParameterError):
        gaussian_pdf(0.0, 0.0, -1.0)


@given(st.floats(-50, 50), st.floats(1e-4, 1e4))
def test_gaussian_cdf_at_mean(mean, var):
    assert gaussian_cdf(mean, mean, var) == pytest.approx(0.5, abs=1e-15)


def test_gaussian_cdf_monotone():
    x = np.linspace(-12, 12, 20001)
    assert np.all(np.diff(gaussian_cdf(x, 0.3, 2.0)) >= 0)


def test_erfc_examples():
    assert erfc(0.0) == 1.0
    assert erfc(40.0) == 0.0
    assert abs(erfc(1.0) - ERFC_1) <= 1e-12


def test_erfc_symmetry_grid():
    z = np.linspace(-5, 5, 2001)
    v = erfc(z)
    assert np.all((v >= 0) & (v <= 2))
    assert np.max(np.abs(v + erfc(-z) - 2.0)) <= 1e-12


def test_erfc_matches_quadrature():
    from scipy.integrate import quad

    for z in (0.1, 0.5, 1.0, 2.0, 3.5):
        ref = 2 / math.sqrt(math.pi) * quad(lambda s: math.exp(-s * s), z, np.inf, epsabs=1e-15)[0]
        assert abs(erfc(z) - ref) <= 1e-12


def test_binary_entropy_examples():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert abs(binary_entropy(0.18) - H_018) <= 1e-12


@pytest.mark.parametrize("p", [-1e-9, 1.0000001, math.nan])
def test_binary_entropy_domain(p):
    with pytest.raises(ParameterError):
        binary_entropy(p)


def test_binary_entropy_symmetry_grid():
    p = np.linspace(0.5, 1, 100001)
    h = binary_entropy(p)
    assert np.all((h >= 0) & (h <= 1))
    assert np.max(np.abs(h - binary_entropy(1 - p))) <= 1e-15


@given(st.floats(0.5, 1))
def test_binary_entropy_symmetry(p):
    # on [0.5, 1] the subtraction 1 - p is exact, so the pair really is mirrored
    assert abs(binary_entropy(p) - binary_entropy(1 - p)) <= 1e-15
