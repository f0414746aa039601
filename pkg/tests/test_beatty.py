import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from beatty_zeta.beatty import (PulseWave, beatty_count, beatty_terms, calibrate_truncation_constant,
                                fourier_coeff, indicator, indicator_array, pulse_wave_eval,
                                truncated_indicator)
from beatty_zeta.diophantine import HighPrecision, Quadratic, golden, sqrt2
from beatty_zeta.errors import DomainError, PrecisionError

mpmath.mp.dps = 40
PHI = golden()
G = PHI.gamma.value


def test_beatty_terms_examples():
    assert beatty_terms(PHI, 8).tolist() == [1, 3, 4, 6, 8, 9, 11, 12]
    assert beatty_terms(sqrt2(), 5).tolist() == [1, 2, 4, 5, 7]
    gaps = np.diff(beatty_terms(PHI, 10**4))
    assert set(gaps.tolist()) == {1, 2}
    with pytest.raises(DomainError):
        beatty_terms(PHI, 0)


def test_beatty_terms_against_mpmath():
    alpha = Quadratic(1, 1, 3, 1)
    terms = beatty_terms(alpha, 2000)
    a = 1 + mpmath.sqrt(3)
    assert terms.tolist() == [int(mpmath.floor(a * m)) for m in range(1, 2001)]


def test_pulse_wave_examples():
    assert pulse_wave_eval(G, 0.3) == 1
    assert pulse_wave_eval(PHI.gamma, G) == 0.5
    assert pulse_wave_eval(G, 0.9) == 0
    assert pulse_wave_eval(G, 3.0) == 0.5
    assert PulseWave(G)(1.3) == 1


def test_pulse_wave_highprecision_ambiguity():
    g = HighPrecision("0.6180339887").reciprocal().reciprocal()
    with pytest.raises(PrecisionError):
        pulse_wave_eval(g, 0.61803398875)


def test_indicator_examples():
    assert indicator(PHI, 3) == 1 and indicator(PHI, 2) == 0
    assert indicator(PHI, 0) == 0.5 and indicator(PHI, -1) == 0.5
    assert indicator(PHI, -4) == 1


def test_indicator_is_pulse_of_minus_n_gamma():
    for n in range(-300, 300):
        if n in (0, -1):
            continue
        t = float(mpmath.frac(-n * (mpmath.sqrt(5) - 1) / 2))
        assert indicator(PHI, n) == pulse_wave_eval(G, t)


def test_indicator_symmetry_and_membership():
    n = np.arange(-10**5, 10**5 + 1)
    np.testing.assert_array_equal(indicator_array(PHI, n), indicator_array(PHI, -n - 1))
    for alpha in (PHI, sqrt2()):
        members = set(beatty_terms(alpha, math.ceil(10**4 / alpha.value) + 2).tolist())
        ind = indicator_array(alpha, np.arange(1, 10**4 + 1))
        assert all((v == 1) == (m in members) for m, v in zip(range(1, 10**4 + 1), ind))


def test_counting_function_density():
    N = np.arange(1, 10**6 + 1)
    C = np.cumsum(indicator_array(PHI, N))
    assert np.max(np.abs(C - G * N)) <= 1
    for n in (1, 10, 1000, 999999):
        assert beatty_count(PHI, n) == C[n - 1]


def test_fourier_coeff_examples():
    assert fourier_coeff(PHI.gamma, 0) == pytest.approx(G)
    g = (mpmath.sqrt(5) - 1) / 2
    ref = (1 - mpmath.expjpi(-2 * g)) / (2j * mpmath.pi)
    c = fourier_coeff(PHI.gamma, 1)
    assert abs(c - complex(ref)) < 1e-15
    assert c == pytest.approx(-0.10750 - 0.27651j, abs=1e-5)
    k = np.arange(1, 101)
    np.testing.assert_allclose(np.abs(fourier_coeff(PHI.gamma, k)),
                               np.abs(np.sin(np.pi * k * G)) / (np.pi * k), atol=1e-15)
    np.testing.assert_allclose(fourier_coeff(PHI.gamma, -k), np.conj(fourier_coeff(PHI.gamma, k)))


def test_fourier_coeff_large_k_against_mpmath():
    g = (mpmath.sqrt(5) - 1) / 2
    for k in (12345, 10**7 + 3, -(2**25 - 1)):
        ref = (1 - mpmath.expjpi(-2 * k * g)) / (2j * mpmath.pi * k)
        assert abs(fourier_coeff(PHI.gamma, k) - complex(ref)) < 1e-15 / abs(k) * 10


def test_truncated_indicator_at_zero_converges():
    errs = []
    for K in (10**2, 10**3, 10**4):
        v, bound = truncated_indicator(PHI, 0, K)
        errs.append(abs(v - 0.5))
        assert errs[-1] <= bound
    assert errs[0] > errs[1] > errs[2]
    v, bound = truncated_indicator(PHI, 3, 10**5)
    assert abs(v - 1) <= bound


def test_truncated_indicator_random_sample():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(-10**4, 10**4 + 1))
        K = int(2 ** rng.integers(4, 12))
        v, bound = truncated_indicator(PHI, n, K)
        assert abs(v.imag) <= bound
        assert abs(v - indicator(PHI, n)) <= bound


def test_truncation_bound_scales_as_one_over_k():
    bounds = [truncated_indicator(PHI, 17, 2**j)[1] for j in range(4, 12)]
    ratios = [a / b for a, b in zip(bounds, bounds[1:])]
    assert all(1 <= r <= 4 for r in ratios)
    assert calibrate_truncation_constant(PHI) > 0


@given(st.integers(-10**6, 10**6))
def test_indicator_three_valued(n):
    v = indicator(PHI, n)
    assert v in (0.0, 0.5, 1.0)
    assert (v == 0.5) == (n in (0, -1))
