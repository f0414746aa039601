"""Beatty sequences, the three-valued indicator on Z, and its Fourier model.

With ``gamma = 1/alpha``, an integer ``n`` belongs to the Beatty sequence
``floor(alpha*m)`` exactly when ``{-n*gamma}`` lies in ``(0, gamma)``.  The
pulse wave ``X`` (indicator of ``(0, gamma)`` mod 1, halved at the two jumps)
therefore extends the indicator to every integer via
``ind(n) = X(-n*gamma)``; it equals 1/2 only at ``n = 0`` and ``n = -1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .diophantine import HighPrecision, IrrationalNumber, as_alpha, mul_mod1
from .errors import DomainError, PrecisionError

__all__ = [
    "PulseWave",
    "beatty_terms",
    "beatty_count",
    "pulse_wave_eval",
    "indicator",
    "indicator_array",
    "fourier_coeff",
    "truncated_indicator",
    "calibrate_truncation_constant",
]


def _gamma_of(alpha: IrrationalNumber) -> IrrationalNumber:
    return as_alpha(alpha).gamma


def beatty_terms(alpha: IrrationalNumber, M: int) -> np.ndarray:
    """The first ``M`` terms ``floor(alpha*m)``, ``m = 1..M`` (exact)."""
    if M < 1:
        raise DomainError("M must be >= 1")
    return as_alpha(alpha).mul_mod1(np.arange(1, M + 1, dtype=np.int64))[0]


def beatty_count(alpha: IrrationalNumber, N: int) -> int:
    """Number of Beatty terms ``<= N``, which is ``floor((N+1)/alpha)``."""
    if N < 0:
        return 0
    return _gamma_of(alpha).floor_exact(N + 1)


def pulse_wave_eval(gamma, t: float) -> float:
    """The pulse wave: 1 on ``(0, gamma)`` mod 1, 1/2 at the jumps, else 0.

    ``gamma`` may be a float in (0, 1) or an IrrationalNumber; for a
    :class:`HighPrecision` gamma a ``t`` whose fractional part cannot be
    separated from ``gamma`` raises :class:`PrecisionError`.
    """
    g = gamma.value if isinstance(gamma, IrrationalNumber) else float(gamma)
    if not 0.0 < g < 1.0:
        raise DomainError("gamma must lie in (0, 1)")
    f = t - math.floor(t)
    if isinstance(gamma, HighPrecision):
        slack = float(gamma.width) + 4e-16 * max(1.0, abs(t))
        if abs(f - g) <= slack and f != g:
            raise PrecisionError("fractional part indistinguishable from gamma")
    if f == 0.0 or f == g:
        return 0.5
    return 1.0 if f < g else 0.0


def indicator_array(alpha: IrrationalNumber, n) -> np.ndarray:
    """Vectorised indicator with exact floors: 1, 0, or 1/2 at ``n in {0, -1}``."""
    gamma = _gamma_of(alpha)
    n = np.asarray(n, dtype=np.int64)
    f0, _ = gamma.mul_mod1(n)
    f1, _ = gamma.mul_mod1(n + 1)
    out = (f1 - f0).astype(np.float64)
    out[(n == 0) | (n == -1)] = 0.5
    return out


def indicator(alpha: IrrationalNumber, n: int) -> float:
    """Indicator of the Beatty sequence extended to all of Z.

    Examples
    --------
    >>> from beatty_zeta.diophantine import golden
    >>> indicator(golden(), 3), indicator(golden(), 2), indicator(golden(), 0)
    (1.0, 0.0, 0.5)
    """
    n = int(n)
    if n in (0, -1):
        return 0.5
    gamma = _gamma_of(alpha)
    return float(gamma.floor_exact(n + 1) - gamma.floor_exact(n))


def fourier_coeff(gamma, k):
    """Fourier coefficients of the pulse wave.

    ``gamma`` at ``k = 0`` and ``(1 - e(-k*gamma)) / (2*pi*i*k)`` otherwise.
    Accepts a scalar or an integer array ``k``; the phase is reduced mod 1
    before exponentiation so large ``|k|`` keeps full accuracy.
    """
    g = gamma.value if isinstance(gamma, IrrationalNumber) else float(gamma)
    if not 0.0 < g < 1.0:
        raise DomainError("gamma must lie in (0, 1)")
    scalar = np.isscalar(k)
    k = np.atleast_1d(np.asarray(k, dtype=np.int64))
    _, frac = mul_mod1(gamma, k)
    out = np.empty(k.shape, dtype=complex)
    nz = k != 0
    out[nz] = (1.0 - np.exp(-2j * np.pi * frac[nz])) / (2j * np.pi * k[nz])
    out[~nz] = g
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class PulseWave:
    """The pulse wave for a fixed ``gamma`` with coefficient access."""

    gamma: object

    def __call__(self, t: float) -> float:
        return pulse_wave_eval(self.gamma, t)

    def coefficient(self, k):
        return fourier_coeff(self.gamma, k)


def _partial_fourier(gamma, n: int, K: int) -> complex:
    """``sum_{|k|<=K} X~(k) e(-k*gamma*n)``."""
    _, fn = mul_mod1(gamma, np.array([n]))
    fn = float(fn[0])
    k = np.arange(1, K + 1, dtype=np.int64)
    coef = fourier_coeff(gamma, k)
    ph = k * fn
    ph -= np.floor(ph)
    e_minus = np.exp(-2j * np.pi * ph)
    g = gamma.value if isinstance(gamma, IrrationalNumber) else float(gamma)
    # X~(-k) = conj X~(k)
    return complex(g + np.sum(coef * e_minus) + np.sum(np.conj(coef) * np.conj(e_minus)))


@lru_cache(maxsize=32)
def calibrate_truncation_constant(alpha: IrrationalNumber, eps: float = 0.05) -> float:
    """Empirical constant ``C`` in ``|err| <= C*max(1, |n|**(tau+eps))/K``.

    Maximises ``K*|err|/max(1, |n|**(tau+eps))`` over ``n in [-100, 100]``
    and ``K in {16, ..., 4096}`` and doubles the result.
    """
    alpha = as_alpha(alpha)
    gamma = alpha.gamma
    tau = alpha.type_estimate
    best = 0.0
    Ks = [2**j for j in range(4, 13)]
    for n in range(-100, 101):
        exact = indicator(alpha, n)
        w = max(1.0, abs(n) ** (tau + eps))
        for K in Ks:
            err = abs(_partial_fourier(gamma, n, K) - exact)
            best = max(best, K * err / w)
    return 2.0 * best


def truncated_indicator(alpha: IrrationalNumber, n: int, K: int, eps: float = 0.05) -> tuple[complex, float]:
    """Partial Fourier sum of the indicator at ``n`` with a calibrated bound.

    Returns
    -------
    value : complex
        ``sum_{|k|<=K} X~(k) e(-k*gamma*n)``; the imaginary part is pure
        rounding and is kept for inspection.
    err_bound : float
        ``C*max(1, |n|**(tau+eps))/K`` with ``C`` from
        :func:`calibrate_truncation_constant`.
    """
    if K < 2:
        raise DomainError("K must be >= 2")
    alpha = as_alpha(alpha)
    C = calibrate_truncation_constant(alpha, eps)
    bound = C * max(1.0, abs(n) ** (alpha.type_estimate + eps)) / K
    return _partial_fourier(alpha.gamma, int(n), int(K)), bound
