"""Gamma, Riemann, Hurwitz and Lipschitz-Lerch zeta functions in binary64.

Every evaluation returns an :class:`EvalResult` carrying an absolute error
estimate.  Hurwitz values use Euler-Maclaurin summation with shift
``N = ceil(|s|) + 12`` and Bernoulli numbers through ``B_30``; the last
retained correction term serves as the error estimate.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .diophantine import mul_mod1
from .errors import BudgetExceeded, DomainError, PoleError

__all__ = [
    "EvalResult",
    "bernoulli",
    "complex_gamma",
    "rgamma",
    "riemann_zeta",
    "hurwitz_zeta",
    "hurwitz_regular",
    "lerch_direct",
    "zeta_sharp",
]

_EPS = 2.0**-52


class EvalResult(NamedTuple):
    """A complex value with an absolute error estimate and a method tag."""

    value: complex
    err_est: float
    method: str

    def as_dict(self) -> dict:
        v = complex(self.value)
        return {"value": {"re": v.real, "im": v.imag}, "err_est": float(self.err_est), "method": self.method}


@lru_cache(maxsize=None)
def _bernoulli_table(n_max: int = 30) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa; B_1 = +1/2 convention is irrelevant since only even indices are used
    B = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        B.append(a[0])
    return tuple(B)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number ``B_n`` for ``0 <= n <= 30`` (``B_1 = +1/2``)."""
    if not 0 <= n <= 30:
        raise DomainError("Bernoulli numbers tabulated for 0 <= n <= 30")
    return _bernoulli_table()[n]


@lru_cache(maxsize=None)
def _em_coefficients() -> tuple[float, ...]:
    """``B_{2j} / (2j)!`` for ``j = 1..15``."""
    B = _bernoulli_table()
    return tuple(float(B[2 * j] / math.factorial(2 * j)) for j in range(1, 16))


# -- Gamma ------------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _is_nonpositive_integer(s: complex) -> bool:
    return s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real)


def _gamma_lanczos(s: complex) -> complex:
    s = s - 1
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (s + i)
    t = s + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * cmath.exp((s + 0.5) * cmath.log(t) - t) * x


def _gamma(s: complex) -> complex:
    if s.real < 0.5:
        return math.pi / (cmath.sin(math.pi * s) * _gamma_lanczos(1 - s))
    return _gamma_lanczos(s)


def complex_gamma(s: complex) -> EvalResult:
    """Gamma function by the Lanczos approximation with reflection.

    Raises
    ------
    PoleError
        At ``s = 0, -1, -2, ...``.
    """
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at s={s.real:g}")
    v = _gamma(s)
    return EvalResult(v, 2e-15 * abs(v) * (1 + abs(s)), "lanczos")


def rgamma(s: complex) -> complex:
    """Reciprocal Gamma function; entire, zero at the nonpositive integers."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        return 0j
    if s.real < 0.5:
        return cmath.sin(math.pi * s) * _gamma_lanczos(1 - s) / math.pi
    return 1.0 / _gamma_lanczos(s)


# -- Hurwitz / Riemann --------------------------------------------------------

def _expm1_over_x(x: complex) -> complex:
    """``(exp(x) - 1) / x`` without cancellation."""
    if x == 0:
        return 1.0 + 0j
    return 2.0 * cmath.exp(x / 2) * cmath.sinh(x / 2) / x


def _hurwitz_em(a: float, s: complex, regular: bool = False) -> tuple[complex, float]:
    """Euler-Maclaurin Hurwitz zeta ``sum_{n>=0} (n+a)^{-s}`` for ``a > 0``.

    With ``regular=True`` returns ``zeta(s, a) - 1/(s-1)``, finite at s=1.
    """
    N = int(math.ceil(abs(s))) + 12
    n = np.arange(N, dtype=float) + a
    logn = np.log(n)
    terms = np.exp(-s * logn)
    head = complex(np.sum(terms))
    # exp(-s log n) carries relative rounding ~ |s| log n * eps
    head_round = float(np.sum(np.abs(terms) * (2.0 + abs(s) * np.abs(logn))))
    b = N + a
    L = math.log(b)
    bs = cmath.exp(-s * L)
    if regular:
        # (b^{1-s} - 1)/(s-1) = -L * expm1((1-s)L)/((1-s)L)
        tail = -L * _expm1_over_x((1 - s) * L)
    else:
        tail = b * bs / (s - 1)
    total = head + tail + 0.5 * bs
    # B_{2j}/(2j)! * s(s+1)...(s+2j-2) * b^{-s-2j+1}
    poch = s
    power = bs / b
    term = 0j
    for j, c in enumerate(_em_coefficients(), start=1):
        term = c * poch * power
        total += term
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        power /= b * b
    err = abs(term) + 8 * _EPS * (head_round + abs(tail) * (2.0 + abs(s) * L) + 1.0)
    return total, err


def hurwitz_zeta(q: float, s: complex) -> EvalResult:
    """Hurwitz zeta ``sum_{n>=0} (n+q)^{-s}`` for ``q in (0, 1]``.

    Examples
    --------
    >>> round(hurwitz_zeta(1.0, 3).value.real, 10)
    1.2020569032
    """
    q = float(q)
    s = complex(s)
    if not 0.0 < q <= 1.0:
        raise DomainError("q must lie in (0, 1]")
    if s == 1:
        raise PoleError("Hurwitz zeta has a pole at s=1")
    v, err = _hurwitz_em(q, s)
    return EvalResult(v, err, "euler-maclaurin")


def hurwitz_regular(q: float, s: complex) -> EvalResult:
    """``zeta(s, q) - 1/(s-1)``, analytic at ``s = 1``."""
    v, err = _hurwitz_em(float(q), complex(s), regular=True)
    return EvalResult(v, err, "euler-maclaurin")


def riemann_zeta(s: complex) -> EvalResult:
    """Riemann zeta; Euler-Maclaurin for ``Re s >= -1``, reflection below."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s=1")
    if s.real >= -1.0:
        return hurwitz_zeta(1.0, s)
    if _is_nonpositive_integer(s) and int(s.real) % 2 == 0:
        return EvalResult(0j, 0.0, "reflection")
    z1, e1 = _hurwitz_em(1.0, 1 - s)
    fac = 2.0**s * math.pi ** (s - 1) * cmath.sin(math.pi * s / 2) * _gamma(1 - s)
    v = fac * z1
    return EvalResult(v, abs(fac) * e1 + 4e-15 * abs(v) * (1 + abs(s)), "reflection")


# -- Lipschitz-Lerch -----------------------------------------------------------

def _phases(z: float, n0: int, n1: int) -> np.ndarray:
    """``e(z*n)`` for ``n0 <= n < n1`` with the phase reduced exactly mod 1."""
    _, frac = mul_mod1(z, np.arange(n0, n1, dtype=np.int64))
    return np.exp(2j * np.pi * frac)


def _power_sum(z: float, q: float, s: complex, n0: int, n1: int, chunk: int = 1 << 20) -> complex:
    total = 0j
    for a in range(n0, n1, chunk):
        b = min(n1, a + chunk)
        n = np.arange(a, b, dtype=float) + q
        total += complex(np.sum(_phases(z, a, b) * np.exp(-s * np.log(n))))
    return total


def _lerch_tail(z: float, q: float, s: complex, N: int, J_max: int = 12) -> tuple[complex, float]:
    """Iterated summation by parts for ``sum_{n>=N} e(zn)(n+q)^{-s}``.

    Returns the expansion truncated at the depth ``J <= J_max`` minimising
    the remainder bound plus the rounding of the finite differences.
    """
    omega = cmath.exp(2j * math.pi * (z - math.floor(z)))
    ratio = omega / (1 - omega)
    n = np.arange(N, N + J_max + 1, dtype=float) + q
    d = np.exp(-s * np.log(n)).astype(complex)
    f0 = abs(d[0])
    coef = complex(_phases(z, N, N + 1)[0]) / (1 - omega)
    sigma = s.real
    x = N + q
    inv_sin = 1.0 / abs(math.sin(math.pi * z))
    total = 0j
    rounding = 0.0
    poch = abs(s)
    best = (math.inf, 0j)
    for J in range(1, J_max + 1):
        total += coef * d[0]
        rounding += abs(coef) * 2.0**J * _EPS * f0
        coef *= ratio
        d = np.diff(d)
        poch *= abs(s + J)
        sum_abs = poch * (x ** (-sigma - J - 1) + x ** (-sigma - J) / (sigma + J))
        bound = abs(ratio) ** J * sum_abs * inv_sin + 4 * rounding
        if bound < best[0]:
            best = (bound, total)
    return best[1], best[0]


def lerch_direct(z: float, q: float, s: complex, tol: float = 1e-14, n_cap: int = 1 << 24) -> EvalResult:
    """Lipschitz-Lerch zeta ``sum_{n>=0} e(zn) (n+q)^{-s}`` for ``Re s > 1``.

    Integer ``z`` reduces to :func:`hurwitz_zeta`.  Otherwise the head is
    summed directly and the tail by iterated summation by parts, whose
    remainder bound (from partial sums of ``e(zn)`` bounded by
    ``1/|sin(pi z)|``) is the reported error.
    """
    s = complex(s)
    q = float(q)
    if s.real <= 1.0:
        raise DomainError("lerch_direct requires Re s > 1")
    if not 0.0 < q <= 1.0:
        raise DomainError("q must lie in (0, 1]")
    if float(z) == math.floor(z):
        return hurwitz_zeta(q, s)
    z = float(z)
    N = max(64, int(2 * abs(s)) + 16)
    while True:
        tail, bound = _lerch_tail(z, q, s, N)
        if bound <= tol:
            break
        N *= 2
        if N > n_cap:
            raise BudgetExceeded(f"lerch_direct needs more than {n_cap} terms (z too close to an integer)")
    head = _power_sum(z, q, s, 0, N)
    err = bound + 4 * _EPS * (abs(head) + N * _EPS)
    return EvalResult(head + tail, err, "direct-series")


def _is_integer(x: float) -> bool:
    return float(x) == math.floor(x)


def zeta_sharp(r: float, q: float, s: complex, **kw) -> EvalResult:
    """``e^{pi i r} zeta(r,q;s) + e^{-pi i r} zeta(-r,1-q;s)``.

    Integer ``r`` reduces to Hurwitz values; otherwise ``Re s > 1`` uses
    :func:`lerch_direct` and smaller ``Re s`` the theta-Mellin continuation.
    """
    r = float(r)
    q = float(q)
    s = complex(s)
    if not 0.0 < q < 1.0:
        raise DomainError("q must lie in (0, 1)")
    if _is_integer(r):
        if s == 1:
            raise PoleError("zeta_sharp has a pole at s=1 for integer r")
        sign = -1.0 if int(r) % 2 else 1.0
        a = hurwitz_zeta(q, s)
        b = hurwitz_zeta(1 - q, s)
        return EvalResult(sign * (a.value + b.value), a.err_est + b.err_est, "euler-maclaurin")
    if s.real > 1.0:
        a = lerch_direct(r, q, s)
        b = lerch_direct(-r, 1 - q, s)
        v = cmath.exp(1j * math.pi * r) * a.value + cmath.exp(-1j * math.pi * r) * b.value
        return EvalResult(v, a.err_est + b.err_est, "direct-series")
    from .continuation import lerch_pair

    return lerch_pair(r, q, s, **kw)
