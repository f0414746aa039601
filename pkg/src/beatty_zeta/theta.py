"""Two-parameter theta function and the Gaussian series behind the continuation.

``Theta_{v,w}(u) = e(vw/2) * sum_n exp(-pi (n+v)^2 u) e(w n)`` satisfies the
inversion ``Theta_{v,w}(u) = u^{-1/2} Theta_{w,-v}(1/u)``.  On top of it:

* ``psi(r, q; u)       = sum_n exp(-pi (n+q)^2 u) e(r n)``
* ``psi_alpha(r, q; u) = sum_n exp(-pi (n+q)^2 u) ind(n) e(r n)``
* ``Phi(u)             = psi_alpha - gamma * psi``

``Phi`` has a second representation obtained by expanding ``ind(n) - gamma``
in the pulse-wave Fourier series and applying the inversion to each mode.
Only modes with ``r - k*gamma`` close to an integer survive as ``u -> 0``;
an exact lattice hit ``r = k*gamma + l`` leaves ``Phi(u) ~ A u^{-1/2}`` with
``A`` the Fourier coefficient at ``k``.
"""

from __future__ import annotations

import cmath
import math
import threading
from functools import cached_property

import numpy as np
from scipy.special import erfc

from .beatty import fourier_coeff, indicator_array
from .diophantine import IrrationalNumber, as_alpha, lattice_decompose, mul_mod1
from .errors import BudgetExceeded, DomainError
from .special import EvalResult

__all__ = [
    "theta",
    "psi",
    "psi_plus",
    "psi_envelope",
    "PhiContext",
    "psi_alpha",
    "psi_alpha_plus",
    "phi_direct",
    "phi_transformed",
    "small_u_amplitude",
    "gaussian_radius",
]

EPS_QUAD = 1e-16
_LN_INV_EPS = math.log(1.0 / EPS_QUAD)
_EPS = 2.0**-52
ENVELOPE_C = 3.0


def _e(x):
    return np.exp(2j * np.pi * x)


def gaussian_radius(u: float, eps: float = EPS_QUAD) -> float:
    """Radius ``R`` with ``exp(-pi x^2 u) < eps`` for ``|x| > R - 2``."""
    return math.sqrt(math.log(1.0 / eps) / (math.pi * u)) + 2.0


def _gauss_tail(R: float, u: float) -> float:
    """Bound for ``sum_{|n+v| > R} exp(-pi (n+v)^2 u)`` (both sides)."""
    a = R - 1.0
    if a <= 0:
        return math.inf
    return 2.0 * math.exp(-math.pi * a * a * u) * (1.0 + 1.0 / (2.0 * math.pi * a * u))


def _theta_direct(v: float, w: float, u: float) -> tuple[complex, float]:
    R = gaussian_radius(u)
    n = np.arange(math.floor(-v - R), math.ceil(-v + R) + 1, dtype=np.int64)
    x = n + v
    _, fw = mul_mod1(w, n)
    terms = np.exp(-math.pi * x * x * u)
    val = np.sum(terms * _e(fw))
    err = _gauss_tail(R, u) + 4 * _EPS * float(np.sum(terms))
    return complex(cmath.exp(1j * math.pi * v * w) * val), err


def theta(v: float, w: float, u: float, method: str = "auto") -> complex:
    """The theta function ``Theta_{v,w}(u)`` for real ``v, w`` and ``u > 0``.

    ``method="auto"`` sums directly for ``u >= 1`` and applies the inversion
    for ``u < 1``, so only O(1) terms are ever needed.  ``method="direct"``
    always sums the defining series (used to validate the inversion).
    """
    u = float(u)
    if not u > 0:
        raise DomainError("u must be positive")
    v = float(v)
    w = float(w)
    if method == "direct" or (method == "auto" and u >= 1.0):
        return _theta_direct(v, w, u)[0]
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    return u**-0.5 * _theta_direct(w, -v, 1.0 / u)[0]


def psi(r: float, q: float, u: float, method: str = "auto") -> complex:
    """``sum_n exp(-pi (n+q)^2 u) e(r n)``, computed as ``e(-qr/2) Theta_{q,r}(u)``."""
    return cmath.exp(-1j * math.pi * q * r) * theta(q, r, u, method)


def _half_sum(coef_fn, q: float, u: float) -> complex:
    R = gaussian_radius(u)
    n = np.arange(0, max(1, math.ceil(R - q)) + 1, dtype=np.int64)
    return complex(np.sum(np.exp(-math.pi * (n + q) ** 2 * u) * coef_fn(n)))


def psi_plus(r: float, q: float, u: float) -> complex:
    """One-sided sum ``sum_{n>=0} exp(-pi (n+q)^2 u) e(r n)``."""
    return _half_sum(lambda n: _e(mul_mod1(r, n)[1]), q, u)


def psi_envelope(q: float, u: float) -> float:
    """Envelope ``3 exp(-pi min(q,1-q)^2 u)`` valid for ``u >= 1``."""
    m = min(q - math.floor(q), math.ceil(q) - q)
    return ENVELOPE_C * math.exp(-math.pi * m * m * u)


class PhiContext:
    """Parameters of ``Phi`` plus cached coefficient tables.

    Parameters
    ----------
    alpha : IrrationalNumber
        Beatty modulus, ``alpha > 1``.
    r : float
        Twist.  Lattice membership ``r = k*gamma + l`` is detected by a scan
        over ``|k| <= K_max`` at tolerance ``tol`` unless ``hit`` is given.
    q : float
        Shift in ``(0, 1)``.
    kind : {"beatty", "lerch"}
        ``"beatty"`` builds ``Phi = psi_alpha - gamma*psi``; ``"lerch"``
        builds ``psi`` alone (the Lipschitz-Lerch pair).
    hit : tuple, optional
        Known decomposition ``(k, l)``; skips the scan.
    """

    def __init__(self, alpha: IrrationalNumber, r: float, q: float, *, kind: str = "beatty",
                 K_max: int = 10**6, tol: float = 1e-12, hit=None, term_cap: int = 10**7):
        self.alpha = as_alpha(alpha)
        self.gamma_exact = self.alpha.gamma
        self.gamma = self.gamma_exact.value
        self.r = float(r)
        self.q = float(q)
        if not 0.0 < self.q < 1.0:
            raise DomainError("q must lie in (0, 1)")
        if kind not in ("beatty", "lerch"):
            raise DomainError(f"unknown kind {kind!r}")
        self.kind = kind
        self.K_max = int(K_max)
        self.tol = float(tol)
        self.term_cap = int(term_cap)
        if hit is None and kind == "beatty":
            hit = lattice_decompose(self.gamma_exact, self.r, self.K_max, self.tol)
        self.hit = None if hit is None else (int(hit[0]), int(hit[1]))
        if kind == "beatty" and self.hit is not None and self.hit[0] != 0:
            self.A = complex(fourier_coeff(self.gamma_exact, self.hit[0]))
        else:
            self.A = 0j
        self._table = (-1, np.zeros(0, dtype=complex))
        self._lock = threading.Lock()

    @classmethod
    def from_lattice(cls, alpha: IrrationalNumber, k: int, l: int, q: float, **kw) -> "PhiContext":
        """Context for ``r = k*gamma + l`` with the decomposition known exactly."""
        alpha = as_alpha(alpha)
        r = float(k * alpha.gamma.to_decimal(30) + l)
        return cls(alpha, r, q, hit=(k, l), **kw)

    def __repr__(self) -> str:
        return f"PhiContext(alpha={self.alpha!r}, r={self.r!r}, q={self.q!r}, kind={self.kind!r}, hit={self.hit})"

    @property
    def is_integer_r(self) -> bool:
        return self.r == math.floor(self.r)

    @cached_property
    def phase_r(self) -> complex:
        """``e^{pi i r}``."""
        return cmath.exp(1j * math.pi * self.r)

    def coefficients(self, n: np.ndarray) -> np.ndarray:
        """Series coefficients at integers ``n``."""
        n = np.asarray(n, dtype=np.int64)
        ph = _e(mul_mod1(self.r, n)[1])
        if self.kind == "lerch":
            return ph
        return (indicator_array(self.alpha, n) - self.gamma) * ph

    def coefficient_table(self, N: int) -> np.ndarray:
        """Coefficients for ``n = -N..N`` (cached and grown on demand)."""
        with self._lock:
            have, table = self._table
            if N > have:
                have = max(N, int(1.25 * have))
                table = self.coefficients(np.arange(-have, have + 1, dtype=np.int64))
                self._table = (have, table)
        off = have - N
        return table[off: off + 2 * N + 1]

    def near_hit_distances(self, n_max: int) -> np.ndarray:
        """Distance of ``-n*gamma`` to the jumps ``{0, gamma}`` for ``n = -n_max..n_max``."""
        n = np.arange(-n_max, n_max + 1, dtype=np.int64)
        _, f0 = self.gamma_exact.mul_mod1(n)
        _, f1 = self.gamma_exact.mul_mod1(n + 1)
        d0 = np.minimum(f0, 1 - f0)
        d1 = np.minimum(f1, 1 - f1)
        return np.minimum(d0, d1)


def _series_sum(ctx: PhiContext, q: float, u: float, cap: int, table_limit: int = 400_000,
                chunk: int = 1 << 20) -> tuple[complex, float]:
    """``sum_n exp(-pi (n+q)^2 u) c_n`` with a tail-plus-rounding estimate."""
    R = gaussian_radius(u)
    lo = math.floor(-q - R)
    hi = math.ceil(-q + R)
    count = hi - lo + 1
    if count > cap:
        raise BudgetExceeded(f"direct sum needs {count} terms (cap {cap})")
    N = max(abs(lo), abs(hi))
    tail = _gauss_tail(R, u) * (1.0 + ctx.gamma)
    if N <= table_limit:
        c = ctx.coefficient_table(N)[lo + N: hi + N + 1]
        n = np.arange(lo, hi + 1, dtype=float)
        w = np.exp(-math.pi * (n + q) ** 2 * u)
        return complex(np.dot(w, c)), tail + 4 * _EPS * float(np.sum(w))
    total = 0j
    wsum = 0.0
    for a in range(lo, hi + 1, chunk):
        b = min(hi + 1, a + chunk)
        n = np.arange(a, b, dtype=np.int64)
        w = np.exp(-math.pi * (n + q) ** 2 * u)
        total += complex(np.dot(w, ctx.coefficients(n)))
        wsum += float(np.sum(w))
    return total, tail + 4 * _EPS * wsum


def psi_alpha(ctx: PhiContext, u: float) -> EvalResult:
    """``sum_n exp(-pi (n+q)^2 u) ind(n) e(r n)`` with a tail bound."""
    if not u > 0:
        raise DomainError("u must be positive")
    R = gaussian_radius(u)
    n = np.arange(math.floor(-ctx.q - R), math.ceil(-ctx.q + R) + 1, dtype=np.int64)
    w = np.exp(-math.pi * (n + ctx.q) ** 2 * u)
    val = np.sum(w * indicator_array(ctx.alpha, n) * _e(mul_mod1(ctx.r, n)[1]))
    return EvalResult(complex(val), _gauss_tail(R, u) + 4 * _EPS * float(np.sum(w)), "direct-series")


def psi_alpha_plus(alpha: IrrationalNumber, r: float, q: float, u: float) -> complex:
    """One-sided ``sum_{n>=0} exp(-pi (n+q)^2 u) ind(n) e(r n)``."""
    return _half_sum(lambda n: indicator_array(alpha, n) * _e(mul_mod1(r, n)[1]), q, u)


def phi_direct(ctx: PhiContext, u: float, u_floor: float = 1e-12) -> EvalResult:
    """``Phi(u)`` by direct summation; cost grows like ``u^{-1/2}``.

    For ``kind="lerch"`` contexts this is ``psi`` itself.
    """
    u = float(u)
    if not u > 0:
        raise DomainError("u must be positive")
    if u < u_floor:
        raise DomainError(f"u={u:g} below u_floor={u_floor:g}")
    v, err = _series_sum(ctx, ctx.q, u, ctx.term_cap)
    return EvalResult(v, err, "direct-series")


def _window_width(delta_min: float, K: int) -> float:
    # exp(-k^2/(2 sigma^2)) < 1e-16 once |k| > 8.6 sigma
    return min(K / 8.6, 3.0 / max(delta_min, 1e-300))


def phi_transformed(ctx: PhiContext, u: float, K: int = 10**6) -> EvalResult:
    """``Phi(u)`` from the inverted Fourier-mode representation.

    ``Phi(u) = u^{-1/2} sum_{k != 0} W(k) X~(k) G(r - k*gamma)`` with
    ``G(x) = sum_n exp(-pi (n+x)^2 / u) e(-q (n+x))``.  A Gaussian window
    ``W(k) = exp(-k^2 / (2 sigma^2))`` replaces the sharp cutoff at ``K``:
    it smooths the indicator by a Gaussian of width ``1/(2 pi sigma)``,
    so the representation error at each ``n`` is an explicit erfc of the
    distance from ``-n*gamma`` to the jumps.  That error, summed against the
    Gaussian weights, is the returned estimate.
    """
    u = float(u)
    if not u > 0:
        raise DomainError("u must be positive")
    if K < 2:
        raise DomainError("K must be >= 2")
    if ctx.kind != "beatty":
        raise DomainError("phi_transformed applies to beatty contexts")
    q = ctx.q
    R = gaussian_radius(u)
    n_max = int(math.ceil(R + 1))
    if 2 * n_max + 1 > ctx.term_cap:
        raise BudgetExceeded("error estimate needs too many terms")
    dist = ctx.near_hit_distances(n_max)
    n = np.arange(-n_max, n_max + 1)
    wn = np.exp(-math.pi * (n + q) ** 2 * u)
    jump = (n == 0) | (n == -1)
    sigma = _window_width(float(np.min(dist[~jump])), K)
    k_cut = int(min(K, math.ceil(8.6 * sigma)))
    window_err = float(np.sum(wn[~jump] * 0.5 * erfc(math.sqrt(2) * math.pi * sigma * dist[~jump])))

    kpos = np.arange(1, k_cut + 1, dtype=np.int64)
    k = np.concatenate([kpos, -kpos])
    x_floor, x_frac = mul_mod1(ctx.gamma_exact, k)
    # x = r - k*gamma reduced to [-1/2, 1/2)
    x = (ctx.r - math.floor(ctx.r)) - x_frac
    x -= np.round(x)
    Wk = np.exp(-0.5 * (k / sigma) ** 2)
    Xk = fourier_coeff(ctx.gamma_exact, k)
    Rg = math.sqrt(_LN_INV_EPS * u / math.pi) + 1.0
    m = np.arange(-math.ceil(Rg), math.ceil(Rg) + 1)
    G = np.zeros(k.size, dtype=complex)
    for mm in m:
        y = mm + x
        G += np.exp(-math.pi * y * y / u) * _e(-q * y)
    amp = Wk * Xk
    val = u**-0.5 * np.sum(amp * G)
    rounding = 8 * _EPS * u**-0.5 * float(np.sum(np.abs(amp * G)))
    k_tail = u**-0.5 * math.exp(-0.5 * (k_cut / sigma) ** 2) * 2 * (1 + math.sqrt(u)) * math.log(k_cut + 2)
    return EvalResult(complex(val), window_err + rounding + k_tail, "transformed")


def small_u_amplitude(ctx: PhiContext) -> complex:
    """Coefficient ``A`` of the ``u^{-1/2}`` growth of ``Phi`` as ``u -> 0``.

    ``A = X~(k)`` for a lattice hit ``r = k*gamma + l`` with ``k != 0``;
    zero otherwise, including integer ``r`` whose ``k = 0`` mode is already
    removed by the ``-gamma*psi`` subtraction.
    """
    return ctx.A
