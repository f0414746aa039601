"""Theta-Mellin continuation of the symmetrised Beatty zeta function.

Notation (``P(s) = pi^{s/2} / Gamma(s/2) * e^{pi i r}``):

    Z#(s) = gamma * zeta#(s) - B(s) + P(s) * (F0(s) + Finf(s))
    B(s)  = e^{pi i r} q^{-s} / 2 + e^{-pi i r} (1-q)^{-s} / 2
    F0    = int_0^1 Phi(u) u^{s/2-1} du,   Finf = int_1^oo Phi(u) u^{s/2-1} du

``Finf`` is entire.  ``F0`` is split as

    F0 = int_{u_min}^1 (Phi - A u^{-1/2}) u^{s/2-1} du + 2A/(s-1) + neglected,

where ``A`` is the small-u amplitude (nonzero only for a lattice hit with
``k != 0``) and the neglected piece over ``(0, u_min)`` is bounded by
``C_floor * (2/sigma) * u_min^{sigma/2}`` with ``C_floor`` measured from the
smallest quadrature nodes.  Integrals run in ``t = log u`` with composite
Gauss-Legendre panels; samples of ``Phi`` are cached per context so every
additional ``s`` costs one dot product.

The same pipeline with ``Psi`` in place of ``Phi`` and no boundary terms
gives ``zeta#`` for non-integer ``r`` (:func:`lerch_pair`).
"""

from __future__ import annotations

import cmath
import csv
import io
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .beatty import fourier_coeff
from .diophantine import IrrationalNumber, as_alpha, lattice_decompose, mul_mod1
from .errors import BeattyZetaError, DomainError, PoleError, RegionUnsupported, UnsupportedInput
from .special import EvalResult, hurwitz_regular, hurwitz_zeta, rgamma, zeta_sharp
from .theta import EPS_QUAD, PhiContext, _series_sum, psi

__all__ = [
    "ContinuationConfig",
    "ZSharpResult",
    "ResidueReport",
    "MellinTable",
    "f_infty",
    "f0_regularized",
    "z_sharp",
    "z_direct",
    "z_fluctuation",
    "z_fluctuation_residue",
    "residue_at_one",
    "grid_scan",
    "scan_to_csv",
    "lerch_pair",
    "measured_amplitude",
]

_EPS = 2.0**-52
_GL_NODES = 16
_MAX_LEVEL = 4


@dataclass(frozen=True)
class ContinuationConfig:
    """Numerical parameters of the continuation.

    ``u_min`` is the lower end of the ``F0`` quadrature; ``u_switch`` marks
    the region below which ``phi_transformed`` is used as a cross-check of
    the direct sums; ``K_max`` and ``lattice_tol`` drive the lattice scan;
    ``quad_tol`` is the absolute target of each Mellin integral.
    """

    u_min: float = 1e-10
    u_switch: float = 1e-6
    K_max: int = 10**6
    quad_tol: float = 1e-12
    eps_exponent: float = 0.05
    sigma_min: float = 0.05
    lattice_tol: float = 1e-12
    panel_width: float = 1.0
    direct_margin: float = 0.5
    direct_tol: float = 1e-10
    direct_cap: int = 1 << 25
    amplitude_u: float = 1e-12
    residue_radius: float = 0.01
    residue_nodes: int = 8
    term_cap: int = 10**7

    def __post_init__(self):
        if not 0 < self.u_min <= self.u_switch <= 1:
            raise DomainError("need 0 < u_min <= u_switch <= 1")
        if self.quad_tol <= 0 or self.sigma_min <= 0:
            raise DomainError("quad_tol and sigma_min must be positive")
        if self.panel_width <= 0 or self.residue_nodes < 3:
            raise DomainError("bad quadrature parameters")

    def replace(self, **kw) -> "ContinuationConfig":
        d = asdict(self)
        d.update(kw)
        return ContinuationConfig(**d)


@dataclass(frozen=True)
class ZSharpResult:
    """Value of ``Z#`` with its pole bookkeeping.

    ``value`` is the full function value (undefined at ``s = 1`` when the
    pole is present).  ``regular`` equals ``value - pole_coefficient/(s-1)``
    and is computed without cancellation, so it stays accurate as
    ``s -> 1`` and is defined at ``s = 1``.
    """

    value: complex
    pole_coefficient: complex
    err_est: float
    region_note: str
    regular: complex
    s: complex = 0j

    def as_dict(self) -> dict:
        def c(z):
            z = complex(z)
            return {"re": z.real, "im": z.imag}

        return {"s": c(self.s), "value": c(self.value), "regular": c(self.regular),
                "pole_coefficient": c(self.pole_coefficient), "err_est": self.err_est,
                "method": self.region_note}


@dataclass(frozen=True)
class ResidueReport:
    """Residue at ``s = 1``.

    ``measured`` is the residue of the difference ``Z# - gamma*zeta#``;
    ``measured_zsharp`` that of ``Z#`` itself.  Predictions refer to the
    difference function.
    """

    measured: complex
    predicted_theorem: complex
    predicted_density: complex
    method: str
    measured_zsharp: complex = 0j
    err_est: float = 0.0
    amplitude: complex = 0j
    hit: tuple | None = None

    @property
    def matches(self) -> str:
        """Which prediction the measurement is closer to."""
        dt = abs(self.measured - self.predicted_theorem)
        dd = abs(self.measured - self.predicted_density)
        if abs(self.predicted_theorem - self.predicted_density) < 1e-12:
            return "both"
        return "theorem" if dt < dd else "density"

    def as_dict(self) -> dict:
        def c(z):
            z = complex(z)
            return {"re": z.real, "im": z.imag}

        return {"measured": c(self.measured), "measured_zsharp": c(self.measured_zsharp),
                "predicted_theorem": c(self.predicted_theorem),
                "predicted_density": c(self.predicted_density), "err_est": self.err_est,
                "method": self.method, "matches": self.matches,
                "amplitude": c(self.amplitude), "hit": list(self.hit) if self.hit else None}


# -- quadrature ----------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_NODES)


def _panel_nodes(ta: float, tb: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    npan = max(1, int(math.ceil((tb - ta) / h - 1e-9)))
    h = (tb - ta) / npan
    a = ta + h * np.arange(npan)[:, None]
    t = (a + h * (_GL_X + 1) / 2).ravel()
    w = np.tile(_GL_W * h / 2, npan)
    return t, w


class MellinTable:
    """Samples of ``g(u)`` on nested refinement levels in ``t = log u``.

    ``integrate(s)`` returns ``int g(u) u^{s/2} dt`` on ``[ta, tb]`` plus a
    level-difference error estimate, refining until ``tol`` is met.
    """

    def __init__(self, fn, ta: float, tb: float, h: float):
        self.fn = fn
        self.ta, self.tb, self.h = ta, tb, h
        self._levels: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()

    def level(self, j: int):
        with self._lock:
            if j not in self._levels:
                t, w = _panel_nodes(self.ta, self.tb, self.h / 2**j)
                vals, errs = self.fn(np.exp(t))
                self._levels[j] = (t, w, vals, errs)
            return self._levels[j]

    def _apply(self, j: int, s: complex, transform=None) -> tuple[complex, float]:
        t, w, vals, errs = self.level(j)
        if transform is not None:
            vals = transform(t, vals)
        k = np.exp(t * (s / 2))
        val = complex(np.dot(w * vals, k))
        sample_err = float(np.dot(w * errs, np.abs(k)))
        return val, sample_err

    def integrate(self, s: complex, tol: float, transform=None) -> tuple[complex, float]:
        prev, _ = self._apply(0, s, transform)
        for j in range(1, _MAX_LEVEL + 1):
            cur, serr = self._apply(j, s, transform)
            diff = abs(cur - prev)
            if diff <= tol or j == _MAX_LEVEL:
                return cur, diff + serr
            prev = cur
        raise AssertionError("unreachable")


def _phi_sampler(ctx: PhiContext):
    def fn(u: np.ndarray):
        vals = np.empty(u.size, dtype=complex)
        errs = np.empty(u.size)
        for i, ui in enumerate(u):
            vals[i], errs[i] = _series_sum(ctx, ctx.q, float(ui), ctx.term_cap)
        return vals, errs

    return fn


def _envelope_cut(q: float, scale: float, sigma_cap: float = 20.0, tol: float = 1e-18) -> float:
    """Upper limit ``U`` beyond which the envelope tail is below ``tol``."""
    m = min(q, 1 - q)
    a = math.pi * m * m
    U = 2.0
    while _envelope_tail(a, scale, U, sigma_cap) > tol:
        U *= 1.25
    return U


def _envelope_tail(a: float, scale: float, U: float, sigma: float) -> float:
    """Bound for ``int_U^oo scale*exp(-a u) u^{sigma/2-1} du``."""
    beta = sigma / 2 - 1
    denom = a - max(beta, 0.0) / U
    if denom <= 0:
        return math.inf
    return scale * math.exp(-a * U) * U**beta / denom


class _CtxTables:
    """Per-context Mellin tables, built on first use."""

    def __init__(self, ctx: PhiContext, cfg: ContinuationConfig):
        self.ctx = ctx
        self.cfg = cfg
        fn = _phi_sampler(ctx)
        self.scale = ENVELOPE * (1 + ctx.gamma)
        self.U = _envelope_cut(ctx.q, self.scale)
        self.low = MellinTable(fn, math.log(cfg.u_min), 0.0, cfg.panel_width)
        self.high = MellinTable(fn, 0.0, math.log(self.U), cfg.panel_width)
        self._floor = None
        self._amp = None
        self._lock = threading.Lock()

    def floor_constant(self) -> float:
        """``2 * max |Phi - A u^{-1/2}|`` over nodes with ``u <= 1000 u_min``."""
        with self._lock:
            if self._floor is None:
                t, _, vals, _ = self.low.level(0)
                sel = t <= math.log(1e3 * self.cfg.u_min)
                resid = vals[sel] - self.ctx.A * np.exp(-t[sel] / 2)
                self._floor = 2.0 * float(np.max(np.abs(resid)))
            return self._floor

    def amplitude(self) -> complex:
        with self._lock:
            if self._amp is None:
                self._amp = measured_amplitude(self.ctx, self.cfg.amplitude_u)
            return self._amp


ENVELOPE = 3.0
_TABLES_LOCK = threading.Lock()


def _tables(ctx: PhiContext, cfg: ContinuationConfig) -> _CtxTables:
    key = (id(ctx), cfg.u_min, cfg.panel_width)
    with _TABLES_LOCK:
        store = ctx.__dict__.setdefault("_mellin_tables", {})
        tab = store.get(key)
        if tab is None:
            tab = _CtxTables(ctx, cfg)
            store[key] = tab
        return tab


def measured_amplitude(ctx: PhiContext, u: float = 1e-12) -> complex:
    """``u^{1/2} Phi(u)`` by direct summation at a very small ``u``."""
    v, _ = _series_sum(ctx, ctx.q, u, cap=max(ctx.term_cap, int(4 * gaussian_count(u))))
    return math.sqrt(u) * v


def gaussian_count(u: float) -> float:
    return 2 * math.sqrt(math.log(1 / EPS_QUAD) / (math.pi * u)) + 6


# -- Mellin pieces -------------------------------------------------------------

def _prefactor(ctx: PhiContext, s: complex) -> complex:
    """``pi^{s/2} / Gamma(s/2) * e^{pi i r}``."""
    return math.pi ** (s / 2) * rgamma(s / 2) * ctx.phase_r


def _difference_quotient(f, s: complex, s0: complex = 1.0, radius: float = 0.2, nodes: int = 32) -> complex:
    """``(f(s) - f(s0)) / (s - s0)`` for analytic ``f``, stable near ``s0``."""
    if abs(s - s0) >= radius / 4:
        return (f(s) - f(s0)) / (s - s0)
    f0 = f(s0)
    z = s0 + radius * np.exp(2j * np.pi * (np.arange(nodes) + 0.5) / nodes)
    g = np.array([(f(zi) - f0) / (zi - s0) for zi in z])
    # Cauchy integral by the trapezoid rule on the circle
    return complex(np.mean(g * (z - s0) / (z - s)))


def f_infty(ctx: PhiContext, s: complex, cfg: ContinuationConfig = ContinuationConfig()) -> EvalResult:
    """``int_1^oo Phi(u) u^{s/2-1} du`` (entire in ``s``)."""
    s = complex(s)
    tab = _tables(ctx, cfg)
    val, err = tab.high.integrate(s, cfg.quad_tol)
    tail = _envelope_tail(math.pi * min(ctx.q, 1 - ctx.q) ** 2, tab.scale, tab.U, s.real)
    return EvalResult(val, err + tail, "continuation")


def f0_regularized(ctx: PhiContext, s: complex, cfg: ContinuationConfig = ContinuationConfig()):
    """Regular part of ``F0`` and the coefficient of its pole.

    Returns
    -------
    (EvalResult, complex)
        ``int_{u_min}^1 (Phi - A u^{-1/2}) u^{s/2-1} du`` with an error
        estimate that includes the neglected ``(0, u_min)`` segment, and the
        coefficient ``2A`` of ``1/(s-1)``.
    """
    s = complex(s)
    if s.real < cfg.sigma_min:
        raise RegionUnsupported(f"Re s = {s.real:g} below sigma_min = {cfg.sigma_min:g}")
    tab = _tables(ctx, cfg)
    A = ctx.A
    transform = None if A == 0 else (lambda t, v: v - A * np.exp(-t / 2))
    val, err = tab.low.integrate(s, cfg.quad_tol, transform)
    neglect = tab.floor_constant() * (2 / s.real) * cfg.u_min ** (s.real / 2)
    return EvalResult(val, err + neglect, "continuation"), 2 * A


def _f0_raw(ctx: PhiContext, s: complex, cfg: ContinuationConfig, amp: complex) -> tuple[complex, float]:
    """``int_{u_min}^1 Phi u^{s/2-1} du`` plus the measured-amplitude model below ``u_min``."""
    tab = _tables(ctx, cfg)
    val, err = tab.low.integrate(s, cfg.quad_tol)
    model = amp * 2 * cfg.u_min ** ((s - 1) / 2) / (s - 1)
    return val + model, err


# -- Z# -------------------------------------------------------------------------

def _boundary(ctx: PhiContext, s: complex) -> complex:
    return 0.5 * ctx.phase_r * ctx.q ** (-s) + 0.5 / ctx.phase_r * (1 - ctx.q) ** (-s)


def _gamma_zeta_sharp(ctx: PhiContext, s: complex, cfg: ContinuationConfig):
    """``(regular part, pole coefficient, err)`` of ``gamma * zeta#``."""
    g = ctx.gamma
    if ctx.is_integer_r:
        sign = -1.0 if int(ctx.r) % 2 else 1.0
        a = hurwitz_regular(ctx.q, s)
        b = hurwitz_regular(1 - ctx.q, s)
        return g * sign * (a.value + b.value), 2 * g * sign, g * (a.err_est + b.err_est)
    z = zeta_sharp(ctx.r, ctx.q, s, cfg=cfg)
    return g * z.value, 0j, g * z.err_est


def _finish(regular: complex, pole: complex, err: float, note: str, s: complex) -> ZSharpResult:
    if s == 1:
        value = complex("nan") if pole != 0 else regular
    else:
        value = regular + pole / (s - 1)
    return ZSharpResult(complex(value), complex(pole), float(err), note, complex(regular), complex(s))


def _z_sharp_continued(ctx: PhiContext, s: complex, cfg: ContinuationConfig) -> ZSharpResult:
    gz, gpole, gerr = _gamma_zeta_sharp(ctx, s, cfg)
    P = _prefactor(ctx, s)
    I0, cA = f0_regularized(ctx, s, cfg)
    Fi = f_infty(ctx, s, cfg)
    # P(s) * 2A/(s-1) = 2A P(1)/(s-1) + 2A (P(s)-P(1))/(s-1)
    dq = _difference_quotient(lambda z: _prefactor(ctx, z), s) if cA != 0 else 0j
    regular = gz - _boundary(ctx, s) + P * (I0.value + Fi.value) + cA * dq
    pole = gpole + cA * ctx.phase_r
    err = gerr + abs(P) * (I0.err_est + Fi.err_est) + 64 * _EPS * (abs(regular) + 1)
    return _finish(regular, pole, err, "continued", s)


def _z_sharp_at_zero(ctx: PhiContext, cfg: ContinuationConfig) -> ZSharpResult:
    if ctx.hit is None:
        raise RegionUnsupported("s = 0 is only covered for lattice r, where the Mellin integrand decays")
    s = 0j
    if ctx.is_integer_r:
        sign = -1.0 if int(ctx.r) % 2 else 1.0
        a = hurwitz_zeta(ctx.q, 0)
        b = hurwitz_zeta(1 - ctx.q, 0)
        gz, gerr = ctx.gamma * sign * (a.value + b.value), ctx.gamma * (a.err_est + b.err_est)
    else:
        # zeta# vanishes at s = 0 for non-integer r (prefactor zero, integrand decays)
        gz, gerr = 0j, 0.0
    value = gz - _boundary(ctx, s)
    pole = (2 * ctx.gamma * (-1.0 if int(ctx.r) % 2 else 1.0) if ctx.is_integer_r else 0j) + 2 * ctx.A * ctx.phase_r
    regular = value + pole
    return ZSharpResult(complex(value), complex(pole), gerr + 8 * _EPS, "prefactor-zero", complex(regular), s)


def _z_sharp_direct(ctx: PhiContext, s: complex, cfg: ContinuationConfig) -> ZSharpResult:
    a = z_direct(ctx.alpha, ctx.r, ctx.q, s, tol=cfg.direct_tol, cap=cfg.direct_cap, hit=ctx.hit)
    b = z_direct(ctx.alpha, -ctx.r, 1 - ctx.q, s, tol=cfg.direct_tol, cap=cfg.direct_cap,
                 hit=None if ctx.hit is None else (-ctx.hit[0], -ctx.hit[1]))
    value = ctx.phase_r * a.value + b.value / ctx.phase_r
    pole = 2 * ctx.A * ctx.phase_r
    if ctx.is_integer_r:
        pole += 2 * ctx.gamma * (-1.0 if int(ctx.r) % 2 else 1.0)
    return ZSharpResult(complex(value), complex(pole), a.err_est + b.err_est, "direct",
                        complex(value - pole / (s - 1)), complex(s))


def z_sharp(ctx: PhiContext, s: complex, cfg: ContinuationConfig = ContinuationConfig(),
            method: str = "auto") -> ZSharpResult:
    """Symmetrised Beatty zeta ``e^{pi i r} Z(r,q;s) + e^{-pi i r} Z(-r,1-q;s)``.

    Parameters
    ----------
    method : {"auto", "direct", "continued"}
        ``auto`` sums the Dirichlet series for ``Re s > 1 + direct_margin``
        and uses the Mellin continuation otherwise.

    Raises
    ------
    PoleError
        At ``s = 1`` when the total pole coefficient is nonzero.
    RegionUnsupported
        For ``Re s < sigma_min`` other than ``s = 0`` with lattice ``r``.
    """
    s = complex(s)
    if ctx.kind != "beatty":
        raise DomainError("z_sharp needs a beatty context")
    if method not in ("auto", "direct", "continued"):
        raise DomainError(f"unknown method {method!r}")
    if method == "direct" or (method == "auto" and s.real > 1 + cfg.direct_margin):
        if s.real <= 1:
            raise DomainError("direct summation needs Re s > 1")
        return _z_sharp_direct(ctx, s, cfg)
    if s == 0:
        return _z_sharp_at_zero(ctx, cfg)
    res = _z_sharp_continued(ctx, s, cfg)
    if s == 1 and res.pole_coefficient != 0:
        raise PoleError(f"Z# has a pole at s=1 with residue {res.pole_coefficient:.6g}")
    return res


# -- direct series ---------------------------------------------------------------

def _tail_constant(ctx_alpha, r: float, hit) -> complex:
    """Mean value of ``ind(n) e(r n)``: ``X~(k)`` on the lattice, else 0."""
    if hit is None:
        return 0j
    return complex(fourier_coeff(as_alpha(ctx_alpha).gamma, hit[0]))


def z_direct(alpha: IrrationalNumber, r: float, q: float, s: complex, tol: float = 1e-10,
             cap: int = 1 << 25, hit="scan", chunk: int = 1 << 21) -> EvalResult:
    """Dirichlet series ``sum_{m>=1} e(r b_m) (b_m + q)^{-s}``, ``b_m = floor(alpha m)``.

    The terms up to ``N`` are summed exactly.  The tail is replaced by its
    mean field ``c * zeta(s, N+1+q)`` with ``c`` the mean of
    ``ind(n) e(r n)``; partial summation bounds the remainder by
    ``S |s| / sigma * (N+q)^{-sigma}``, where ``S`` is twice the observed
    oscillation of the centred partial sums over the second half of the
    head.  ``N`` doubles until the estimate meets ``tol`` or ``cap``.
    """
    s = complex(s)
    alpha = as_alpha(alpha)
    r = float(r)
    q = float(q)
    if s.real <= 1:
        raise DomainError("z_direct requires Re s > 1")
    if not 0 < q < 1:
        raise DomainError("q must lie in (0, 1)")
    if isinstance(hit, str):
        hit = lattice_decompose(alpha.gamma, r, 10**6, 1e-12)
    c = _tail_constant(alpha, r, hit)
    sigma = s.real
    gamma = alpha.gamma
    chunk = max(chunk, 1 << 14)
    N = 1 << 14
    head = 0j
    D = 0j
    done = 0
    stats = []  # per chunk: (start, lo_re, hi_re, lo_im, hi_im) of the centred partial sums
    while True:
        for a in range(done + 1, N + 1, chunk):
            b = min(N + 1, a + chunk)
            term = _beatty_twisted(gamma, r, a, b)
            head += complex(np.sum(term * np.exp(-s * np.log(np.arange(a, b) + q))))
            cum = D + np.cumsum(term - c)
            D = complex(cum[-1])
            stats.append((a, float(cum.real.min()), float(cum.real.max()),
                          float(cum.imag.min()), float(cum.imag.max())))
        done = N
        window = [st for st in stats if st[0] > N // 2] or stats[-1:]
        osc = (max(st[2] for st in window) - min(st[1] for st in window)
               + max(st[4] for st in window) - min(st[3] for st in window))
        S = 2.0 * osc + 1.0
        rem = S * abs(s) / sigma * (N + q) ** (-sigma)
        if rem <= tol or 2 * N > cap:
            break
        N *= 2
    tail = c * hurwitz_zeta_shifted(N + 1 + q, s) if c != 0 else 0j
    err = rem + 64 * _EPS * N ** max(0.0, 1 - sigma)
    return EvalResult(head + tail, err, "direct-series")


def _beatty_twisted(gamma, r: float, a: int, b: int) -> np.ndarray:
    """``ind(n) e(r n)`` for ``a <= n < b`` (``a >= 1``), one floor pass."""
    fl, _ = gamma.mul_mod1(np.arange(a, b + 1, dtype=np.int64))
    ind = np.diff(fl).astype(np.float64)
    return ind * np.exp(2j * np.pi * mul_mod1(r, np.arange(a, b, dtype=np.int64))[1])


def hurwitz_zeta_shifted(a: float, s: complex) -> complex:
    """``sum_{n>=0} (n+a)^{-s}`` for ``a > 0`` (no ``q`` range restriction)."""
    from .special import _hurwitz_em

    return _hurwitz_em(a, s)[0]


# -- Abel-summation oracle -------------------------------------------------------

def z_fluctuation(alpha: IrrationalNumber, r: float, q: float, s: complex, N_max: int = 1 << 22,
                  hit="scan", chunk: int = 1 << 21) -> EvalResult:
    """``Z(r,q;s)`` by summation by parts against the exact counting function.

    Only lattice twists ``r = k*gamma + l`` are supported: then
    ``a_n = ind(n) e(r n)`` has mean ``c = X~(k)`` and centred partial sums
    ``D(n)`` that stay small, so with ``f(n) = (n+q)^{-s}``
    and ``g(n) = f(n) - f(n+1)``::

        Z = c (zeta(s,q) - q^{-s}) + sum_{n>=1} D(n) g(n).

    ``D(n) - Dbar`` again has small partial sums ``B(n)``, so a second
    summation by parts gives ``Z = c (zeta(s,q) - q^{-s}) + Dbar f(1)
    + sum_n (D(n) - Dbar) g(n)``, convergent for ``Re s > -1``.  For integer
    ``r`` the mean is exact: ``D(n) = floor((n+1) gamma) - n gamma``, so
    ``Dbar = gamma - 1/2``.  Otherwise ``Dbar`` is the empirical mean over the
    second half of the range and the result is restricted to ``Re s > 0``.
    """
    s = complex(s)
    alpha = as_alpha(alpha)
    r = float(r)
    q = float(q)
    if not 0 < q < 1:
        raise DomainError("q must lie in (0, 1)")
    if isinstance(hit, str):
        hit = lattice_decompose(alpha.gamma, r, 10**6, 1e-12)
    if hit is None:
        raise UnsupportedInput("no lattice decomposition of r; partial sums not provably bounded")
    k = hit[0]
    gamma = alpha.gamma.value
    exact_mean = k == 0
    if not exact_mean and s.real <= 0:
        raise UnsupportedInput("non-integer lattice r needs Re s > 0")
    if exact_mean and s.real <= -1:
        raise UnsupportedInput("second-order summation needs Re s > -1")
    c = _tail_constant(alpha, r, hit)
    N = int(N_max)

    def f(n):
        return np.exp(-s * np.log(n + q))

    # pass 1: centred partial sums D(n) and their mean on the second half
    D_last = 0j
    acc = 0j
    mean_acc = 0j
    mean_cnt = 0
    pieces = []
    for a in range(1, N + 1, chunk):
        b = min(N + 1, a + chunk)
        n = np.arange(a, b, dtype=np.int64)
        term = _beatty_twisted(alpha.gamma, r, a, b)
        D = D_last + np.cumsum(term - c)
        D_last = complex(D[-1])
        half = n > N // 2
        mean_acc += complex(np.sum(D[half]))
        mean_cnt += int(np.sum(half))
        pieces.append((a, b))
    Dbar = (gamma - 0.5) + 0j if exact_mean else mean_acc / mean_cnt
    # pass 2: sum (D(n) - Dbar) g(n) and the running sums of D - Dbar
    D_last = 0j
    B_last = 0j
    Bmax = 0.0
    for a, b in pieces:
        n = np.arange(a, b, dtype=np.int64)
        term = _beatty_twisted(alpha.gamma, r, a, b)
        D = D_last + np.cumsum(term - c)
        D_last = complex(D[-1])
        g = f(n.astype(float)) - f(n.astype(float) + 1)
        acc += complex(np.sum((D - Dbar) * g))
        B = B_last + np.cumsum(D - Dbar)
        B_last = complex(B[-1])
        Bmax = max(Bmax, float(np.max(np.abs(B))))
    gN = abs(complex(f(float(N + 1)) - f(float(N + 2))))
    # |sum_{n>N} (D - Dbar) g| <= sup|B| (|g(N+1)| + sum |Delta g|) <= 2 sup|B| |g(N+1)|
    # (plus, for an empirical mean, the drift of B across the untested tail)
    rem = 4 * Bmax * gN
    if not exact_mean:
        rem += abs(D_last - Dbar) * abs(complex(f(float(N + 1))))
    hz = hurwitz_zeta(q, s) if s != 1 else None
    if hz is None:
        raise PoleError("Z has a pole at s=1 for lattice r")
    value = c * (hz.value - q ** (-s)) + Dbar * (1 + q) ** (-s) + acc
    err = abs(c) * hz.err_est + rem + 64 * _EPS * (abs(acc) + 1) * math.log(N)
    return EvalResult(complex(value), err, "abel-oracle")


def z_fluctuation_residue(alpha: IrrationalNumber, r: float, q: float, js=(5, 6, 7, 8),
                          N_max: int = 1 << 22, hit="scan") -> EvalResult:
    """Residue of ``Z(r,q;s)`` at ``s = 1`` from ``h * Z(1+h)``, ``h = 2^{-j}``.

    The products are Richardson-extrapolated to ``h = 0``.
    """
    hs = [2.0**-j for j in js]
    vals = []
    errs = []
    for h in hs:
        z = z_fluctuation(alpha, r, q, 1 + h, N_max=N_max, hit=hit)
        vals.append(h * z.value)
        errs.append(h * z.err_est)
    # polynomial extrapolation in h through all points
    V = np.vander(np.array(hs), len(hs), increasing=True)
    coef = np.linalg.solve(V, np.array(vals))
    # lower-order fit for an error estimate
    V2 = np.vander(np.array(hs[1:]), len(hs) - 1, increasing=True)
    coef2 = np.linalg.solve(V2, np.array(vals[1:]))
    est = abs(coef[0] - coef2[0]) + max(errs) * 2**len(hs)
    return EvalResult(complex(coef[0]), float(est), "abel-oracle")


# -- residue ---------------------------------------------------------------------

def residue_at_one(ctx: PhiContext, cfg: ContinuationConfig = ContinuationConfig()) -> ResidueReport:
    """Contour estimate of the residue of ``Z#`` at ``s = 1``.

    On ``|s - 1| = residue_radius`` the function is assembled without any
    symbolic pole: ``F0`` is the raw quadrature over ``(u_min, 1)`` plus a
    model of the segment below ``u_min`` driven by the amplitude
    ``u_a^{1/2} Phi(u_a)`` measured by direct summation at
    ``u_a = amplitude_u``; ``gamma*zeta#`` is evaluated numerically.  The
    trapezoid mean of ``(s-1) f(s)`` over the circle is the residue.
    """
    tab = _tables(ctx, cfg)
    amp = tab.amplitude()
    m = cfg.residue_nodes
    ss = 1 + cfg.residue_radius * np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
    diff_vals = []
    full_vals = []
    err = 0.0
    for s in ss:
        s = complex(s)
        P = _prefactor(ctx, s)
        F0, e0 = _f0_raw(ctx, s, cfg, amp)
        Fi = f_infty(ctx, s, cfg)
        d = -_boundary(ctx, s) + P * (F0 + Fi.value)
        if ctx.is_integer_r:
            sign = -1.0 if int(ctx.r) % 2 else 1.0
            gz = ctx.gamma * sign * (hurwitz_zeta(ctx.q, s).value + hurwitz_zeta(1 - ctx.q, s).value)
        else:
            gz = ctx.gamma * zeta_sharp(ctx.r, ctx.q, s, cfg=cfg).value
        diff_vals.append((s - 1) * d)
        full_vals.append((s - 1) * (d + gz))
        err = max(err, cfg.residue_radius * abs(P) * (e0 + Fi.err_est))
    measured = complex(np.mean(diff_vals))
    measured_full = complex(np.mean(full_vals))
    # sensitivity to the sub-u_min model: amplitude drift between u_a and u_min
    drift = abs(amp - measured_amplitude(ctx, cfg.u_min))
    err += 2 * drift
    hit = ctx.hit
    if hit is None:
        pred_t = pred_d = 0j
    else:
        k, l = hit
        sign = -1.0 if l % 2 else 1.0
        if k == 0:
            pred_t = 2 * sign * ctx.gamma + 0j
            pred_d = 0j
        else:
            pred_t = pred_d = 2 * sign * math.sin(math.pi * k * ctx.gamma) / (math.pi * k) + 0j
    return ResidueReport(measured, pred_t, pred_d, "contour", measured_full, err, amp, hit)


# -- grid scan ---------------------------------------------------------------------

CSV_HEADER = ["s_re", "s_im", "val_re", "val_im", "err_est", "pole_re", "pole_im", "region"]


def _grid_points(re_values, im_values) -> list[complex]:
    return [complex(a, b) for a in re_values for b in im_values]


def grid_scan(ctx: PhiContext, re_values, im_values, cfg: ContinuationConfig = ContinuationConfig(),
              threads: int = 1, method: str = "auto") -> list[dict]:
    """Evaluate ``z_sharp`` on a rectangular grid, row-major over ``(re, im)``.

    Per-point failures are recorded in the ``region`` column
    (``error:<Type>``) with NaN values instead of being raised.
    """
    pts = _grid_points(re_values, im_values)

    def one(s):
        try:
            r = z_sharp(ctx, s, cfg, method)
            v = r.value
            if r.region_note == "continued" and math.isnan(v.real):
                v = r.regular
            return {"s_re": s.real, "s_im": s.imag, "val_re": v.real, "val_im": v.imag,
                    "err_est": r.err_est, "pole_re": r.pole_coefficient.real,
                    "pole_im": r.pole_coefficient.imag, "region": r.region_note}
        except BeattyZetaError as exc:
            nan = float("nan")
            return {"s_re": s.real, "s_im": s.imag, "val_re": nan, "val_im": nan, "err_est": nan,
                    "pole_re": nan, "pole_im": nan, "region": f"error:{type(exc).__name__}"}

    if threads > 1 and len(pts) > 1:
        # build shared tables up front so workers only read them
        one(pts[0])
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, pts))
    return [one(s) for s in pts]


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return "%.17g" % x


def scan_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([_fmt(row[h]) for h in CSV_HEADER])
    return buf.getvalue()


# -- Lipschitz-Lerch pair ------------------------------------------------------------

@lru_cache(maxsize=64)
def _lerch_table(r: float, q: float, h: float) -> tuple[MellinTable, float, float]:
    rr = abs(r - round(r))
    m = min(q, 1 - q)

    def fn(u):
        vals = np.array([psi(r, q, float(ui)) for ui in u])
        return vals, np.full(u.size, 1e-15) * (1 + u**-0.5)

    # small u: |Psi| <= 3 u^{-1/2} exp(-pi ||r||^2 / u)
    t_lo = math.log(math.pi * rr * rr / 45.0)
    U = _envelope_cut(q, ENVELOPE)
    return MellinTable(fn, t_lo, math.log(U), h), m, U


def lerch_pair(r: float, q: float, s: complex, cfg: ContinuationConfig = ContinuationConfig()) -> EvalResult:
    """``zeta#(r,q;s)`` for non-integer ``r`` by the theta-Mellin integral.

    ``zeta#(s) = P(s) int_0^oo Psi(r,q;u) u^{s/2-1} du``; for ``r`` off the
    integers ``Psi`` decays at both ends, so the result is entire in ``s``.
    """
    r = float(r)
    q = float(q)
    s = complex(s)
    if r == math.floor(r):
        raise DomainError("lerch_pair needs non-integer r")
    tab, m, U = _lerch_table(r, q, cfg.panel_width / 2)
    val, err = tab.integrate(s, cfg.quad_tol)
    P = math.pi ** (s / 2) * rgamma(s / 2) * cmath.exp(1j * math.pi * r)
    tail = _envelope_tail(math.pi * m * m, ENVELOPE, U, s.real)
    rr = abs(r - round(r))
    lo = math.pi * rr * rr / 45.0
    # below t_lo the integrand is under 3 exp(-45) u^{(sigma-1)/2} per unit t
    low_tail = 3 * math.exp(-45) * lo ** ((s.real - 1) / 2) * 2 / max(abs(s.real - 1), 1.0)
    return EvalResult(P * val, abs(P) * (err + tail + low_tail), "continuation")
