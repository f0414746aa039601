"""Irrational numbers, continued fractions, discrepancy and near-resonances.

Two exact-enough representations of an irrational real are provided:

* :class:`Quadratic` -- ``(p + q*sqrt(d)) / c`` with integer data.  Floors of
  integer multiples are decided with :func:`math.isqrt`, so membership
  questions (is ``{n*x}`` below ``gamma``?) never depend on rounding.
* :class:`HighPrecision` -- a decimal string, carried as a rational
  enclosing interval.  Anything the interval cannot certify raises
  :class:`~beatty_zeta.errors.PrecisionError`.

Vectorised work (Beatty indicators, near-hit scans, Kronecker points) goes
through :meth:`IrrationalNumber.mul_mod1`, which splits ``x`` into a 26-bit
head and a tail so that ``n * head`` is exact in binary64 for
``|n| < 2**26``.  The fractional parts it returns are accurate to a few ulp
regardless of ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import AmbiguousDecomposition, BudgetExceeded, DomainError, PrecisionError

__all__ = [
    "IrrationalNumber",
    "Quadratic",
    "HighPrecision",
    "NearHit",
    "DiscrepancyReport",
    "golden",
    "sqrt2",
    "parse_alpha",
    "as_alpha",
    "cf_expand",
    "convergents",
    "dist_to_int",
    "nearest_int",
    "estimate_type",
    "estimate_type_from_cf",
    "kronecker_points",
    "star_discrepancy",
    "near_hits",
    "near_hit_arrays",
    "delta_kappa",
    "lattice_decompose",
    "lattice_decompose_exact",
    "mul_mod1",
]

MAX_EXACT_MULTIPLIER = 2**26
_HEAD_BITS = 26
# fractional parts closer than this to an integer are re-decided exactly
_FLOOR_GUARD = 1e-9
DEFAULT_CF_DEPTH = 24


def _split_binary(x: float) -> tuple[float, float]:
    """Split a binary64 value into a 26-bit head and the exact remainder."""
    if x == 0.0:
        return 0.0, 0.0
    m, e = math.frexp(x)
    head = math.ldexp(math.floor(m * 2.0**_HEAD_BITS), e - _HEAD_BITS)
    return head, x - head


def _split_decimal(x: Decimal) -> tuple[float, float]:
    m, e = math.frexp(float(x))
    scale = Decimal(2) ** (_HEAD_BITS - e)
    head_int = int((x * scale).to_integral_value(rounding="ROUND_FLOOR"))
    head = math.ldexp(head_int, e - _HEAD_BITS)
    return head, float(x - Decimal(head))


def _mul_mod1_split(head: float, tail: float, n) -> tuple[np.ndarray, np.ndarray]:
    n = np.asarray(n, dtype=np.int64)
    if n.size and int(np.max(np.abs(n))) >= MAX_EXACT_MULTIPLIER:
        raise BudgetExceeded(f"multiplier exceeds {MAX_EXACT_MULTIPLIER}; precise product unavailable")
    nf = n.astype(np.float64)
    p1 = nf * head  # exact
    fl1 = np.floor(p1)
    p2 = nf * tail
    fl2 = np.floor(p2)
    frac = (p1 - fl1) + (p2 - fl2)
    carry = np.floor(frac)
    frac = frac - carry
    floor = fl1.astype(np.int64) + fl2.astype(np.int64) + carry.astype(np.int64)
    return floor, frac


def mul_mod1(x, n) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(floor(n*x), {n*x})`` for an integer array ``n``.

    ``x`` may be a float (treated as the exact binary value) or an
    :class:`IrrationalNumber`.  Floors are exact for IrrationalNumber inputs.
    """
    if isinstance(x, IrrationalNumber):
        return x.mul_mod1(n)
    head, tail = _split_binary(float(x))
    return _mul_mod1_split(head, tail, n)


class IrrationalNumber:
    """Common interface of :class:`Quadratic` and :class:`HighPrecision`."""

    cf_depth: int = DEFAULT_CF_DEPTH

    # -- to be supplied by subclasses -------------------------------------
    def floor_exact(self, n: int) -> int:
        raise NotImplementedError

    def to_decimal(self, digits: int = 40) -> Decimal:
        raise NotImplementedError

    def reciprocal(self) -> "IrrationalNumber":
        raise NotImplementedError

    def _cf_iter(self, depth: int) -> list[int]:
        raise NotImplementedError

    # -- shared ------------------------------------------------------------
    @cached_property
    def value(self) -> float:
        return float(self.to_decimal(30))

    @cached_property
    def gamma(self) -> "IrrationalNumber":
        """The reciprocal ``1/x``; only meaningful as gamma when ``x > 1``."""
        return self.reciprocal()

    @cached_property
    def _split(self) -> tuple[float, float]:
        return _split_decimal(self.to_decimal(40))

    @cached_property
    def cf(self) -> tuple[int, ...]:
        """Partial quotients to the configured depth (fewer if uncertifiable)."""
        try:
            return tuple(self._cf_iter(self.cf_depth))
        except PrecisionError as exc:
            return tuple(exc.args[1]) if len(exc.args) > 1 else ()

    @property
    def periodic(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """``(preperiod, period)`` of the expansion when detected, else None."""
        return None

    @cached_property
    def type_estimate(self) -> float:
        if self.periodic is not None:
            return 1.0
        if len(self.cf) < 4:
            return 1.0
        return estimate_type_from_cf(self.cf)

    def mul_mod1(self, n) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised ``(floor(n*x), {n*x})`` with exact floors."""
        head, tail = self._split
        floor, frac = _mul_mod1_split(head, tail, n)
        risky = (frac < _FLOOR_GUARD) | (frac > 1.0 - _FLOOR_GUARD)
        if np.any(risky):
            n = np.asarray(n, dtype=np.int64)
            floor = np.array(floor, copy=True)
            frac = np.array(frac, copy=True)
            for idx in zip(*np.nonzero(risky)):
                ni = int(n[idx])
                fl = self.floor_exact(ni)
                floor[idx] = fl
                # recompute the fraction around the exact floor
                with localcontext() as ctx:
                    ctx.prec = 50
                    frac[idx] = float(Decimal(ni) * self.to_decimal(45) - fl)
        return floor, frac

    def floor_mul(self, n):
        """Exact ``floor(n*x)``; scalar in, int out; array in, int64 array out."""
        if np.isscalar(n) or isinstance(n, int):
            return self.floor_exact(int(n))
        return self.mul_mod1(n)[0]


@dataclass(frozen=True, eq=True)
class Quadratic(IrrationalNumber):
    """The quadratic irrational ``(p + q*sqrt(d)) / c``."""

    p: int
    q: int
    d: int
    c: int

    def __post_init__(self):
        p, q, d, c = (int(v) for v in (self.p, self.q, self.d, self.c))
        if d <= 0 or math.isqrt(d) ** 2 == d:
            raise DomainError(f"d={d} must be a positive non-square")
        if q == 0:
            raise DomainError("q must be nonzero for an irrational value")
        if c == 0:
            raise DomainError("c must be nonzero")
        if c < 0:
            p, q, c = -p, -q, -c
        g = math.gcd(math.gcd(p, q), c)
        if g > 1:
            p, q, c = p // g, q // g, c // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "c", c)

    def __repr__(self) -> str:
        return f"Quadratic({self.p}, {self.q}, {self.d}, {self.c})"

    def floor_exact(self, n: int) -> int:
        n = int(n)
        if n == 0:
            return 0
        a = n * self.p
        b = n * n * self.q * self.q * self.d
        root = math.isqrt(b)
        if n * self.q > 0:
            return (a + root) // self.c
        return (a - root - 1) // self.c

    def to_decimal(self, digits: int = 40) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            v = (Decimal(self.p) + Decimal(self.q) * Decimal(self.d).sqrt()) / Decimal(self.c)
        return +v

    def reciprocal(self) -> "Quadratic":
        den = self.p * self.p - self.q * self.q * self.d
        return Quadratic(self.c * self.p, -self.c * self.q, self.d, den)

    def add_int(self, m: int) -> "Quadratic":
        return Quadratic(self.p + m * self.c, self.q, self.d, self.c)

    @cached_property
    def _cf_cycle(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        # x = (P + sqrt(D)) / Q with Q | (D - P^2)
        D = self.q * self.q * self.d
        if self.q > 0:
            P, Q = self.p, self.c
        else:
            P, Q = -self.p, -self.c
        if (D - P * P) % Q:
            P *= abs(Q)
            D *= Q * Q
            Q *= abs(Q)
        root = math.isqrt(D)
        seen: dict[tuple[int, int], int] = {}
        quotients: list[int] = []
        while (P, Q) not in seen:
            seen[(P, Q)] = len(quotients)
            if Q > 0:
                a = (P + root) // Q
            else:
                a = -((P + root) // -Q + 1)
            quotients.append(a)
            P = a * Q - P
            Q = (D - P * P) // Q
        start = seen[(P, Q)]
        return tuple(quotients[:start]), tuple(quotients[start:])

    @property
    def periodic(self):
        return self._cf_cycle

    def _cf_iter(self, depth: int) -> list[int]:
        pre, period = self._cf_cycle
        out = list(pre[: depth + 1])
        i = 0
        while len(out) < depth + 1:
            out.append(period[i % len(period)])
            i += 1
        return out


@dataclass(frozen=True, eq=True)
class HighPrecision(IrrationalNumber):
    """An irrational known through a decimal string.

    The value is enclosed in ``[lo, hi]`` (one unit in the last given digit
    either side).  ``guard`` adds working digits to decimal conversions.
    """

    digits: str
    guard: int = 4
    lo: Fraction | None = None
    hi: Fraction | None = None

    def __post_init__(self):
        if self.lo is None or self.hi is None:
            dec = Decimal(self.digits.strip())
            if not dec.is_finite():
                raise DomainError(f"not a finite decimal: {self.digits!r}")
            exp = dec.as_tuple().exponent
            radius = Fraction(1, 10 ** max(0, -exp)) if exp < 0 else Fraction(1)
            centre = Fraction(dec)
            object.__setattr__(self, "lo", centre - radius)
            object.__setattr__(self, "hi", centre + radius)
        if self.lo > self.hi:
            raise DomainError("empty enclosure")

    def __repr__(self) -> str:
        return f"HighPrecision({self.digits!r})"

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def floor_exact(self, n: int) -> int:
        n = int(n)
        a, b = n * self.lo, n * self.hi
        fa, fb = math.floor(a), math.floor(b)
        if fa != fb or (a == fa and a != b) or (b == fb and a != b):
            raise PrecisionError(f"floor({n}*x) not certified by the given digits")
        return fa

    def to_decimal(self, digits: int = 40) -> Decimal:
        mid = (self.lo + self.hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits + self.guard
            v = Decimal(mid.numerator) / Decimal(mid.denominator)
        return +v

    def reciprocal(self) -> "HighPrecision":
        if self.lo <= 0 <= self.hi:
            raise PrecisionError("enclosure contains zero")
        lo, hi = sorted((1 / self.hi, 1 / self.lo))
        return HighPrecision(f"1/({self.digits})", self.guard, lo, hi)

    def _cf_iter(self, depth: int) -> list[int]:
        lo, hi = self.lo, self.hi
        out: list[int] = []
        while len(out) < depth + 1:
            a, b = math.floor(lo), math.floor(hi)
            if a != b or lo == a:
                raise PrecisionError(
                    f"digits certify only {len(out)} partial quotients", out)
            out.append(a)
            lo, hi = 1 / (hi - a), 1 / (lo - a)
        return out

    def mul_mod1(self, n):
        floor, frac = super().mul_mod1(n)
        # floors near the float rounding radius must also survive the enclosure
        width = float(self.width)
        nmax = float(np.max(np.abs(n))) if np.size(n) else 0.0
        if nmax * width > _FLOOR_GUARD:
            margin = nmax * width
            risky = (frac < margin) | (frac > 1.0 - margin)
            for idx in zip(*np.nonzero(risky)):
                floor[idx] = self.floor_exact(int(np.asarray(n)[idx]))
        return floor, frac


def golden() -> Quadratic:
    """The golden ratio ``(1 + sqrt 5) / 2``."""
    return Quadratic(1, 1, 5, 2)


def sqrt2() -> Quadratic:
    return Quadratic(0, 1, 2, 1)


def as_alpha(x) -> IrrationalNumber:
    """Validate ``x`` as a Beatty modulus (irrational, > 1)."""
    if not isinstance(x, IrrationalNumber):
        raise DomainError("alpha must be an IrrationalNumber (use parse_alpha)")
    if isinstance(x, HighPrecision):
        if x.lo <= 1:
            raise DomainError("alpha must exceed 1")
    elif x.floor_exact(1) < 1:
        raise DomainError("alpha must exceed 1")
    return x


def parse_alpha(spec: str) -> IrrationalNumber:
    """Parse ``golden | sqrt2 | quad:p,q,d,c | dec:<digits>``."""
    spec = spec.strip()
    if spec == "golden":
        x = golden()
    elif spec == "sqrt2":
        x = sqrt2()
    elif spec.startswith("quad:"):
        try:
            p, q, d, c = (int(v) for v in spec[5:].split(","))
        except ValueError:
            raise DomainError(f"bad quadratic spec {spec!r}; expected quad:p,q,d,c") from None
        x = Quadratic(p, q, d, c)
    elif spec.startswith("dec:"):
        x = HighPrecision(spec[4:])
    else:
        raise DomainError(f"unknown alpha spec {spec!r}")
    return as_alpha(x)


# -- continued fractions ----------------------------------------------------

def cf_expand(x: IrrationalNumber, depth: int) -> list[int]:
    """Partial quotients ``[a0; a1, ..., a_depth]``.

    Quadratic inputs use the exact integer recurrence; HighPrecision inputs
    raise :class:`PrecisionError` once the enclosure stops certifying quotients.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    try:
        return x._cf_iter(depth)
    except PrecisionError as exc:
        raise PrecisionError(exc.args[0]) from None


def convergents(cf, n: int) -> list[tuple[int, int]]:
    """First ``n`` convergents ``(p_k, q_k)`` of a partial-quotient list."""
    if n > len(cf):
        raise DomainError(f"only {len(cf)} partial quotients available")
    out = []
    p_prev, p = 1, int(cf[0])
    q_prev, q = 0, 1
    out.append((p, q))
    for a in cf[1:n]:
        a = int(a)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def estimate_type_from_cf(cf) -> float:
    """``max(1, max_k log q_{k+1} / log q_k)`` over ``2 <= k < len(cf)-1``."""
    qs = [q for _, q in convergents(cf, len(cf))]
    best = 1.0
    for k in range(2, len(qs) - 1):
        best = max(best, math.log(qs[k + 1]) / math.log(qs[k]))
    return best


def estimate_type(x: IrrationalNumber, depth: int = DEFAULT_CF_DEPTH) -> float:
    """Estimate the irrationality type from convergent denominators.

    ``||q_k x|| ~ 1/q_{k+1}``, so the growth exponent of consecutive
    denominators estimates the type.  Periodic (quadratic) expansions are
    of type exactly one.
    """
    if depth < 3:
        raise DomainError("depth must be >= 3")
    if x.periodic is not None:
        return 1.0
    return estimate_type_from_cf(cf_expand(x, depth))


# -- distances to integers --------------------------------------------------

def dist_to_int(t):
    """Distance to the nearest integer, ``min({t}, 1-{t})``."""
    if np.isscalar(t):
        f = t - math.floor(t)
        return min(f, 1.0 - f)
    t = np.asarray(t, dtype=float)
    f = t - np.floor(t)
    return np.minimum(f, 1.0 - f)


def nearest_int(t: float) -> tuple[int, int, float]:
    """Decompose ``t = n + nu*d`` with ``d = dist_to_int(t)``.

    Half-integers resolve downwards (``n = floor(t)``, ``nu = +1``).
    """
    fl = math.floor(t)
    f = t - fl
    if f <= 0.5:
        return int(fl), 1, f
    return int(fl) + 1, -1, 1.0 - f


# -- discrepancy ------------------------------------------------------------

class DiscrepancyReport(NamedTuple):
    M: int
    d_star: float
    d_extreme_bounds: tuple[float, float]


def kronecker_points(gamma, delta: float, M: int) -> np.ndarray:
    """Fractional parts ``{gamma*m + delta}`` for ``m = 1..M``."""
    if M < 1:
        raise DomainError("M must be >= 1")
    _, f = mul_mod1(gamma, np.arange(1, M + 1, dtype=np.int64))
    dfrac = delta - math.floor(delta)
    out = f + dfrac
    return out - np.floor(out)


def star_discrepancy(points) -> DiscrepancyReport:
    """Exact star discrepancy of a finite point set in ``[0, 1)``."""
    x = np.sort(np.asarray(points, dtype=float))
    M = x.size
    if M == 0:
        raise DomainError("empty point set")
    if x[0] < 0.0 or x[-1] >= 1.0:
        raise DomainError("points must lie in [0, 1)")
    i = np.arange(1, M + 1)
    d = float(max(np.max(i / M - x), np.max(x - (i - 1) / M)))
    return DiscrepancyReport(M, d, (d, min(1.0, 2.0 * d)))


# -- near resonances --------------------------------------------------------

@dataclass(frozen=True)
class NearHit:
    """``r - k*gamma = nearest + nu*dist`` with ``dist = ||r - k*gamma||``."""

    k: int
    dist: float
    nu: int
    nearest: int


def _offsets(gamma, r: float, k: np.ndarray):
    """Return (nearest, nu, dist) arrays for ``r - k*gamma``."""
    fk_floor, fk = mul_mod1(gamma, k)
    r_floor = math.floor(r)
    t = (r - r_floor) - fk
    base = r_floor - fk_floor
    neg = t < 0
    t = np.where(neg, t + 1.0, t)
    base = base - neg.astype(np.int64)
    up = t > 0.5
    dist = np.where(up, 1.0 - t, t)
    nu = np.where(up, -1, 1)
    nearest = base + up.astype(np.int64)
    return nearest, nu, dist


def _k_range(K: int, include_zero: bool = False) -> np.ndarray:
    pos = np.arange(1, K + 1, dtype=np.int64)
    parts = [pos, -pos]
    if include_zero:
        parts.insert(0, np.zeros(1, dtype=np.int64))
    return np.concatenate(parts)


def _sort_order(k: np.ndarray, dist: np.ndarray) -> np.ndarray:
    # ties: distances equal to ~1e-13 are compared by |k|, then positive first
    return np.lexsort(((k < 0).astype(np.int8), np.abs(k), np.round(dist, 13)))


def near_hit_arrays(gamma, r: float, K: int, T: float, chunk: int = 1 << 20):
    """Array form of :func:`near_hits`: ``(k, dist, nu, nearest)`` sorted."""
    if K < 1:
        raise DomainError("K must be >= 1")
    if not 0.0 < T <= 0.5:
        raise DomainError("T must lie in (0, 1/2]")
    ks, ds, nus, ns = [], [], [], []
    for start in range(1, K + 1, chunk):
        stop = min(K, start + chunk - 1)
        pos = np.arange(start, stop + 1, dtype=np.int64)
        k = np.concatenate([pos, -pos])
        nearest, nu, dist = _offsets(gamma, r, k)
        keep = dist <= T
        ks.append(k[keep])
        ds.append(dist[keep])
        nus.append(nu[keep])
        ns.append(nearest[keep])
    k = np.concatenate(ks)
    dist = np.concatenate(ds)
    nu = np.concatenate(nus)
    nearest = np.concatenate(ns)
    order = _sort_order(k, dist)
    return k[order], dist[order], nu[order], nearest[order]


def near_hits(gamma, r: float, K: int, T: float) -> list[NearHit]:
    """All ``0 < |k| <= K`` with ``||r - k*gamma|| <= T``, closest first."""
    k, dist, nu, nearest = near_hit_arrays(gamma, r, K, T)
    return [NearHit(int(a), float(b), int(c), int(d)) for a, b, c, d in zip(k, dist, nu, nearest)]


def delta_kappa(gamma, r: float, K: int) -> tuple[float, int]:
    """Minimal ``||r - k*gamma||`` over ``0 < |k| <= K`` and its minimiser."""
    k, dist, _, _ = near_hit_arrays(gamma, r, K, 0.5)
    return float(dist[0]), int(k[0])


def lattice_decompose(gamma, r: float, K_max: int = 10**6, tol: float = 1e-12):
    """Find ``(k, l)`` with ``|r - k*gamma - l| <= tol`` and ``|k| <= K_max``.

    ``k = 0`` is allowed (integer ``r``).  Returns None when no candidate
    exists and raises :class:`AmbiguousDecomposition` when several do.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    k = _k_range(K_max, include_zero=True)
    nearest, _, dist = _offsets(gamma, r, k)
    hits = np.nonzero(dist <= tol)[0]
    if hits.size == 0:
        return None
    if hits.size > 1:
        raise AmbiguousDecomposition(
            f"{hits.size} lattice candidates within tol={tol}: k in {k[hits][:5].tolist()}")
    i = hits[0]
    return int(k[i]), int(nearest[i])


def lattice_decompose_exact(gamma: Quadratic, r):
    """Exact lattice membership for a quadratic ``gamma``.

    ``r`` may be an int, a :class:`~fractions.Fraction`, or a
    :class:`Quadratic` from the same field.  A rational ``r`` belongs to
    ``Z + Z*gamma`` only when it is an integer.
    """
    if isinstance(r, (int, Fraction)):
        r = Fraction(r)
        return (0, int(r)) if r.denominator == 1 else None
    if not isinstance(r, Quadratic):
        raise DomainError("r must be int, Fraction or Quadratic")
    # compare in the common representation (p + q sqrt(d)) / c
    if r.d * gamma.q**2 * r.c**2 != gamma.d * r.q**2 * gamma.c**2 and r.d != gamma.d:
        sq = Fraction(r.d, gamma.d)
        if math.isqrt(sq.numerator) ** 2 != sq.numerator or math.isqrt(sq.denominator) ** 2 != sq.denominator:
            return None
    # irrational coefficient of r and gamma against sqrt(gamma.d)
    scale = Fraction(math.isqrt(r.d * gamma.d), gamma.d) if r.d != gamma.d else Fraction(1)
    r_irr = Fraction(r.q, r.c) * scale
    g_irr = Fraction(gamma.q, gamma.c)
    k = r_irr / g_irr
    if k.denominator != 1:
        return None
    ell = Fraction(r.p, r.c) - k * Fraction(gamma.p, gamma.c)
    if ell.denominator != 1:
        return None
    return int(k), int(ell)
