"""Acceptance checks runnable from the command line.

Each check returns a :class:`CheckResult`; ``run_suite("quick")`` covers the
inexpensive criteria and ``run_suite("full")`` all of them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .beatty import indicator_array, truncated_indicator, indicator
from .continuation import (ContinuationConfig, residue_at_one, z_direct, z_fluctuation,
                           z_fluctuation_residue, z_sharp)
from .diophantine import Quadratic, golden, kronecker_points, star_discrepancy
from .special import complex_gamma, hurwitz_zeta, lerch_direct, riemann_zeta, zeta_sharp
from .theta import PhiContext, phi_direct, phi_transformed, theta

__all__ = ["CheckResult", "CHECKS", "run_suite"]

CATALAN = 0.91596559417721901505


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name:<34s} measured={self.measured:.3e}  tol={self.tolerance:.1e}  {self.detail}"


def _golden_ctx(r: float, q: float = 0.5) -> PhiContext:
    return PhiContext(golden(), r, q)


def check_theta_inversion(n: int = 1000, seed: int = 20240601) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        v, w = rng.random(2)
        u = rng.uniform(0.05, 20.0)
        lhs = theta(v, w, u, "direct")
        rhs = u**-0.5 * theta(w, -v, 1.0 / u, "direct")
        worst = max(worst, abs(lhs - rhs))
    return CheckResult("1 theta inversion", worst <= 1e-12, worst, 1e-12)


def check_dual_phi() -> CheckResult:
    gam = golden().gamma.value
    worst = 0.0
    ratio = 0.0
    for r in (0.0, gam, 1.0 / 3.0):
        ctx = _golden_ctx(r)
        for u in np.linspace(0.3, 3.0, 50):
            a = phi_direct(ctx, u)
            b = phi_transformed(ctx, u)
            d = abs(a.value - b.value)
            worst = max(worst, d)
            ratio = max(ratio, d / (a.err_est + b.err_est))
    ok = worst <= 1e-8 and ratio <= 1.0
    return CheckResult("2 dual Phi representation", ok, worst, 1e-8, f"max diff/err_est={ratio:.2f}")


def check_overlap() -> CheckResult:
    ctx = _golden_ctx(golden().gamma.value)
    cfg = ContinuationConfig()
    worst = 0.0
    for s in (1.5, 2.0, 2 + 3j):
        c = z_sharp(ctx, s, cfg, "continued")
        d = z_sharp(ctx, s, cfg, "direct")
        worst = max(worst, abs(c.value - d.value))
    return CheckResult("3 continued vs direct (Re s>1)", worst <= 1e-8, worst, 1e-8)


def check_complementary() -> CheckResult:
    phi = golden()
    phi2 = Quadratic(3, 1, 5, 2)  # phi^2 = 1/gamma + 1, complementary modulus
    a = z_direct(phi, 0.0, 0.5, 3, tol=1e-13)
    b = z_direct(phi2, 0.0, 0.5, 3, tol=1e-13)
    target = 7 * riemann_zeta(3).value
    d = abs(a.value + b.value + 8 - target)
    return CheckResult("4 complementary Beatty identity", d <= 1e-10, d, 1e-10)


def check_hurwitz_riemann() -> CheckResult:
    worst = 0.0
    for s in (1.1, 2.0, 3.0):
        lhs = zeta_sharp(0.0, 0.5, s).value
        rhs = (2 ** (s + 1) - 2) * riemann_zeta(s).value
        worst = max(worst, abs(lhs - rhs))
    return CheckResult("5 zeta# = (2^{s+1}-2) zeta", worst <= 1e-10, worst, 1e-10)


def check_residue_hit() -> CheckResult:
    gam = golden().gamma.value
    rep = residue_at_one(_golden_ctx(gam))
    target = 2 * math.sin(math.pi * gam) / math.pi
    d = abs(rep.measured_zsharp - target)
    return CheckResult("6 residue at lattice hit k=1", d <= 1e-5, d, 1e-5,
                       f"measured={rep.measured_zsharp.real:.10f}")


def check_no_pole() -> CheckResult:
    ctx = _golden_ctx(1.0 / 3.0)
    rep = residue_at_one(ctx)
    finite = all(np.isfinite(z_sharp(ctx, s).value) for s in (0.9, 1 + 0.01j, 1 - 0.01j))
    m = abs(rep.measured_zsharp)
    return CheckResult("7 no pole off the lattice", m <= 1e-4 and finite, m, 1e-4,
                       f"finite={finite}")


def check_value_at_zero() -> CheckResult:
    ctx = _golden_ctx(0.0)
    a = abs(z_sharp(ctx, 0).value + 1)
    ss = (0.2, 0.1, 0.05)
    vals = [z_sharp(ctx, s).value.real / 2 for s in ss]
    extrap = float(np.polyval(np.polyfit(ss, vals, 2), 0.0))
    b = abs(extrap + 0.5)
    c = 0.0
    for alpha in (golden(), Quadratic(1, 1, 2, 1), Quadratic(1, 1, 3, 1)):
        c = max(c, abs(z_fluctuation(alpha, 0.0, 0.5, 0).value + 0.5))
    ok = a <= 1e-10 and b <= 5e-3 and c <= 1e-6
    return CheckResult("8 Z(0,1/2;0) = -1/2", ok, max(a, c), 1e-10,
                       f"(a)={a:.1e} (b)={b:.1e}/5e-3 (c)={c:.1e}/1e-6")


def check_k0_residue() -> CheckResult:
    rep = residue_at_one(_golden_ctx(0.0))
    cont = rep.measured_zsharp.real / 2
    abel = z_fluctuation_residue(golden(), 0.0, 0.5).value.real
    d = abs(cont - abel)
    gam = golden().gamma.value
    which = "1/alpha (density)" if abs(cont - gam) < abs(cont - 2 * gam) else "2/alpha (printed)"
    return CheckResult("9 k=0 residue adjudication", d <= 1e-4, d, 1e-4,
                       f"continuation={cont:.8f} abel={abel:.8f} matches {which}")


def check_discrepancy() -> CheckResult:
    gam = golden().gamma
    pts = kronecker_points(gam, 0.0, 5)
    d5 = star_discrepancy(pts).d_star
    # brute force over all anchored intervals [0, x) and [0, x]
    xs = np.sort(pts)
    brute = max(max(abs(np.sum(pts < x) / 5 - x), abs(np.sum(pts <= x) / 5 - x)) for x in np.append(xs, 1.0))
    e1 = abs(d5 - brute)
    e0 = abs(d5 - 0.181966)
    worst_log = worst_lemma = 0.0
    for M in (10**2, 10**3, 10**4, 10**5):
        d = star_discrepancy(kronecker_points(gam, 0.0, M)).d_star
        worst_log = max(worst_log, d * M / math.log(M + 2))
        worst_lemma = max(worst_lemma, d / (10 * M ** (-1 / 1.05)))
    ok = e1 <= 1e-12 and e0 <= 5e-7 and worst_log <= 3 and worst_lemma <= 1
    return CheckResult("10 discrepancy", ok, e1, 1e-12,
                       f"D*(5)={d5:.6f} max D*M/ln(M+2)={worst_log:.3f} lemma ratio={worst_lemma:.3f}")


def check_indicator() -> CheckResult:
    phi = golden()
    n = np.arange(-10**5, 10**5 + 1)
    sym = bool(np.all(indicator_array(phi, n) == indicator_array(phi, -n - 1)))
    rng = np.random.default_rng(7)
    fourier_ok = True
    worst = 0.0
    for _ in range(200):
        m = int(rng.integers(-10**4, 10**4 + 1))
        K = int(2 ** rng.integers(4, 13))
        v, bound = truncated_indicator(phi, m, K)
        err = abs(v - indicator(phi, m))
        worst = max(worst, err / bound)
        fourier_ok &= err <= bound
    N = np.arange(1, 10**6 + 1)
    C = np.cumsum(indicator_array(phi, N))
    count_dev = float(np.max(np.abs(C - phi.gamma.value * N)))
    ok = sym and fourier_ok and count_dev <= 1
    return CheckResult("11 indicator suite", ok, count_dev, 1.0,
                       f"symmetry={sym} fourier err/bound max={worst:.2f}")


def check_special() -> CheckResult:
    a = abs(lerch_direct(0.5, 0.5, 2).value - 4 * CATALAN)
    hs = [1e-2, 1e-3, 1e-4]
    prods = [h * hurwitz_zeta(0.5, 1 + h).value.real for h in hs]
    V = np.vander(np.array(hs), 3, increasing=True)
    b = abs(np.linalg.solve(V, np.array(prods))[0] - 1)
    rng = np.random.default_rng(11)
    c = 0.0
    for _ in range(100):
        s = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        g1 = complex_gamma(s + 1).value
        g0 = complex_gamma(s).value
        c = max(c, abs(g1 - s * g0) / max(1.0, abs(g1)))
    ok = a <= 1e-9 and b <= 1e-8 and c <= 1e-12
    return CheckResult("12 special functions", ok, max(a, b), 1e-9,
                       f"catalan={a:.1e} residue={b:.1e} gamma-rec={c:.1e}")


CHECKS = {
    "1": check_theta_inversion,
    "2": check_dual_phi,
    "3": check_overlap,
    "4": check_complementary,
    "5": check_hurwitz_riemann,
    "6": check_residue_hit,
    "7": check_no_pole,
    "8": check_value_at_zero,
    "9": check_k0_residue,
    "10": check_discrepancy,
    "11": check_indicator,
    "12": check_special,
}

SUITES = {
    "quick": ("1", "4", "5", "8", "10", "12"),
    "full": tuple(CHECKS),
}


def run_suite(name: str = "quick", threads: int = 1) -> list[CheckResult]:
    """Run a named suite; checks execute in a fixed order."""
    keys = SUITES[name]

    def timed(k):
        t0 = time.perf_counter()
        res = CHECKS[k]()
        res.seconds = time.perf_counter() - t0
        return res

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(timed, keys))
    return [timed(k) for k in keys]
