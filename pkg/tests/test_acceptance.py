"""Acceptance criteria, one PASS/FAIL line each.

Reference values come from mpmath or from summation schemes that share no
code with the quantity under test.
"""

import math
import time

import mpmath
import numpy as np
import pytest

from beatty_zeta.beatty import indicator, indicator_array, truncated_indicator
from beatty_zeta.continuation import (ContinuationConfig, residue_at_one, z_direct, z_fluctuation,
                                      z_fluctuation_residue, z_sharp)
from beatty_zeta.diophantine import Quadratic, golden, kronecker_points, star_discrepancy
from beatty_zeta.special import complex_gamma, hurwitz_zeta, lerch_direct, zeta_sharp
from beatty_zeta.theta import PhiContext, phi_direct, phi_transformed, theta

mpmath.mp.dps = 30
PHI = golden()
G = PHI.gamma.value
G_MP = (mpmath.sqrt(5) - 1) / 2


def _theta_mp(v, w, u):
    N = int(8 / math.sqrt(u)) + 4
    s = mpmath.fsum(mpmath.exp(-mpmath.pi * (n + v) ** 2 * u) * mpmath.expjpi(2 * w * n)
                    for n in range(-N, N + 1))
    return complex(mpmath.expjpi(v * w) * s)


def test_criterion_01_theta_functional_equation(report):
    rng = np.random.default_rng(20240601)
    pts = [(*rng.random(2), rng.uniform(0.05, 20)) for _ in range(1000)]
    t0 = time.perf_counter()
    worst = max(abs(theta(v, w, u, "direct") - u**-0.5 * theta(w, -v, 1 / u, "direct")) for v, w, u in pts)
    elapsed = time.perf_counter() - t0
    oracle = max(abs(theta(v, w, u) - _theta_mp(v, w, u)) for v, w, u in pts[:25])
    ok = worst <= 1e-12 and elapsed <= 5 and oracle <= 1e-12
    assert report("1 theta functional equation", ok,
                  f"max residual {worst:.2e} (tol 1e-12), mpmath spot {oracle:.2e}, {elapsed:.2f}s (limit 5s)")


def test_criterion_02_dual_phi(report):
    t0 = time.perf_counter()
    worst = ratio = 0.0
    for r in (0.0, G, 1 / 3):
        ctx = PhiContext(PHI, r, 0.5)
        for u in np.linspace(0.3, 3, 50):
            a, b = phi_direct(ctx, u), phi_transformed(ctx, u)
            d = abs(a.value - b.value)
            worst = max(worst, d)
            ratio = max(ratio, d / (a.err_est + b.err_est))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and ratio <= 1 and elapsed <= 30
    assert report("2 dual Phi representation", ok,
                  f"max diff {worst:.2e} (tol 1e-8), max diff/err_est {ratio:.2f} (<=1), {elapsed:.1f}s (limit 30s)")


def test_criterion_03_overlap(report):
    ctx = PhiContext.from_lattice(PHI, 1, 0, 0.5)
    cfg = ContinuationConfig()
    worst = 0.0
    for s in (1.5, 2.0, 2 + 3j):
        worst = max(worst, abs(z_sharp(ctx, s, cfg, "continued").value - z_sharp(ctx, s, cfg, "direct").value))
    assert report("3 continued vs direct for Re s > 1", worst <= 1e-8, f"max diff {worst:.2e} (tol 1e-8)")


def test_criterion_04_complementary_beatty(report):
    a = z_direct(PHI, 0, 0.5, 3, tol=1e-13)
    b = z_direct(Quadratic(3, 1, 5, 2), 0, 0.5, 3, tol=1e-13)
    ref = 7 * mpmath.zeta(3)
    d = abs(a.value + b.value + 8 - complex(ref))
    assert report("4 complementary Beatty identity", d <= 1e-10,
                  f"sum {(a.value + b.value + 8).real:.13f} vs 7 zeta(3) {float(ref):.13f}, diff {d:.2e} (tol 1e-10)")


def test_criterion_05_hurwitz_riemann(report):
    worst = max(abs(zeta_sharp(0.0, 0.5, s).value - float((2 ** (s + 1) - 2) * mpmath.zeta(s)))
                for s in (1.1, 2.0, 3.0))
    assert report("5 zeta#(0,1/2;s) = (2^{s+1}-2) zeta(s)", worst <= 1e-10, f"max diff {worst:.2e} (tol 1e-10)")


def test_criterion_06_residue_lattice_hit(report):
    t0 = time.perf_counter()
    rep = residue_at_one(PhiContext.from_lattice(PHI, 1, 0, 0.5))
    elapsed = time.perf_counter() - t0
    target = complex(2 * mpmath.sin(mpmath.pi * G_MP) / mpmath.pi)
    d = abs(rep.measured_zsharp - target)
    ok = d <= 1e-5 and elapsed <= 120
    assert report("6 residue at k=1 hit", ok,
                  f"measured {rep.measured_zsharp.real:.10f} vs {target.real:.10f}, diff {d:.2e} (tol 1e-5), "
                  f"{elapsed:.1f}s (limit 120s)")


def test_criterion_07_no_pole_off_lattice(report):
    ctx = PhiContext(PHI, 1 / 3, 0.5)
    rep = residue_at_one(ctx)
    finite = all(np.isfinite(z_sharp(ctx, s).value) for s in (0.9, 1 + 0.01j, 1 - 0.01j))
    m = abs(rep.measured_zsharp)
    assert report("7 no pole for r = 1/3", m <= 1e-4 and finite,
                  f"|measured residue| {m:.2e} (tol 1e-4), finite at 0.9, 1+-0.01i: {finite}")


def test_criterion_08_value_at_zero(report):
    ctx = PhiContext(PHI, 0.0, 0.5)
    a = abs(z_sharp(ctx, 0).value + 1)
    ss = (0.2, 0.1, 0.05)
    vals = [z_sharp(ctx, s).value.real / 2 for s in ss]
    extrap = float(np.polyval(np.polyfit(ss, vals, 2), 0.0))
    b = abs(extrap + 0.5)
    c = max(abs(z_fluctuation(alpha, 0.0, 0.5, 0).value + 0.5)
            for alpha in (PHI, Quadratic(1, 1, 2, 1), Quadratic(1, 1, 3, 1)))
    ok = a <= 1e-10 and b <= 5e-3 and c <= 1e-6
    assert report("8 Z(0,1/2;0) = -1/2", ok,
                  f"(a) |Z#(0)+1| {a:.1e} (tol 1e-10); (b) extrapolated {extrap:.5f}, diff {b:.1e} (tol 5e-3); "
                  f"(c) abel max diff {c:.1e} (tol 1e-6)")


def test_criterion_09_k0_residue(report):
    rep = residue_at_one(PhiContext(PHI, 0.0, 0.5))
    cont = rep.measured_zsharp.real / 2
    abel = z_fluctuation_residue(PHI, 0.0, 0.5).value.real
    d = abs(cont - abel)
    density, printed = G, 2 * G
    which = "1/alpha (density argument)" if abs(cont - density) < abs(cont - printed) else "2/alpha (printed)"
    assert report("9 k=0 residue adjudication", d <= 1e-4,
                  f"continuation {cont:.8f}, abel oracle {abel:.8f}, diff {d:.2e} (tol 1e-4); matches {which}")


def _brute_star(points):
    pts = sorted(mpmath.mpf(float(p)) for p in points)
    M = len(pts)
    best = mpmath.mpf(0)
    for x in pts + [mpmath.mpf(1)]:
        below = sum(1 for p in pts if p < x)
        upto = sum(1 for p in pts if p <= x)
        best = max(best, abs(mpmath.mpf(below) / M - x), abs(mpmath.mpf(upto) / M - x))
    return float(best)


def test_criterion_10_discrepancy(report):
    pts = kronecker_points(PHI.gamma, 0.0, 5)
    exact_pts = [mpmath.frac(m * G_MP) for m in range(1, 6)]
    d5 = star_discrepancy(pts).d_star
    e1 = abs(d5 - _brute_star(exact_pts))
    e0 = abs(d5 - 0.181966)
    worst_log = worst_lemma = 0.0
    for M in (10**2, 10**3, 10**4, 10**5):
        d = star_discrepancy(kronecker_points(PHI.gamma, 0.0, M)).d_star
        worst_log = max(worst_log, d * M / math.log(M + 2))
        worst_lemma = max(worst_lemma, d / (10 * M ** (-1 / 1.05)))
    ok = e1 <= 1e-12 and e0 <= 5e-7 and worst_log <= 3 and worst_lemma <= 1
    assert report("10 discrepancy", ok,
                  f"D*(5) {d5:.12f}, vs brute force {e1:.1e} (tol 1e-12), vs 0.181966 {e0:.1e}; "
                  f"max D*M/ln(M+2) {worst_log:.3f} (<=3); max D*/(10 M^(-1/1.05)) {worst_lemma:.3f} (<=1)")


def test_criterion_11_indicator_suite(report):
    n = np.arange(-10**5, 10**5 + 1)
    sym = bool(np.array_equal(indicator_array(PHI, n), indicator_array(PHI, -n - 1)))
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        m = int(rng.integers(-10**4, 10**4 + 1))
        K = int(2 ** rng.integers(4, 13))
        v, bound = truncated_indicator(PHI, m, K)
        worst = max(worst, abs(v - indicator(PHI, m)) / bound)
    N = np.arange(1, 10**6 + 1)
    C = np.cumsum(indicator_array(PHI, N))
    count_dev = float(np.max(np.abs(C - G * N)))
    ok = sym and worst <= 1 and count_dev <= 1
    assert report("11 indicator suite", ok,
                  f"symmetry |n|<=1e5 {sym}; max Fourier err/bound {worst:.2f} (<=1); "
                  f"max |C(N)-gamma N| {count_dev:.4f} (<=1) for N<=1e6")


def test_criterion_12_special_functions(report):
    a = abs(lerch_direct(0.5, 0.5, 2).value - 4 * float(mpmath.catalan))
    hs = [1e-2, 1e-3, 1e-4]
    prods = [h * hurwitz_zeta(0.5, 1 + h).value.real for h in hs]
    b = abs(np.linalg.solve(np.vander(np.array(hs), 3, increasing=True), np.array(prods))[0] - 1)
    rng = np.random.default_rng(11)
    c = 0.0
    for _ in range(100):
        s = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        g1, g0 = complex_gamma(s + 1).value, complex_gamma(s).value
        c = max(c, abs(g1 - s * g0) / max(1.0, abs(g1)))
    ok = a <= 1e-9 and b <= 1e-8 and c <= 1e-12
    assert report("12 special functions", ok,
                  f"4 Catalan diff {a:.1e} (tol 1e-9); Hurwitz residue diff {b:.1e} (tol 1e-8); "
                  f"Gamma recurrence {c:.1e} (tol 1e-12)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
