"""End-to-end acceptance checks, one test per criterion.

Each test records a single pass/fail line that is printed in the terminal
summary.
"""
import cmath
import math
import time
from fractions import Fraction

import mpmath
import numpy as np

from conftest import form, points
from hgperiod.chambers import verify_growing_count
from hgperiod.quadrature import PeriodComputation, QuadratureSpec, convergence_check, verify
from hgperiod.selberg import (SelbergParams, compositions, critical_products_selberg,
                              determinant_exp, determinant_no_exp, rectangular_to_triangular)
from hgperiod.suite import check_instance, combinatorial_check, generate, random_f0

SEED = 42


def G(z):
    return complex(mpmath.gamma(z))


def _pairwise(z, alpha):
    out = 1 + 0j
    for i in range(len(z)):
        for j in range(len(z)):
            if i != j:
                out *= complex(float(z[j] - z[i])) ** alpha[i]
    return out


EXAMPLE1 = [
    ((0, 1, 3), (0.6, 0.8, 1.1)),
    ((0, 1, 2), (0.3, 0.3, 0.3)),
    ((-2, Fraction(1, 2), 4), (1.5, 0.9, 0.4)),
    ((-1, 0, 5), (1.2 + 0.4j, 0.5 - 0.3j, 0.7 + 0.1j)),
    ((0, Fraction(1, 3), 1), (1.0, 1.4, 0.35)),
    ((1, 2, 7), (0.45 - 0.2j, 1.3, 0.95 + 0.25j)),
]


def test_criterion_1_three_points(report_criterion):
    worst, slowest = 0.0, 0.0
    for z, alpha in EXAMPLE1:
        A = points(z, alpha)
        start = time.perf_counter()
        r = verify(A, 1e-6)
        slowest = max(slowest, time.perf_counter() - start)
        a1, a2, a3 = alpha
        closed = G(a1 + 1) * G(a2 + 1) * G(a3 + 1) / G(a1 + a2 + a3 + 1) * _pairwise(z, alpha)
        dev = abs(r.lhs - closed) / abs(closed)
        worst = max(worst, dev, r.deviation)
    ok = worst <= 1e-6 and slowest < 1.0
    assert report_criterion(1, ok, f"{len(EXAMPLE1)} sets, worst deviation {worst:.2e}, slowest {slowest:.3f}s")


EXAMPLE2_WEIGHTS = [
    ((0, 1), (0.6, 0.8)),
    ((-1, 2), (1.2 + 0.3j, 0.4 - 0.2j)),
    ((Fraction(1, 2), 3), (1.5, 0.3)),
]


def test_criterion_2_two_points_exponential(report_criterion):
    worst, slowest, count = 0.0, 0.0, 0
    for a in (Fraction(1, 2), Fraction(1), Fraction(2)):
        for z, alpha in EXAMPLE2_WEIGHTS:
            A = points(z, alpha)
            start = time.perf_counter()
            r = verify(A, 1e-6, form(a))
            slowest = max(slowest, time.perf_counter() - start)
            af = float(a)
            closed = (G(alpha[0] + 1) * G(alpha[1] + 1) * cmath.exp(-af * float(z[0] + z[1]))
                      * complex(af) ** -(alpha[0] + alpha[1]) * _pairwise(z, alpha))
            worst = max(worst, abs(r.lhs - closed) / abs(closed), r.deviation)
            count += 1
    ok = worst <= 1e-6 and slowest < 2.0
    assert report_criterion(2, ok, f"{count} cases, worst deviation {worst:.2e}, slowest {slowest:.3f}s")


def _suite(with_f0):
    start = time.perf_counter()
    results = []
    cov_rng = np.random.default_rng(SEED) if with_f0 else None
    for inst in generate(SEED, 20, 10, with_f0=with_f0):
        tol = 1e-5 if inst.A.dimension == 1 else 1e-4
        results.append(check_instance(inst, tol, covariance_rng=cov_rng))
    return results, time.perf_counter() - start


def _suite_summary(results, seconds):
    n1 = [r for r in results if r.dimension == 1]
    n2 = [r for r in results if r.dimension == 2]
    worst = max(r.deviation for r in results)
    failed = [r.label for r in results if not r.passed]
    ok = len(n1) == 20 and len(n2) == 10 and not failed and seconds < 600
    return ok, (f"seed {SEED}: {sum(r.passed for r in n1)}/20 at n=1, {sum(r.passed for r in n2)}/10 at n=2, "
                f"worst deviation {worst:.2e}, {seconds:.1f}s" + (f", failed {failed}" if failed else ""))


def test_criterion_3_random_suite(report_criterion):
    ok, detail = _suite_summary(*_suite(False))
    assert report_criterion(3, ok, detail)


def test_criterion_4_random_suite_with_f0(report_criterion):
    results, seconds = _suite(True)
    ok, detail = _suite_summary(results, seconds)
    cov = max(abs(r.covariance_deviation - r.deviation) for r in results)
    ok = ok and all(r.covariance_deviation is not None for r in results)
    assert report_criterion(4, ok, detail + f", branch covariance shift {cov:.2e}")


def test_criterion_5_growing_count(report_criterion):
    rng = np.random.default_rng(SEED)
    pairs = [(i.A, i.f0) for i in generate(SEED, 20, 10, with_f0=True)]
    pairs += [(i.A, random_f0(rng, i.A)) for i in generate(SEED, 20, 10)]
    bad = []
    for A, f0 in pairs:
        growing, total = verify_growing_count(A, f0)
        if growing != total:
            bad.append((growing, total))
    assert report_criterion(5, not bad, f"{len(pairs)} instances, mismatches {bad}")


def test_criterion_6_combinatorics(report_criterion):
    insts = generate(SEED, 20, 10, with_f0=True, generic=True)
    failures = []
    for inst in insts:
        checks = combinatorial_check(inst.A, inst.f0)
        if "beta_general_position" not in checks or not all(checks.values()):
            failures.append((inst.label, {k: v for k, v in checks.items() if not v}))
    assert report_criterion(6, not failures, f"{len(insts)} generic instances, failures {failures}")


def test_criterion_7_selberg(report_criterion):
    start = time.perf_counter()
    spec = QuadratureSpec(tol=1e-9)
    z3, a3 = (0, 1, 3), (0.6, 0.8, 1.1)
    devs = {}
    for n, p in [(1, 2), (1, 3), (2, 2)]:
        r = determinant_no_exp(SelbergParams(z3[:p], a3[:p], 0.3, n), spec)
        devs[f"noexp{(n, p)}"] = r.deviation if r.converged else math.inf
    for n, p in [(1, 1), (1, 2), (2, 2)]:
        for a in (1.0, 2.0):
            r = determinant_exp(SelbergParams(z3[:p], a3[:p], 0.3, n, a), spec)
            devs[f"exp{(n, p)} a={a}"] = r.deviation if r.converged else math.inf
    lemma = 0.0
    for n, p in [(1, 2), (2, 2), (2, 3)]:
        for variant in ("bounded", "exponential"):
            _, _, d = critical_products_selberg(SelbergParams(z3[:p], a3[:p], 0.3, n, 1.5), variant)
            lemma = max(lemma, d)
    rect = 0.0
    P = SelbergParams((0, 1), (0.6, 0.8), 0.3, 2, 1.0)
    for l in compositions(2, 2):
        for m in compositions(2, 2):
            rect = max(rect, rectangular_to_triangular(l, m, P, spec)[2])
    seconds = time.perf_counter() - start
    worst_det = max(devs.values())
    ok = worst_det <= 1e-4 and lemma <= 1e-10 and rect <= 1e-4 and seconds < 900
    assert report_criterion(7, ok, f"determinants worst {worst_det:.2e}, lemmas {lemma:.2e}, "
                                   f"rect {rect:.2e}, {seconds:.1f}s")


def test_criterion_8_orientation_negative_control(report_criterion):
    smallest = math.inf
    for z, alpha in EXAMPLE1:
        A = points(z, alpha)
        comp = PeriodComputation(A, None, QuadratureSpec(tol=1e-10))
        for k in range(len(comp.labelling)):
            flipped = list(comp.labelling.orientations)
            flipped[k] = -flipped[k]
            r = verify(A, 1e-6, computation=comp, orientations=tuple(flipped))
            smallest = min(smallest, r.deviation)
    assert report_criterion(8, smallest >= 0.5, f"smallest deviation after one flip {smallest:.3f}")


def test_criterion_9_truncation_convergence(report_criterion):
    devs = convergence_check(points((0, 1), (0.6, 0.8)), form(1), ts=(10, 40, 160))
    monotone = all(b < a for (_, a), (_, b) in zip(devs, devs[1:]))
    detail = ", ".join(f"t={t}: {d:.3e}" for t, d in devs) + " (not gating)"
    report_criterion(9, monotone, detail)
