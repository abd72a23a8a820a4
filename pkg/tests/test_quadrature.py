import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import form, lines, points
from hgperiod.errors import NonIntegrable, NotGrowing
from hgperiod.geometry import build_arrangement
from hgperiod.polytope import Polyhedron
from hgperiod.quadrature import (PeriodComputation, QuadratureSpec, RegionIntegrator,
                                 convergence_check, determinant, jacobi_rule, relative_deviation,
                                 verify)

SPEC = QuadratureSpec(tol=1e-12)


def test_spec_levels_and_validation():
    assert list(QuadratureSpec(nodes=10, max_depth=3).levels()) == [10, 15, 22, 33]
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0)
    with pytest.raises(ValueError):
        QuadratureSpec(nodes=1)


@pytest.mark.parametrize("E", [-0.5, 0.0, 1.3, 0.4 + 0.7j, -0.6 - 1.2j])
def test_jacobi_rule_exact_on_polynomials(E):
    x, w = jacobi_rule(8, E)
    for k in range(16):
        assert np.sum(w * x ** k) == pytest.approx(1 / (E + k + 1), rel=1e-12, abs=1e-14)


def test_jacobi_rule_rejects_nonintegrable():
    with pytest.raises(NonIntegrable):
        jacobi_rule(5, -1.0)


def _interval(lo, hi):
    return Polyhedron((form(1, const=-lo), form(-1, const=hi)), 1)


def test_interval_against_mpmath():
    # t^0.6 (t - 1)^-0.2 (3 - t)^0.1 on [1, 3]
    region = _interval(1, 3)
    factors = [form(1), form(1, const=-1), form(-1, const=3)]
    val, err, ok = RegionIntegrator(region, factors).adaptive([0.6, -0.2, 0.1], SPEC)
    ref = mpmath.quad(lambda t: t ** 0.6 * (t - 1) ** -0.2 * (3 - t) ** 0.1, [1, 2, 3])
    assert ok and val == pytest.approx(complex(ref), rel=1e-8)


def test_interval_complex_exponents_against_mpmath():
    region = _interval(0, 1)
    factors = [form(1), form(-1, const=1)]
    e = [-0.4 + 0.3j, 0.2 - 0.5j]
    val, _, ok = RegionIntegrator(region, factors).adaptive(e, SPEC)
    assert ok and val == pytest.approx(complex(mpmath.beta(e[0] + 1, e[1] + 1)), rel=1e-10)


def test_semi_infinite_against_mpmath():
    region = Polyhedron((form(1, const=-1),), 1)
    factors = [form(1), form(1, const=-1)]
    f0 = form(Fraction(3, 2))
    val, _, ok = RegionIntegrator(region, factors, f0).adaptive([0.7, -0.3], SPEC)
    ref = mpmath.quad(lambda t: mpmath.exp(-1.5 * t) * t ** 0.7 * (t - 1) ** -0.3, [1, 2, mpmath.inf])
    assert ok and val == pytest.approx(complex(ref), rel=1e-8)


@pytest.mark.parametrize("scale", [1.0, 2.0, 0.5])
def test_growing_quadrant_closed_form(scale):
    region = Polyhedron((form(1, 0), form(0, 1)), 2)
    integ = RegionIntegrator(region, [form(1, 0), form(0, 1)], form(1, 1))
    a, b = 0.4, -0.3
    val, _, ok = integ.adaptive([a, b], SPEC, scale)
    expected = math.gamma(a + 1) * math.gamma(b + 1) / scale ** (a + b + 2)
    assert ok and val == pytest.approx(expected, rel=1e-10)


def test_triangle_simplex_closed_form():
    # Dirichlet integral over x, y >= 0, x + y <= 1
    region = Polyhedron((form(1, 0), form(0, 1), form(-1, -1, const=1)), 2)
    factors = [form(1, 0), form(0, 1), form(-1, -1, const=1)]
    e = (0.5, -0.5, 0.25)
    val, _, ok = RegionIntegrator(region, factors).adaptive(e, SPEC)
    g = [math.gamma(x + 1) for x in e]
    assert ok and val == pytest.approx(g[0] * g[1] * g[2] / math.gamma(sum(e) + 3), rel=1e-10)


def test_unbounded_region_needs_growing_f0():
    region = Polyhedron((form(1, const=-1),), 1)
    with pytest.raises(NotGrowing):
        RegionIntegrator(region, [form(1)])
    with pytest.raises(NotGrowing):
        RegionIntegrator(region, [form(1)], form(-1))


def test_nonintegrable_exponent():
    with pytest.raises(NonIntegrable):
        RegionIntegrator(_interval(0, 1), [form(1)]).integrate([-1.2])


def test_triangle_identity(triangle):
    r = verify(triangle, 1e-8)
    assert r.passed and r.size == 1


def test_relative_deviation():
    assert relative_deviation(1, 1) == 0
    assert relative_deviation(0, 0) == 0
    assert relative_deviation(1, -1) == 2 / 1
    assert determinant(np.zeros((0, 0))) == 1


@settings(max_examples=8, deadline=None)
@given(st.permutations(range(4)))
def test_relabelling_hyperplanes_keeps_the_identity(perm):
    abc = [(1, 0, 0), (0, 1, 0), (1, 1, -2), (1, -1, -1)]
    w = [0.5, 0.7, 0.9, 1.2]
    A = lines(abc, w)
    B = lines([abc[k] for k in perm], [w[k] for k in perm])
    ra, rb = verify(A, 1e-8), verify(B, 1e-8)
    assert ra.passed and rb.passed
    assert abs(rb.lhs) == pytest.approx(abs(ra.lhs), rel=1e-9)


def test_row_and_column_permutations_preserve_abs_det():
    A = points([0, 1, 3, 4], [0.6, 0.8, 1.1, 0.4])
    M = PeriodComputation(A, None, SPEC).matrix().matrix
    rng = np.random.default_rng(0)
    P = M[np.ix_(rng.permutation(3), rng.permutation(3))]
    assert abs(determinant(P)) == pytest.approx(abs(determinant(M)), rel=1e-12)


def test_orientation_flip_breaks_identity(three_points):
    comp = PeriodComputation(three_points, None, QuadratureSpec(tol=1e-10))
    flipped = list(comp.labelling.orientations)
    flipped[0] = -flipped[0]
    r = verify(three_points, 1e-6, computation=comp, orientations=tuple(flipped))
    assert r.deviation >= 0.5


def test_complex_weight_plane_identity():
    A = build_arrangement(2, [form(1, 0), form(0, 1), form(1, 1, const=-1), form(1, -2, const=-1)],
                          [0.5 + 0.2j, 0.7 - 0.1j, 0.9, 1.1 + 0.3j])
    assert verify(A, 1e-8).passed


def test_truncation_converges():
    A = points([0, 1], [0.6, 0.8])
    devs = [d for _, d in convergence_check(A, form(1), ts=(10, 40))]
    assert devs[1] < devs[0] < 0.5
