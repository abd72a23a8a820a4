import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgperiod.quadrature import QuadratureSpec
from hgperiod.selberg import (Composition, SelbergParams, comb, compositions,
                              critical_products_selberg, determinant_exp, determinant_no_exp,
                              domains, pole_terms, rectangular_factor, rectangular_to_triangular,
                              rhs_exp)

SPEC = QuadratureSpec(tol=1e-10)


def params(n, p, a=None, gamma=0.3, shift=0):
    z = tuple(x + shift for x in (0, 1, 3)[:p])
    alpha = (0.6, 0.8, 1.1)[:p]
    return SelbergParams(z, alpha, gamma, n, a)


@settings(max_examples=30)
@given(st.integers(1, 4), st.integers(1, 4))
def test_composition_count(n, p):
    cs = compositions(n, p)
    assert len(cs) == comb(n + p - 1, p - 1)
    assert all(c.n == n and len(c.parts) == p for c in cs)
    assert cs == sorted(cs, key=lambda c: c.parts)


def test_composition_blocks():
    c = Composition((2, 0, 1))
    assert c.prefix(2) == 2 and list(c.block(1)) == [0, 1] and list(c.block(3)) == [2]
    assert c.padded(5).parts == (2, 0, 1, 0, 0)


def test_pole_terms():
    assert pole_terms(Composition((2, 0))) == {((0, 0), (1, 0)): 1}
    assert pole_terms(Composition((1, 1))) == {((0, 0), (1, 1)): 1, ((0, 1), (1, 0)): 1}


def test_params_validation():
    with pytest.raises(ValueError):
        SelbergParams((1, 0), (0.5, 0.5), 0.3, 1)
    with pytest.raises(ValueError):
        SelbergParams((0, 1), (0.5, -0.5), 0.3, 1)
    with pytest.raises(ValueError):
        SelbergParams((0, 1), (0.5, 0.5), 0.3, 1, a=-1)


def test_domain_kinds():
    P = params(2, 2, a=1)
    assert domains(Composition((2,)), P, "U").bounded
    assert not domains(Composition((1, 1)), P, "Ut").bounded


@pytest.mark.parametrize("n,p", [(1, 2), (1, 3), (2, 2)])
def test_no_exp_determinant(n, p):
    r = determinant_no_exp(params(n, p), SPEC)
    assert r.converged and r.deviation < 1e-8
    assert r.size == comb(n + p - 2, p - 2)


def test_no_exp_symmetrized_determinant():
    r = determinant_no_exp(params(2, 3), SPEC, tilde=True)
    assert r.deviation < 1e-8


@pytest.mark.parametrize("n,p", [(1, 1), (1, 2), (2, 1)])
def test_exp_determinant_prefers_the_a_reading(n, p):
    # shifted points so that the exponential readings differ
    r = determinant_exp(params(n, p, a=2, shift=1), SPEC)
    assert r.deviation < 1e-8
    assert min(r.readings, key=r.readings.get) in ("a/corrected", "a/stated")
    assert r.readings["a_pi/corrected"] > 0.5


def test_stated_a_power_differs_when_p_exceeds_one():
    P = params(1, 2, a=2)
    assert abs(rhs_exp(P, "a", "stated") / rhs_exp(P, "a", "corrected") - 1) > 0.1
    P1 = params(1, 1, a=2)
    assert rhs_exp(P1, "a", "stated") == pytest.approx(rhs_exp(P1, "a", "corrected"))


@pytest.mark.parametrize("variant", ["bounded", "exponential"])
@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (2, 3)])
def test_lemma_products(variant, n, p):
    _, _, dev = critical_products_selberg(params(n, p, a=1.5), variant)
    assert dev < 1e-10


def test_exponential_closed_side_needs_point_differences():
    _, _, dev = critical_products_selberg(params(1, 3, a=1.0), "exponential", z_product=False)
    assert dev > 0.5


def test_rectangular_factor_values():
    g = 0.3
    assert rectangular_factor(Composition((1, 1)), g) == pytest.approx(cmath.exp(2j * math.pi * g))
    assert rectangular_factor(Composition((2, 0)), g) == pytest.approx(1 + cmath.exp(2j * math.pi * g))
    assert rectangular_factor(Composition((1,)), g) == pytest.approx(1)


def test_rectangular_to_triangular_n2():
    P = params(2, 2, a=1)
    for l in compositions(2, 2):
        lhs, rhs, dev = rectangular_to_triangular(l, Composition((1, 1)), P, SPEC)
        assert dev < 1e-8
