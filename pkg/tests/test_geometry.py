from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import form, lines, points
from hgperiod.errors import DuplicateHyperplane, NotEssential, ZeroForm
from hgperiod.geometry import INF, build_arrangement, find_edge, intersection_lattice, projectivize


def test_triangle_projective_lattice(triangle):
    labels = [e.label() for e in triangle.projective_edges]
    assert labels == ["H(1)", "H(2)", "H(3)", "H(inf)", "H(1,2)", "H(1,3)", "H(2,3)",
                      "H(1,inf)", "H(2,inf)", "H(3,inf)"]
    assert len(intersection_lattice(triangle)) == 6
    assert triangle.vertices == ((0, 0), (0, 1), (1, 0))


def test_parallel_lines_meet_at_infinity():
    A = lines([(1, 0, 0), (1, 0, -1), (0, 1, 0)], [0.5, 0.7, 0.9])
    F = find_edge(A, [0, 1, INF])
    assert F.dimension == 0 and F.at_infinity
    assert F.label() == "H(1,2,inf)"


def test_projectivize_splits_at_infinity(triangle):
    P = projectivize(triangle)
    assert all(not F.at_infinity for F in P.plus)
    assert all(F.at_infinity for F in P.minus)
    assert len(P.plus) + len(P.minus) == 10
    assert P.infinity_weight == pytest.approx(-(0.5 + 0.7 + 0.9))


def test_build_errors():
    with pytest.raises(ZeroForm):
        build_arrangement(1, [form(0, const=1)], [1])
    with pytest.raises(DuplicateHyperplane):
        build_arrangement(1, [form(1, const=-1), form(2, const=-2)], [1, 1])
    with pytest.raises(NotEssential):
        lines([(1, 0, 0), (1, 0, -1)], [1, 1])
    with pytest.raises(ValueError):
        build_arrangement(2, [form(1)], [1])


def test_form_evaluation():
    f = form(2, -1, const=3)
    assert f((Fraction(1), Fraction(5))) == 0
    assert f.value([1.0, 5.0]) == 0.0
    assert (-f).constant == -3


@settings(max_examples=40, deadline=None)
@given(st.sets(st.fractions(-20, 20, max_denominator=4), min_size=1, max_size=6))
def test_points_lattice_size(zs):
    A = points(sorted(zs), [0.5] * len(zs))
    # every point plus the point at infinity
    assert len(A.projective_edges) == len(zs) + 1
    assert len(A.vertices) == len(zs)
