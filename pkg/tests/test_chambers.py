from collections import Counter
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import form, points
from hgperiod.chambers import (admissible_chambers, bounded_chambers, chamber_of_point,
                               classify_with_f0, discrete_invariants, enumerate_chambers,
                               relative_invariants, trace_of_chamber, truncate,
                               verify_growing_count)
from hgperiod.geometry import find_edge
from hgperiod.suite import random_f0, random_lines


def _vertex_multiplicities(A):
    """Number of lines through each affine vertex, by brute force."""
    return Counter({v: sum(1 for f in A.forms if f(v) == 0) for v in A.vertices})


def test_points_chambers(three_points):
    ch = enumerate_chambers(three_points)
    assert len(ch) == 4
    assert [c.point for c in bounded_chambers(three_points)] in ([(Fraction(1, 2),), (Fraction(2),)],
                                                                [(Fraction(2),), (Fraction(1, 2),)])


def test_triangle_counts(triangle):
    assert len(enumerate_chambers(triangle)) == 7
    assert len(bounded_chambers(triangle)) == 1
    c = chamber_of_point(triangle, (Fraction(1, 4), Fraction(1, 4)))
    assert c.bounded and c.signs == (1, 1, -1)


def test_vertex_of_two_lines_is_decomposable(triangle):
    inv = discrete_invariants(triangle, find_edge(triangle, [0, 1]))
    assert (inv.l, inv.s, inv.vol) == (1, 0, 0)


def test_point_invariants(three_points):
    for i in range(3):
        inv = discrete_invariants(three_points, find_edge(three_points, [i]))
        assert (inv.l, inv.s) == (1, 1)


def test_classify_triangle(triangle):
    kinds = Counter(k for _, k in classify_with_f0(triangle, form(1, 1)))
    assert kinds == {"bounded": 1, "growing": 1, "other-unbounded": 5}
    assert len(admissible_chambers(triangle, form(1, 1))) == 2


def test_trace_face_of_growing_quadrant(triangle):
    f0 = form(1, 1)
    grow = [c for c, k in classify_with_f0(triangle, f0) if k == "growing"][0]
    face = trace_of_chamber(triangle, grow, f0)
    assert len(face.directions) == 2


def test_truncation_adds_one_hyperplane(triangle):
    At = truncate(triangle, form(1, 1), 5)
    assert len(At) == len(triangle) + 1
    assert len(bounded_chambers(At)) == 2


def test_relative_invariants_of_points_with_f0():
    A = points([0, 1], [0.6, 0.8])
    F = find_edge(A, [0])
    assert relative_invariants(A, F, form(1)).vol == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 5))
def test_zaslavsky_for_line_arrangements(seed, p):
    A = random_lines(np.random.default_rng(seed), p)
    excess = sum(m - 1 for m in _vertex_multiplicities(A).values())
    assert len(enumerate_chambers(A)) == 1 + p + excess
    assert len(bounded_chambers(A)) == 1 - p + excess


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 4))
def test_growing_count_matches_volumes(seed, p):
    rng = np.random.default_rng(seed)
    A = random_lines(rng, p)
    growing, total = verify_growing_count(A, random_f0(rng, A))
    assert growing == total
