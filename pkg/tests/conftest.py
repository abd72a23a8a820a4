from __future__ import annotations

from fractions import Fraction

import pytest

from hgperiod.geometry import LinearForm, build_arrangement


def points(zs, weights):
    """Arrangement of the points zs on the line, f_i = t - z_i."""
    forms = [LinearForm((Fraction(1),), -Fraction(z)) for z in zs]
    return build_arrangement(1, forms, weights)


def lines(abc, weights):
    """Lines a x + b y + c = 0 in the plane."""
    forms = [LinearForm((Fraction(a), Fraction(b)), Fraction(c)) for a, b, c in abc]
    return build_arrangement(2, forms, weights)


def form(*coeffs, const=0):
    return LinearForm(tuple(Fraction(c) for c in coeffs), Fraction(const))


@pytest.fixture
def three_points():
    return points([0, 1, 3], [0.6, 0.8, 1.1])


@pytest.fixture
def triangle():
    # x = 0, y = 0, x + y = 1
    return lines([(1, 0, 0), (0, 1, 0), (1, 1, -1)], [0.5, 0.7, 0.9])


ACCEPTANCE_LINES = []


@pytest.fixture
def report_criterion():
    """Record one pass/fail line per acceptance criterion."""
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
