import cmath
import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import form
from hgperiod.chambers import chamber_of_point
from hgperiod.errors import PointOnHyperplane
from hgperiod.forms import (BranchAssignment, LogOneForm, basis_n_form, flag_one_forms,
                            master_value, permutation_sign, phi_set, wedge)
from hgperiod.nbc import bnbc_bases, bnbc_with_f0


def test_triangle_basis_form(triangle):
    om = flag_one_forms(triangle, (1, 2))
    assert om[0].terms == ((1, 0.7 + 0j), (2, 0.9 + 0j))
    phi = basis_n_form(triangle, (1, 2))
    assert phi.terms == ((pytest.approx(0.63), (1, 2)),)
    x, y = 0.2, 0.3
    # det of the normals of f2 = y and f3 = x + y - 1 is -1
    assert phi.coefficient(triangle, (x, y)) == pytest.approx(0.63 * -1 / (y * (x + y - 1)))
    with pytest.raises(PointOnHyperplane):
        phi.coefficient(triangle, (0.5, 0.0))


def test_phi_set_sizes(triangle):
    assert len(phi_set(triangle)) == len(bnbc_bases(triangle))
    assert len(phi_set(triangle, form(1, 1))) == len(bnbc_with_f0(triangle, form(1, 1)))


def test_wedge_antisymmetric(triangle):
    a = LogOneForm(((0, 1.0), (1, 2.0)))
    b = LogOneForm(((1, 3.0), (2, 5.0)))
    ab, ba = wedge(triangle, [a, b]), wedge(triangle, [b, a])
    assert dict((T, c) for c, T in ab.terms) == {T: -c for c, T in ba.terms}
    assert wedge(triangle, [a, a]).terms == ()


@given(st.permutations(range(5)))
def test_permutation_sign_is_parity(perm):
    inversions = sum(1 for i, j in itertools.combinations(range(5), 2) if perm[i] > perm[j])
    assert permutation_sign(perm) == (-1) ** inversions


def test_branch_default_and_shift(three_points):
    ch = chamber_of_point(three_points, (2,))   # 1 < t < 3: f3 < 0
    b = BranchAssignment()
    assert [b.half_turns(ch, i) for i in range(3)] == [0, 0, 1]
    shifted = BranchAssignment({(ch.signs, 2): 1})
    assert shifted.half_turns(ch, 2) == 3
    assert shifted.phase(three_points, ch, 2) == pytest.approx(
        b.phase(three_points, ch, 2) * cmath.exp(2j * cmath.pi * 1.1))
    v = master_value(three_points, b, ch, (2.0,))
    assert v == pytest.approx(2 ** 0.6 * 1 ** 0.8 * cmath.exp(1.1 * cmath.log(-1 + 0j)))
