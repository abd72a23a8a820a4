"""Logarithmic forms, the n-forms attached to bases, branches of the master function."""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field

from . import rational as Q
from .chambers import Chamber
from .errors import PointOnHyperplane
from .geometry import Arrangement, Edge, LinearForm, edge_containing
from .nbc import bnbc_bases, bnbc_with_f0


@dataclass(frozen=True)
class LogOneForm:
    """sum of coeff * df_i / f_i over (i, coeff) pairs."""

    terms: tuple


def edge_one_form(A: Arrangement, F: Edge) -> LogOneForm:
    if F.at_infinity:
        raise ValueError("one-forms are attached to affine flats")
    edge_containing(A, F.indices)  # membership check
    return LogOneForm(tuple((i, A.weights[i]) for i in sorted(F.indices)))


def permutation_sign(seq) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class NForm:
    """sum of coeff * df_{j1}/f_{j1} ^ ... ^ df_{jn}/f_{jn}, index tuples increasing."""

    terms: tuple  # ((coeff, (j1, ..., jn)), ...)

    def pole_sets(self) -> tuple:
        return tuple(T for _, T in self.terms)

    def coefficient(self, A: Arrangement, x) -> complex:
        """Coefficient of dx_1 ^ ... ^ dx_n at the point x (floats)."""
        total = 0j
        for c, T in self.terms:
            d = float(Q.det([A.forms[j].homogeneous for j in T]))
            denom = 1.0
            for j in T:
                v = A.forms[j].value(x)
                if v == 0:
                    raise PointOnHyperplane(f"x lies on hyperplane {j + 1}")
                denom *= v
            total += c * d / denom
        return total


def wedge(A: Arrangement, factors) -> NForm:
    """Expand a wedge product of LogOneForms into normalized terms."""
    n = A.dimension
    acc = {}
    for choice in itertools.product(*[f.terms for f in factors]):
        idx = tuple(i for i, _ in choice)
        if len(set(idx)) < len(idx):
            continue
        if Q.rank([A.forms[i].homogeneous for i in idx], n) < len(idx):
            continue
        coeff = 1 + 0j
        for _, c in choice:
            coeff *= c
        key = tuple(sorted(idx))
        acc[key] = acc.get(key, 0j) + permutation_sign(idx) * coeff
    return NForm(tuple((c, T) for T, c in sorted(acc.items()) if c != 0))


def flag_one_forms(A: Arrangement, B) -> list:
    """omega(F_0), ..., omega(F_{n-1}) for the flag of the basis B."""
    out = []
    for j in range(A.dimension):
        F = edge_containing(A, B[j:])
        out.append(edge_one_form(A, F))
    return out


def basis_n_form(A: Arrangement, B) -> NForm:
    return wedge(A, flag_one_forms(A, B))


def phi_set(A: Arrangement, f0: LinearForm | None = None) -> list:
    bases = bnbc_bases(A) if f0 is None else bnbc_with_f0(A, f0)
    return [basis_n_form(A, B) for B in bases]


# --------------------------------------------------------------------------
# branches
# --------------------------------------------------------------------------

@dataclass
class BranchAssignment:
    """Argument of f_i on a chamber, stored as an integer number of half turns.

    The default is 0 where f_i > 0 and 1 (argument pi) where f_i < 0.
    ``shifts`` adds extra full turns: {(chamber signs, i): k} means
    theta -> theta + 2*pi*k.
    """

    shifts: dict = field(default_factory=dict)

    def half_turns(self, chamber: Chamber, i: int) -> int:
        base = 0 if chamber.signs[i] > 0 else 1
        return base + 2 * self.shifts.get((chamber.signs, i), 0)

    def phase(self, A: Arrangement, chamber: Chamber, i: int) -> complex:
        return cmath.exp(1j * cmath.pi * self.half_turns(chamber, i) * A.weights[i])

    def chamber_phase(self, A: Arrangement, chamber: Chamber) -> complex:
        out = 1 + 0j
        for i in range(len(A)):
            out *= self.phase(A, chamber, i)
        return out

    def power(self, A: Arrangement, chamber: Chamber, i: int, modulus: float) -> complex:
        """Branch value of f_i^alpha_i at a point where |f_i| = modulus."""
        theta = cmath.pi * self.half_turns(chamber, i)
        return cmath.exp(A.weights[i] * (cmath.log(modulus) + 1j * theta))


def master_value(A: Arrangement, branch: BranchAssignment, chamber: Chamber, x) -> complex:
    out = 1 + 0j
    for i, f in enumerate(A.forms):
        v = f.value(x)
        if v == 0:
            raise PointOnHyperplane(f"x lies on hyperplane {i + 1}")
        out *= branch.power(A, chamber, i, abs(v))
    return out


def evaluate_integrand(A: Arrangement, branch: BranchAssignment, chamber: Chamber,
                       phi: NForm, x, f0: LinearForm | None = None, scale: complex = 1) -> complex:
    """[exp(-scale*f0(x))] * U(x) * coefficient of phi at x."""
    val = master_value(A, branch, chamber, x) * phi.coefficient(A, x)
    if f0 is not None:
        val *= cmath.exp(-scale * f0.value(x))
    return val


def nform_label(phi: NForm) -> list:
    return [{"coeff": [c.real, c.imag], "indices": [j + 1 for j in T]} for c, T in phi.terms]

