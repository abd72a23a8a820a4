"""Circuits, (beta)nbc bases, flags, and the labelling of chambers by bases."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import rational as Q
from .chambers import (Chamber, admissible_chambers, bounded_chambers,
                       truncate)
from .errors import BijectionFailure, ConstantF0, DegenerateFlag
from .geometry import Arrangement, LinearForm


def _meets(A: Arrangement, idx) -> bool:
    rows = [A.forms[i].homogeneous for i in idx]
    rhs = [-A.forms[i].constant for i in idx]
    return Q.solve_affine(rows, rhs, A.dimension) is not None


def _rank(A: Arrangement, idx) -> int:
    return Q.rank([A.forms[i].homogeneous for i in idx], A.dimension)


@lru_cache(maxsize=None)
def circuits(A: Arrangement) -> tuple:
    """Minimal dependent index sets with nonempty intersection."""
    out = []
    n = A.dimension
    for size in range(2, n + 2):
        for S in itertools.combinations(range(len(A)), size):
            if _rank(A, S) != size - 1 or not _meets(A, S):
                continue
            if all(_rank(A, T) == size - 1 for T in itertools.combinations(S, size - 1)):
                out.append(S)
    return tuple(out)


def broken_circuits(A: Arrangement) -> tuple:
    return tuple(sorted({C[1:] for C in circuits(A)}))


def is_basis(A: Arrangement, idx) -> bool:
    return len(idx) == A.dimension and _rank(A, idx) == A.dimension


@lru_cache(maxsize=None)
def nbc_bases(A: Arrangement) -> tuple:
    broken = [set(b) for b in broken_circuits(A)]
    out = []
    for B in itertools.combinations(range(len(A)), A.dimension):
        if not is_basis(A, B):
            continue
        if any(b <= set(B) for b in broken):
            continue
        out.append(B)
    return tuple(out)


def exchange_condition(A: Arrangement, B) -> bool:
    """Every H in B can be exchanged for a smaller hyperplane."""
    for pos, h in enumerate(B):
        rest = B[:pos] + B[pos + 1:]
        if not any(is_basis(A, tuple(sorted(rest + (g,)))) for g in range(h) if g not in B):
            return False
    return True


@lru_cache(maxsize=None)
def bnbc_bases(A: Arrangement) -> tuple:
    """Ordered betanbc bases in lexicographic order."""
    return tuple(B for B in nbc_bases(A) if exchange_condition(A, B))


def truncation_parameter(A: Arrangement, f0: LinearForm) -> Fraction:
    top = max((f0(v) for v in A.vertices), default=Fraction(0))
    return max(top, Fraction(0)) + 1


@lru_cache(maxsize=None)
def bnbc_with_f0(A: Arrangement, f0: LinearForm, t=None) -> tuple:
    """betanbc(A; f0), computed on A_t with H_t as the smallest hyperplane."""
    if f0.is_constant():
        raise ConstantF0("f0 must be non-constant")
    if t is None:
        t = truncation_parameter(A, f0)
    At = truncate(A, f0, t)
    out = []
    for B in bnbc_bases(At):
        if 0 in B:
            raise AssertionError("H_t appeared in a betanbc basis of A_t")
        out.append(tuple(i - 1 for i in B))
    return tuple(out)


# --------------------------------------------------------------------------
# flags, adjacency, orientation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Flag:
    basis: tuple
    vertex: tuple
    directions: tuple  # directions[j] spans F_{j+1} together with directions[:j]

    def step_hyperplane(self, j: int) -> int:
        """Index of the hyperplane cutting F_{j-1} out of F_j (1 <= j <= n)."""
        return self.basis[j - 1]


def flag_of(A: Arrangement, B) -> Flag:
    n = A.dimension
    rows = [A.forms[i].homogeneous for i in B]
    rhs = [-A.forms[i].constant for i in B]
    vertex, _ = Q.solve_affine(rows, rhs, n)
    dirs = []
    for j in range(1, n + 1):
        # F_j = intersection of H_{B[k]} for k >= j (0-based: B[j:]).
        ker = Q.nullspace(rows[j:], n)
        # pick a direction of F_j not in F_{j-1}
        d = next(v for v in ker if Q.dot(rows[j - 1], v) != 0)
        dirs.append(d)
    return Flag(tuple(B), vertex, tuple(dirs))


def flag_witnesses(A: Arrangement, flag: Flag, chamber: Chamber):
    """Points q_j in F_j ∩ closure(Δ) off F_{j-1}, or None if not adjacent."""
    if not chamber.contains(A, flag.vertex):
        return None
    qs = []
    for j in range(1, A.dimension + 1):
        dirs = flag.directions[:j]
        cons = []
        for s, f in zip(chamber.signs, A.forms):
            coeffs = tuple(s * Q.dot(f.homogeneous, d) for d in dirs)
            cons.append((coeffs, s * f(flag.vertex), False))
        h = flag.step_hyperplane(j)
        s = chamber.signs[h]
        f = A.forms[h]
        cons.append((tuple(s * Q.dot(f.homogeneous, d) for d in dirs), s * f(flag.vertex), True))
        y = Q.find_point(cons, j)
        if y is None:
            return None
        q = flag.vertex
        for c, d in zip(y, dirs):
            q = Q.add(q, Q.scale(c, d))
        qs.append(q)
    return qs


def is_adjacent(A: Arrangement, flag: Flag, chamber: Chamber) -> bool:
    return flag_witnesses(A, flag, chamber) is not None


def intrinsic_orientation(A: Arrangement, flag: Flag, chamber: Chamber) -> int:
    """Sign of the intrinsic frame of the chamber against the standard frame."""
    qs = flag_witnesses(A, flag, chamber)
    if qs is None:
        raise DegenerateFlag("flag is not adjacent to the chamber")
    d = Q.det([Q.sub(q, flag.vertex) for q in qs])
    if d == 0:
        raise DegenerateFlag("flag witnesses are dependent")
    return 1 if d > 0 else -1


@dataclass(frozen=True)
class Labelling:
    """betanbc bases paired with chambers, in betanbc order."""

    bases: tuple
    chambers: tuple
    orientations: tuple
    flags: tuple

    def __len__(self):
        return len(self.bases)


def _unique_matching(options):
    """All perfect matchings (as tuples) of rows to distinct columns."""
    found = []

    def rec(k, used, acc):
        if len(found) > 1:
            return
        if k == len(options):
            found.append(tuple(acc))
            return
        for c in options[k]:
            if c not in used:
                rec(k + 1, used | {c}, acc + [c])

    rec(0, frozenset(), [])
    return found


def chamber_bijection(A: Arrangement, f0: LinearForm | None = None) -> Labelling:
    if f0 is None:
        bases = bnbc_bases(A)
        targets = bounded_chambers(A)
    else:
        bases = bnbc_with_f0(A, f0)
        targets = admissible_chambers(A, f0)
    if len(bases) != len(targets):
        raise BijectionFailure(f"{len(bases)} bases but {len(targets)} chambers")
    flags = [flag_of(A, B) for B in bases]
    options = [[k for k, c in enumerate(targets) if is_adjacent(A, fl, c)] for fl in flags]
    matchings = _unique_matching(options)
    if len(matchings) != 1:
        raise BijectionFailure(f"found {len(matchings)} adjacency matchings, expected exactly one")
    chambers = tuple(targets[k] for k in matchings[0])
    orient = tuple(intrinsic_orientation(A, fl, c) for fl, c in zip(flags, chambers))
    return Labelling(tuple(bases), chambers, orient, tuple(flags))
