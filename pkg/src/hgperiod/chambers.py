"""Chambers (domains) of an arrangement, their classification, and the
discrete length / width / volume of flats."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import rational as Q
from .errors import ConstantF0, NotGrowing, TThreshold
from .geometry import (INF, Arrangement, Edge, LinearForm, edge_chart,
                       edge_chart_relative, edge_containing, normal_chart, projectivize, section,
                       trace_chart)


@dataclass(frozen=True)
class Chamber:
    signs: tuple          # +1/-1 per hyperplane
    point: tuple          # exact interior point
    vertices: tuple       # vertices of the closure
    rays: tuple           # extreme rays of the recession cone (pointed case)
    pointed: bool         # False when the arrangement is not essential

    @property
    def bounded(self) -> bool:
        return self.pointed and not self.rays

    def constraints(self, A: Arrangement, strict=True):
        return [(Q.scale(s, f.homogeneous), s * f.constant, strict)
                for s, f in zip(self.signs, A.forms)]

    def contains(self, A: Arrangement, x) -> bool:
        """Closure membership (exact)."""
        return all(s * f(x) >= 0 for s, f in zip(self.signs, A.forms))

    def is_growing(self, f0: LinearForm) -> bool:
        return (self.pointed and bool(self.rays)
                and all(Q.dot(f0.homogeneous, r) > 0 for r in self.rays))


def _ray_key(d):
    m = max(abs(x) for x in d)
    return tuple(x / m for x in d)


@lru_cache(maxsize=None)
def _ray_candidates(A: Arrangement):
    n = A.dimension
    rows = A.homogeneous_rows()
    cands = {}
    for sub in itertools.combinations(range(len(rows)), n - 1):
        ker = Q.nullspace([rows[i] for i in sub], n)
        if len(ker) != 1:
            continue
        for s in (1, -1):
            d = Q.scale(s, ker[0])
            cands[_ray_key(d)] = None
    return tuple(cands)


@lru_cache(maxsize=None)
def enumerate_chambers(A: Arrangement) -> tuple:
    """All chambers, sorted lexicographically by sign vector."""
    n = A.dimension
    if n == 0:
        return (Chamber((), (), ((),), (), True),)
    signs = [()]
    for f in A.forms:
        nxt = []
        for s in signs:
            cons = [(Q.scale(si, g.homogeneous), si * g.constant, True)
                    for si, g in zip(s, A.forms)]
            for sign in (1, -1):
                trial = cons + [(Q.scale(sign, f.homogeneous), sign * f.constant, True)]
                if Q.find_point(trial, n) is not None:
                    nxt.append(s + (sign,))
        signs = nxt
    essential = A.is_essential()
    rays_all = _ray_candidates(A) if essential else ()
    out = []
    for s in sorted(signs):
        verts = tuple(v for v in A.vertices
                      if all(si * f(v) >= 0 for si, f in zip(s, A.forms))) if essential else ()
        rays = tuple(r for r in rays_all
                     if all(si * Q.dot(f.homogeneous, r) >= 0 for si, f in zip(s, A.forms)))
        if essential and not rays:
            point = Q.mean(verts)
        else:
            cons = [(Q.scale(si, g.homogeneous), si * g.constant, True)
                    for si, g in zip(s, A.forms)]
            point = Q.find_point(cons, n)
        out.append(Chamber(s, point, verts, rays, essential))
    return tuple(out)


def bounded_chambers(A: Arrangement) -> list:
    return [c for c in enumerate_chambers(A) if c.bounded]


def count_bounded(A: Arrangement | None) -> int:
    if A is None:
        return 0
    if A.dimension == 0:
        return 1
    if not A.is_essential():
        return 0
    return len(bounded_chambers(A))


def chamber_of_point(A: Arrangement, x) -> Chamber:
    s = tuple(1 if f(x) > 0 else -1 for f in A.forms)
    for c in enumerate_chambers(A):
        if c.signs == s:
            return c
    raise ValueError("point lies on a hyperplane")


# --------------------------------------------------------------------------
# classification with respect to f0
# --------------------------------------------------------------------------

BOUNDED, GROWING, OTHER = "bounded", "growing", "other-unbounded"


def classify(chamber: Chamber, f0: LinearForm) -> str:
    if chamber.bounded:
        return BOUNDED
    if chamber.is_growing(f0):
        return GROWING
    return OTHER


def classify_with_f0(A: Arrangement, f0: LinearForm) -> list:
    """List of (chamber, classification)."""
    if f0.is_constant():
        raise ConstantF0("f0 must be non-constant")
    return [(c, classify(c, f0)) for c in enumerate_chambers(A)]


def admissible_chambers(A: Arrangement, f0: LinearForm) -> list:
    """Bounded or growing chambers."""
    return [c for c, kind in classify_with_f0(A, f0) if kind != OTHER]


@dataclass(frozen=True)
class TraceFace:
    directions: tuple   # vertices as directions v with f0°(v) = 1
    chart_points: tuple  # the same in trace-chart coordinates

    def interior_direction(self):
        return Q.mean(self.directions)


def trace_of_chamber(A: Arrangement, chamber: Chamber, f0: LinearForm) -> TraceFace:
    if not chamber.is_growing(f0):
        raise NotGrowing("trace is defined for growing chambers")
    tc = trace_chart(A, f0)
    dirs = tuple(sorted(set(Q.scale(1 / Q.dot(f0.homogeneous, r), r) for r in chamber.rays)))
    return TraceFace(dirs, tuple(tc.from_direction(d) for d in dirs))


# --------------------------------------------------------------------------
# discrete invariants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteInvariants:
    l: int
    s: int

    @property
    def vol(self) -> int:
        return self.l * self.s


def discrete_length(A: Arrangement, F: Edge, chart_label=None) -> int:
    if F.dimension == 0:
        return 1
    return count_bounded(edge_chart(A, F, chart_label))


def discrete_width(A: Arrangement, F: Edge, chart_label=None) -> int:
    chart = normal_chart(A, F, chart_label)
    if chart is None:
        return 1
    return count_bounded(chart)


@lru_cache(maxsize=None)
def discrete_invariants(A: Arrangement, F: Edge) -> DiscreteInvariants:
    return DiscreteInvariants(discrete_length(A, F), discrete_width(A, F))


def edge_in_hyperplane(F: Edge, form: tuple) -> bool:
    return all(Q.dot(form, b) == 0 for b in F.basis)


def discrete_length_relative(A: Arrangement, F: Edge, f0: LinearForm) -> int:
    """Number of bounded faces of the trace arrangement spanning the flat at
    infinity F, i.e. domains of Ā_F bounded relative to the closure of H0."""
    if F.dimension == 0:
        return 1
    return count_bounded(edge_chart_relative(A, F, f0.homogenized()))


def relative_invariants(A: Arrangement, F: Edge, f0: LinearForm) -> DiscreteInvariants:
    """l and s of F measured in the truncated arrangement A_t for large t.

    For flats not inside the closure of H0 this counts segments of F cut off
    by H_t, which is the count the determinant formula with f0 needs.
    """
    top = max((f0(v) for v in A.vertices), default=Fraction(0))
    At = truncate(A, f0, max(top, Fraction(0)) + 1)
    Ft = edge_containing(At, [i if i == INF else i + 1 for i in F.indices])
    return discrete_invariants(At, Ft)


def verify_growing_count(A: Arrangement, f0: LinearForm) -> tuple:
    """(number of growing chambers, sum of l(F)s(F) over flats at infinity not in H0).

    l(F) counts the bounded faces at infinity (relative to H0) spanning F.
    """
    if f0.is_constant():
        raise ConstantF0("f0 must be non-constant")
    growing = sum(1 for c in enumerate_chambers(A) if c.is_growing(f0))
    h0 = f0.homogenized()
    total = 0
    for F in projectivize(A).minus:
        if edge_in_hyperplane(F, h0):
            continue
        s = discrete_width(A, F)
        if s:
            total += discrete_length_relative(A, F, f0) * s
    return growing, total


def _direction_signs(A: Arrangement, v):
    return tuple((Q.dot(f.homogeneous, v) > 0) - (Q.dot(f.homogeneous, v) < 0) for f in A.forms)


def _along(E: Edge, coords):
    u = E.point
    for c, d in zip(coords, E.directions):
        u = Q.add(u, Q.scale(c, d))
    return u


def trace_face_counts(A: Arrangement, f0: LinearForm) -> list:
    """For each bounded face of the trace arrangement: (signs, #growing chambers
    with that trace, discrete width of the corresponding flat at infinity).

    Faces are identified by the signs of the f_i° at a relative-interior
    direction.
    """
    tc = trace_chart(A, f0)
    T = tc.arrangement
    counts = Counter()
    for c in enumerate_chambers(A):
        if c.is_growing(f0):
            face = trace_of_chamber(A, c, f0)
            counts[_direction_signs(A, face.interior_direction())] += 1
    faces = {}
    if T.dimension == 0:
        faces[_direction_signs(A, tc.base)] = tc.base
    else:
        for ch in bounded_chambers(T):
            v = tc.to_direction(ch.point)
            faces[_direction_signs(A, v)] = v
        for E in projectivize(T).plus:
            sub = section(T, E) if E.dimension > 0 else None
            points = [E.point] if sub is None else [
                _along(E, ch.point) for ch in bounded_chambers(sub)]
            for u in points:
                v = tc.to_direction(u)
                faces[_direction_signs(A, v)] = v
    out = []
    for signs, v in sorted(faces.items()):
        zero = [i for i, s in enumerate(signs) if s == 0] + [INF]
        F = edge_containing(A, zero)
        out.append((signs, counts.get(signs, 0), discrete_width(A, F)))
    extra = set(counts) - set(faces)
    for signs in sorted(extra):
        out.append((signs, counts[signs], None))
    return out


# --------------------------------------------------------------------------
# truncation
# --------------------------------------------------------------------------

def truncate(A: Arrangement, f0: LinearForm, t) -> Arrangement:
    """A_t: the hyperplane f_t = 1 - f0/t = 0 placed first, with weight t."""
    t = Q.as_fraction(t)
    if f0.is_constant():
        raise ConstantF0("f0 must be non-constant")
    top = max((f0(v) for v in A.vertices), default=Fraction(0))
    if t <= 0 or t <= top:
        raise TThreshold(f"t={t} must exceed max(0, max f0 over vertices) = {max(top, 0)}")
    ft = LinearForm(Q.scale(-1 / t, f0.homogeneous), 1 - f0.constant / t)
    forms = (ft,) + A.forms
    weights = (complex(float(t)),) + A.weights
    return Arrangement(A.dimension, forms, weights)


def truncation_map(A: Arrangement, f0: LinearForm, At: Arrangement) -> dict:
    """Bounded chambers of A_t (by index) -> chambers of A (by index)."""
    chambers = enumerate_chambers(A)
    by_signs = {c.signs: k for k, c in enumerate(chambers)}
    out = {}
    for k, c in enumerate(enumerate_chambers(At)):
        if c.bounded:
            out[k] = by_signs[c.signs[1:]]
    return out
