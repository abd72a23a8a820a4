"""Affine forms, arrangements and their intersection lattices (exact rationals).

Hyperplanes are indexed 0..p-1 in input order.  The hyperplane at infinity of
the projectivization is the index ``INF``.  Points of the projective closure
live in homogeneous coordinates ``(x, x0)``; an affine form ``f = f0.x + c``
becomes the linear form ``(f0, c)`` and the hyperplane at infinity is
``x0 = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import rational as Q
from .errors import (ConstantF0, DuplicateHyperplane, EdgeNotInLattice,
                     NotEssential, ZeroForm)

INF = -1


@dataclass(frozen=True)
class LinearForm:
    """f(x) = homogeneous . x + constant."""

    homogeneous: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "homogeneous", Q.vec(self.homogeneous))
        object.__setattr__(self, "constant", Q.as_fraction(self.constant))

    @property
    def dimension(self) -> int:
        return len(self.homogeneous)

    def __call__(self, x) -> Fraction:
        return Q.dot(self.homogeneous, x) + self.constant

    def value(self, x) -> float:
        """Floating point evaluation (x may be a numpy array)."""
        return sum(float(a) * xi for a, xi in zip(self.homogeneous, x)) + float(self.constant)

    def is_constant(self) -> bool:
        return all(a == 0 for a in self.homogeneous)

    def homogenized(self) -> tuple:
        return self.homogeneous + (self.constant,)

    def scaled(self, c) -> "LinearForm":
        c = Q.as_fraction(c)
        return LinearForm(Q.scale(c, self.homogeneous), c * self.constant)

    def __neg__(self):
        return self.scaled(-1)

    def __str__(self):
        terms = [f"{a}*x{k + 1}" for k, a in enumerate(self.homogeneous) if a != 0]
        terms.append(str(self.constant))
        return " + ".join(terms)


@dataclass(frozen=True)
class Edge:
    """A flat of the (projectivized) arrangement.

    ``indices`` holds every hyperplane containing the flat; it contains INF
    exactly for flats at infinity.  ``basis`` spans the corresponding linear
    subspace of homogeneous coordinates.  For affine flats ``point`` and
    ``directions`` give an exact affine parameterization.
    """

    indices: frozenset
    basis: tuple
    dimension: int
    point: tuple | None = None
    directions: tuple = ()

    @property
    def at_infinity(self) -> bool:
        return INF in self.indices

    @property
    def codimension(self) -> int:
        return len(self.basis[0]) - 1 - self.dimension

    def sorted_indices(self) -> tuple:
        return tuple(sorted(self.indices))

    def label(self) -> str:
        names = ["inf" if i == INF else str(i + 1) for i in sorted(self.indices, key=lambda i: (i == INF, i))]
        return "H(" + ",".join(names) + ")"


@dataclass(frozen=True)
class Arrangement:
    """Ordered affine hyperplanes with complex weights.

    ``origins[k]`` lists the indices of the parent arrangement whose traces
    coincide with hyperplane k (sections and traces merge duplicates).
    """

    dimension: int
    forms: tuple
    weights: tuple = ()
    origins: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(self.forms))
        if not self.weights:
            object.__setattr__(self, "weights", tuple(0j for _ in self.forms))
        else:
            object.__setattr__(self, "weights", tuple(complex(w) for w in self.weights))
        if not self.origins:
            object.__setattr__(self, "origins", tuple((i,) for i in range(len(self.forms))))

    def __len__(self):
        return len(self.forms)

    @property
    def infinity_weight(self) -> complex:
        return -sum(self.weights)

    def homogeneous_rows(self):
        return [f.homogeneous for f in self.forms]

    def is_essential(self) -> bool:
        return Q.rank(self.homogeneous_rows(), self.dimension) == self.dimension

    def projective_form(self, i) -> tuple:
        if i == INF:
            return tuple(Fraction(0) for _ in range(self.dimension)) + (Fraction(1),)
        return self.forms[i].homogenized()

    def all_indices(self) -> list:
        return list(range(len(self.forms))) + [INF]

    @cached_property
    def projective_edges(self) -> tuple:
        return tuple(_projective_lattice(self))

    @cached_property
    def vertices(self) -> tuple:
        """Affine vertices, sorted."""
        return tuple(sorted(e.point for e in self.projective_edges
                            if not e.at_infinity and e.dimension == 0))


def build_arrangement(n: int, forms: Sequence[LinearForm], weights: Sequence) -> Arrangement:
    if n < 1:
        raise ValueError("dimension must be positive")
    if len(forms) == 0 or len(forms) != len(weights):
        raise ValueError("need at least one form and one weight per form")
    for i, f in enumerate(forms):
        if f.dimension != n:
            raise ValueError(f"form {i + 1} has {f.dimension} coefficients, expected {n}")
        if f.is_constant():
            raise ZeroForm(f"form {i + 1} has zero homogeneous part")
    for i in range(len(forms)):
        for j in range(i):
            if Q.proportional(forms[i].homogenized(), forms[j].homogenized()):
                raise DuplicateHyperplane(f"forms {j + 1} and {i + 1} define the same hyperplane")
    A = Arrangement(n, tuple(forms), tuple(complex(w) for w in weights))
    if not A.is_essential():
        raise NotEssential("the arrangement has no vertex")
    return A


# --------------------------------------------------------------------------
# intersection lattice of the projectivization
# --------------------------------------------------------------------------

def _closure(A: Arrangement, idx):
    rows = [A.projective_form(i) for i in idx]
    basis = Q.nullspace(rows, A.dimension + 1)
    if not basis:
        return None
    full = frozenset(i for i in A.all_indices()
                     if all(Q.dot(A.projective_form(i), b) == 0 for b in basis))
    return full, tuple(basis)


def _make_edge(A: Arrangement, indices, basis) -> Edge:
    dim = len(basis) - 1
    if INF in indices:
        return Edge(indices, basis, dim, None, tuple(b[:-1] for b in basis))
    finite = sorted(indices)
    rows = [A.forms[i].homogeneous for i in finite]
    rhs = [-A.forms[i].constant for i in finite]
    point, dirs = Q.solve_affine(rows, rhs, A.dimension)
    return Edge(indices, basis, dim, point, tuple(dirs))


def _projective_lattice(A: Arrangement):
    found = {}
    frontier = []
    for i in A.all_indices():
        res = _closure(A, [i])
        if res and res[0] not in found:
            found[res[0]] = res[1]
            frontier.append(res[0])
    while frontier:
        nxt = []
        for idx in frontier:
            for j in A.all_indices():
                if j in idx:
                    continue
                res = _closure(A, list(idx) + [j])
                if res and res[0] not in found:
                    found[res[0]] = res[1]
                    nxt.append(res[0])
        frontier = nxt
    edges = [_make_edge(A, idx, basis) for idx, basis in found.items()]
    edges.sort(key=lambda e: (-e.dimension, e.at_infinity,
                              tuple(sorted(i if i != INF else 10**9 for i in e.indices))))
    return edges


def intersection_lattice(A: Arrangement) -> list:
    """Affine flats of A (hyperplanes down to vertices)."""
    return [e for e in A.projective_edges if not e.at_infinity]


@dataclass(frozen=True)
class ProjectiveArrangement:
    base: Arrangement
    plus: tuple = field(default=())
    minus: tuple = field(default=())

    @property
    def infinity_weight(self) -> complex:
        return self.base.infinity_weight

    @property
    def edges(self) -> tuple:
        return self.plus + self.minus


def projectivize(A: Arrangement) -> ProjectiveArrangement:
    edges = A.projective_edges
    return ProjectiveArrangement(A, tuple(e for e in edges if not e.at_infinity),
                                 tuple(e for e in edges if e.at_infinity))


def find_edge(A: Arrangement, indices) -> Edge:
    """The flat whose full index set is ``indices``."""
    key = frozenset(indices)
    for e in A.projective_edges:
        if e.indices == key:
            return e
    raise EdgeNotInLattice(f"no flat with index set {sorted(key)}")


def edge_containing(A: Arrangement, indices) -> Edge:
    """The flat cut out by the given hyperplanes (its index set may be larger)."""
    res = _closure(A, list(indices))
    if res is None:
        raise EdgeNotInLattice(f"hyperplanes {sorted(indices)} do not meet")
    return find_edge(A, res[0])


def _check_edge(A: Arrangement, F: Edge):
    if F not in A.projective_edges:
        raise EdgeNotInLattice(f"{F.label()} is not a flat of this arrangement")


# --------------------------------------------------------------------------
# derived arrangements
# --------------------------------------------------------------------------

def merge_forms(forms, origins, dimension, weights=None) -> Arrangement:
    """Drop constant forms and merge proportional ones, keeping origin lists."""
    kept, kept_origins, kept_weights = [], [], []
    for k, f in enumerate(forms):
        if f.is_constant():
            continue
        for m, g in enumerate(kept):
            if Q.proportional(f.homogenized(), g.homogenized()):
                kept_origins[m] = tuple(kept_origins[m]) + tuple(origins[k])
                kept_weights[m] = 0j  # merged traces carry no single weight
                break
        else:
            kept.append(f)
            kept_origins.append(tuple(origins[k]))
            kept_weights.append(weights[k] if weights is not None else 0j)
    return Arrangement(dimension, tuple(kept), tuple(kept_weights), tuple(kept_origins))


def restrict_to_affine(A: Arrangement, point, directions) -> Arrangement:
    """Section by the affine subspace ``point + span(directions)``.

    Hyperplanes containing the subspace are dropped, coincident traces merged.
    Weights are carried only when no merging happens.
    """
    k = len(directions)
    forms, origins = [], []
    for i, f in enumerate(A.forms):
        hom = tuple(Q.dot(f.homogeneous, d) for d in directions)
        const = f(point)
        if all(a == 0 for a in hom):
            continue  # contains U or misses it
        forms.append(LinearForm(hom, const))
        origins.append(A.origins[i])
    out = merge_forms(forms, origins, k)
    parent = {orig: w for orig, w in zip(A.origins, A.weights)}
    weights = tuple(parent.get(orig, 0j) for orig in out.origins)
    return Arrangement(k, out.forms, weights, out.origins)


def section(A: Arrangement, F) -> Arrangement:
    """The arrangement A_F induced on an affine flat (or any affine subspace).

    ``F`` is an Edge or a pair ``(point, directions)``.
    """
    if isinstance(F, Edge):
        if F.at_infinity:
            raise EdgeNotInLattice("section needs an affine flat")
        return restrict_to_affine(A, F.point, F.directions)
    point, directions = F
    return restrict_to_affine(A, Q.vec(point), [Q.vec(d) for d in directions])


def localization(A: Arrangement, F: Edge) -> Arrangement:
    _check_edge(A, F)
    idx = sorted(i for i in F.indices if i != INF)
    return Arrangement(A.dimension, tuple(A.forms[i] for i in idx),
                       tuple(A.weights[i] for i in idx), tuple(A.origins[i] for i in idx))


def central_chart(forms, labels, chart: int) -> Arrangement:
    """Affine chart of a central arrangement of linear forms on Q^k.

    ``forms`` are coefficient vectors.  The chart is {g_chart = 1}; the
    remaining forms become affine forms on Q^(k-1).  Forms proportional to the
    chart form disappear (they are at infinity in the chart).
    """
    g = forms[chart]
    k = len(g)
    j = next(i for i, x in enumerate(g) if x != 0)
    v0 = tuple(Fraction(1) / g[j] if i == j else Fraction(0) for i in range(k))
    K = Q.nullspace([g], k)
    out, origins = [], []
    for m, h in enumerate(forms):
        if m == chart:
            continue
        out.append(LinearForm(tuple(Q.dot(h, b) for b in K), Q.dot(h, v0)))
        origins.append((labels[m],))
    return merge_forms(out, origins, k - 1)


def _restrict_linear(A: Arrangement, idx, basis):
    """Restrictions of the projective forms ``idx`` to span(basis); zero ones dropped."""
    forms, labels = [], []
    for i in idx:
        h = tuple(Q.dot(A.projective_form(i), b) for b in basis)
        if any(x != 0 for x in h):
            forms.append(h)
            labels.append(i)
    return forms, labels


def _dedupe_linear(forms, labels):
    kept, kept_labels = [], []
    for h, lab in zip(forms, labels):
        if any(Q.proportional(h, g) for g in kept):
            continue
        kept.append(h)
        kept_labels.append(lab)
    return kept, kept_labels


def _projective_order(i):
    return (i == INF, i)


def edge_chart(A: Arrangement, F: Edge, chart_label=None) -> Arrangement | None:
    """Affine chart of the projective section Ā_F.

    Affine flats use the hyperplane at infinity as chart; flats at infinity
    use the first hyperplane not containing them (or ``chart_label``).
    Returns None if no hyperplane cuts F (only possible for the whole space).
    """
    # infinity first so that it survives deduplication against parallel hyperplanes
    idx = sorted((i for i in A.all_indices() if i not in F.indices), key=lambda i: (i != INF, i))
    forms, labels = _dedupe_linear(*_restrict_linear(A, idx, F.basis))
    if not forms:
        return None
    if chart_label is None:
        chart_label = INF if not F.at_infinity else labels[0]
    return central_chart(forms, labels, labels.index(chart_label))


def edge_chart_relative(A: Arrangement, F: Edge, form: tuple) -> Arrangement:
    """Chart of Ā_F in which the restriction of ``form`` (a homogeneous
    linear form not vanishing on F) is sent to infinity."""
    idx = sorted((i for i in A.all_indices() if i not in F.indices), key=_projective_order)
    forms, labels = _dedupe_linear(*_restrict_linear(A, idx, F.basis))
    chart = tuple(Q.dot(form, b) for b in F.basis)
    if all(x == 0 for x in chart):
        raise ValueError("chart form vanishes on the flat")
    return central_chart([chart] + forms, [None] + labels, 0)


def normal_chart(A: Arrangement, F: Edge, chart_label=None) -> Arrangement | None:
    """Affine chart of the projective normal arrangement PA^F.

    The normal space is the orthogonal complement of F's homogeneous
    subspace; the hyperplanes through F restrict to a central arrangement
    there.  Returns None for hyperplanes (empty projective arrangement).
    """
    _check_edge(A, F)
    n1 = A.dimension + 1
    normal = Q.orthogonal_complement(F.basis, n1)
    if len(normal) == 1:
        return None
    idx = sorted(F.indices, key=_projective_order)
    forms, labels = _dedupe_linear(*_restrict_linear(A, idx, normal))
    if chart_label is None:
        chart_label = labels[0]
    return central_chart(forms, labels, labels.index(chart_label))


def projective_normal_arrangement(A: Arrangement, F: Edge, chart_label=None) -> Arrangement:
    """PA^F in an affine chart; the empty 0-dimensional arrangement for hyperplanes."""
    res = normal_chart(A, F, chart_label)
    if res is None:
        return Arrangement(0, ())
    return res


# --------------------------------------------------------------------------
# trace at infinity
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceChart:
    """The chart {v : f0°(v) = 1} of directions, v = base + K u."""

    base: tuple
    frame: tuple
    arrangement: Arrangement

    def to_direction(self, u) -> tuple:
        v = self.base
        for c, b in zip(u, self.frame):
            v = Q.add(v, Q.scale(c, b))
        return v

    def from_direction(self, v) -> tuple:
        """Coordinates u of a direction v with f0°(v) = 1."""
        rows = [[b[i] for b in self.frame] for i in range(len(v))]
        res = Q.solve_affine(rows, Q.sub(v, self.base), len(self.frame))
        if res is None:
            raise ValueError("direction is not in the chart")
        return res[0]


def trace_chart(A: Arrangement, f0: LinearForm) -> TraceChart:
    if f0.is_constant():
        raise ConstantF0("f0 must be non-constant")
    g = f0.homogeneous
    n = A.dimension
    j = next(i for i, x in enumerate(g) if x != 0)
    base = tuple(Fraction(1) / g[j] if i == j else Fraction(0) for i in range(n))
    K = tuple(Q.nullspace([g], n))
    forms, origins = [], []
    for i, f in enumerate(A.forms):
        forms.append(LinearForm(tuple(Q.dot(f.homogeneous, b) for b in K),
                                Q.dot(f.homogeneous, base)))
        origins.append(A.origins[i])
    return TraceChart(base, K, merge_forms(forms, origins, n - 1))


def trace_at_infinity(A: Arrangement, f0: LinearForm) -> Arrangement:
    """Arrangement of the h_i = f_i°/f0° on the chart {f0° = 1}."""
    return trace_chart(A, f0).arrangement
