"""Exact polyhedra given by inequalities g(x) >= 0, with face flags."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from . import rational as Q
from .geometry import LinearForm


@dataclass(frozen=True)
class Polyhedron:
    constraints: tuple  # LinearForms, each >= 0 on the region
    dimension: int

    @cached_property
    def vertices(self) -> tuple:
        n = self.dimension
        if n == 0:
            return ((),)
        found = set()
        rows = [g.homogeneous for g in self.constraints]
        for sub in itertools.combinations(range(len(rows)), n):
            if Q.rank([rows[k] for k in sub], n) < n:
                continue
            res = Q.solve_affine([rows[k] for k in sub],
                                 [-self.constraints[k].constant for k in sub], n)
            v = res[0]
            if all(g(v) >= 0 for g in self.constraints):
                found.add(v)
        return tuple(sorted(found))

    @cached_property
    def rays(self) -> tuple:
        n = self.dimension
        if n == 0:
            return ()
        rows = [g.homogeneous for g in self.constraints]
        out = {}
        for sub in itertools.combinations(range(len(rows)), n - 1):
            ker = Q.nullspace([rows[k] for k in sub], n)
            if len(ker) != 1:
                continue
            for s in (1, -1):
                d = Q.scale(s, ker[0])
                if all(Q.dot(r, d) >= 0 for r in rows):
                    m = max(abs(x) for x in d)
                    out[tuple(x / m for x in d)] = None
        return tuple(out)

    @property
    def bounded(self) -> bool:
        return not self.rays

    def tight(self, x) -> frozenset:
        return frozenset(k for k, g in enumerate(self.constraints) if g(x) == 0)

    @cached_property
    def flags(self) -> tuple:
        """Complete flags of faces G_0 < G_1 < ... < G_n, each a frozenset of
        vertex indices (bounded polyhedra only)."""
        verts = self.vertices
        tight = [self.tight(v) for v in verts]

        def closure(S):
            common = frozenset.intersection(*[tight[s] for s in S])
            return frozenset(k for k, t in enumerate(tight) if t >= common)

        def dim(S):
            return Q.affine_rank([verts[k] for k in S])

        chains = [[frozenset([k])] for k in range(len(verts))]
        for d in range(1, self.dimension + 1):
            nxt = []
            for chain in chains:
                G = chain[-1]
                covers = set()
                for w in range(len(verts)):
                    if w in G:
                        continue
                    C = closure(G | {w})
                    if dim(C) == d:
                        covers.add(C)
                for C in sorted(covers, key=sorted):
                    nxt.append(chain + [C])
            chains = nxt
        return tuple(tuple(c) for c in chains)

    def barycenter(self, face) -> tuple:
        return Q.mean([self.vertices[k] for k in sorted(face)])


def section_polytope(P: Polyhedron, form: LinearForm, level):
    """The slice {form = level} of P as a Polyhedron in coordinates u,
    with x = base + frame @ u.  Returns (slice, base, frame)."""
    g = form.homogeneous
    n = P.dimension
    j = next(i for i, x in enumerate(g) if x != 0)
    base = tuple((level - form.constant) / g[j] if i == j else 0 * g[j] for i in range(n))
    frame = tuple(Q.nullspace([g], n))
    cons = []
    for c in P.constraints:
        hom = tuple(Q.dot(c.homogeneous, b) for b in frame)
        const = c(base)
        if all(a == 0 for a in hom):
            if const < 0:
                raise ValueError("slice is empty")
            continue
        cons.append(LinearForm(hom, const))
    return Polyhedron(tuple(cons), n - 1), base, frame
