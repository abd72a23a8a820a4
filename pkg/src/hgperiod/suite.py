"""Seeded random arrangements and the checks run on them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import rational as Q
from .chambers import (admissible_chambers, bounded_chambers,
                       verify_growing_count)
from .errors import HGError
from .forms import BranchAssignment
from .geometry import Arrangement, LinearForm, build_arrangement
from .io import to_document
from .nbc import bnbc_bases, bnbc_with_f0, chamber_bijection
from .quadrature import PeriodComputation, QuadratureSpec, verify


@dataclass
class Instance:
    A: Arrangement
    f0: LinearForm | None
    label: str

    def fixture(self) -> dict:
        return to_document(self.A, self.f0, self.label)


def _weights(rng, p, complex_weights):
    re = rng.uniform(0.3, 1.5, size=p)
    im = rng.uniform(-0.5, 0.5, size=p) if complex_weights else np.zeros(p)
    return [complex(round(a, 6), round(b, 6)) for a, b in zip(re, im)]


def random_points(rng, p, complex_weights=False) -> Arrangement:
    pts = set()
    while len(pts) < p:
        pts.add(Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 4))))
    forms = [LinearForm((Fraction(1),), -z) for z in sorted(pts)]
    return build_arrangement(1, forms, _weights(rng, p, complex_weights))


def _is_generic(forms) -> bool:
    n = len(forms[0].homogeneous)
    for k in range(1, n + 2):
        for S in itertools.combinations(forms, k):
            rows = [f.homogenized() for f in S]
            if k <= n and Q.rank([f.homogeneous for f in S], n) < k:
                return False
            if k == n + 1 and Q.rank(rows, n + 1) < k:
                return False
    return True


def random_lines(rng, p, complex_weights=False, generic=False) -> Arrangement:
    while True:
        forms = []
        while len(forms) < p:
            a, b = (int(x) for x in rng.integers(-3, 4, size=2))
            c = int(rng.integers(-4, 5))
            if a == 0 and b == 0:
                continue
            f = LinearForm((Fraction(a), Fraction(b)), Fraction(c))
            if any(Q.proportional(f.homogenized(), g.homogenized()) for g in forms):
                continue
            forms.append(f)
        if generic and not _is_generic(forms):
            continue
        try:
            A = build_arrangement(2, forms, _weights(rng, p, complex_weights))
        except HGError:
            continue
        return A


def random_f0(rng, A: Arrangement) -> LinearForm:
    """A non-constant f0 whose direction is not parallel to any hyperplane."""
    n = A.dimension
    while True:
        g = tuple(Fraction(int(x), int(d)) for x, d in zip(rng.integers(-5, 6, size=n), rng.integers(1, 4, size=n)))
        if all(x == 0 for x in g):
            continue
        if n > 1 and any(Q.proportional(g, f.homogeneous) for f in A.forms):
            continue
        return LinearForm(g, Fraction(int(rng.integers(-3, 4))))


def generate(seed: int, n1: int = 20, n2: int = 10, with_f0: bool = False,
             complex_weights: bool = False, generic: bool = False) -> list:
    """n1 instances on the line (p = 2..5) and n2 in the plane (p = 3..4).

    Plane instances without f0 must have a bounded chamber.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n1):
        p = int(rng.integers(2, 6))
        A = random_points(rng, p, complex_weights)
        f0 = random_f0(rng, A) if with_f0 else None
        out.append(Instance(A, f0, f"seed{seed}-line-{k}"))
    k = 0
    while k < n2:
        p = int(rng.integers(3, 5))
        A = random_lines(rng, p, complex_weights, generic)
        if not with_f0 and not bounded_chambers(A):
            continue
        f0 = random_f0(rng, A) if with_f0 else None
        out.append(Instance(A, f0, f"seed{seed}-plane-{k}"))
        k += 1
    return out


# --------------------------------------------------------------------------
# checks
# --------------------------------------------------------------------------

@dataclass
class InstanceResult:
    label: str
    dimension: int
    size: int
    deviation: float
    tolerance: float
    passed: bool
    covariance_deviation: float | None = None
    error: str | None = None
    fixture: dict = field(default_factory=dict)
    seconds: float = 0.0


def check_instance(inst: Instance, tol: float, spec: QuadratureSpec | None = None,
                   covariance_rng=None) -> InstanceResult:
    """verify (and for f0 instances, a branch-covariance re-run)."""
    A, f0 = inst.A, inst.f0
    spec = spec or QuadratureSpec(tol=min(1e-10, tol * 1e-3))
    try:
        comp = PeriodComputation(A, f0, spec)
        rep = verify(A, tol, f0, spec, computation=comp)
        cov = None
        ok = rep.passed
        if covariance_rng is not None and len(comp.labelling):
            j = int(covariance_rng.integers(len(comp.labelling)))
            i = int(covariance_rng.integers(len(A)))
            ch = comp.labelling.chambers[j]
            shifted = BranchAssignment({(ch.signs, i): 1})
            rep2 = verify(A, tol, f0, spec, branch=shifted, computation=comp)
            cov = rep2.deviation
            ok = ok and rep2.passed and abs(rep2.deviation - rep.deviation) <= tol
        return InstanceResult(inst.label, A.dimension, rep.size, rep.deviation, tol, ok, cov,
                              fixture=inst.fixture(), seconds=rep.seconds)
    except HGError as exc:
        return InstanceResult(inst.label, A.dimension, 0, math.inf, tol, False,
                              error=f"{type(exc).__name__}: {exc}", fixture=inst.fixture())


def combinatorial_check(A: Arrangement, f0: LinearForm | None = None) -> dict:
    """Exact identities; every value in the result must be True."""
    n, p = A.dimension, len(A)
    bounded = bounded_chambers(A)
    out = {
        "bnbc_count_equals_bounded": len(bnbc_bases(A)) == len(bounded),
    }
    if _is_generic(list(A.forms)):
        out["beta_general_position"] = len(bounded) == math.comb(p - 1, n)
    lab = chamber_bijection(A)
    out["bijection_total_injective"] = (
        len({c.signs for c in lab.chambers}) == len(lab) == len(bounded))
    if f0 is not None:
        adm = admissible_chambers(A, f0)
        out["bnbc_f0_count_equals_gamma"] = len(bnbc_with_f0(A, f0)) == len(adm)
        lab0 = chamber_bijection(A, f0)
        out["bijection_f0_total_injective"] = (
            len({c.signs for c in lab0.chambers}) == len(lab0) == len(adm))
        out["bnbc_subset"] = set(bnbc_bases(A)) <= set(lab0.bases)
        growing, total = verify_growing_count(A, f0)
        out["growing_count"] = growing == total
    return out


def restriction_agrees(A: Arrangement, f0: LinearForm) -> bool:
    """Whether the f0 labelling sends every plain betanbc basis to its plain chamber.

    Not true in general: for points 0 < 1 < 3 and f0 = t the vertex 0 is
    adjacent only to [0, 1] among bounded and growing chambers, which pushes
    the basis at 1 onto [1, 3].
    """
    lab, lab0 = chamber_bijection(A), chamber_bijection(A, f0)
    return all(lab0.chambers[lab0.bases.index(B)].signs == lab.chambers[k].signs
               for k, B in enumerate(lab.bases))
