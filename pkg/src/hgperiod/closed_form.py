"""Closed-form right-hand sides: edge weights, beta functions, critical values."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from scipy.special import loggamma

from . import rational as Q
from .chambers import (Chamber, discrete_invariants, edge_in_hyperplane,
                       relative_invariants,
                       trace_of_chamber)
from .errors import GammaPole, Unbounded, UnboundedBelow
from .forms import BranchAssignment
from .geometry import INF, Arrangement, Edge, LinearForm, projectivize

POLE_TOL = 1e-12


def edge_weight(A: Arrangement, F: Edge) -> complex:
    return sum((A.infinity_weight if i == INF else A.weights[i]) for i in F.indices)


def is_gamma_pole(z: complex) -> bool:
    r = round(z.real)
    return r <= 0 and abs(z - r) < POLE_TOL


@dataclass
class GammaFactor:
    edge: str
    argument: complex
    exponent: int  # +vol for numerator factors, -vol for denominator factors


@dataclass
class BetaValue:
    value: complex
    factors: list = field(default_factory=list)

    def log_value(self) -> complex:
        return sum(f.exponent * complex(loggamma(f.argument)) for f in self.factors)


def _beta(A: Arrangement, relative_to: LinearForm | None) -> BetaValue:
    P = projectivize(A)
    factors = []

    def volume(F):
        if relative_to is None:
            return discrete_invariants(A, F).vol
        return relative_invariants(A, F, relative_to).vol

    for F in P.plus:
        vol = volume(F)
        if vol:
            factors.append(GammaFactor(F.label(), edge_weight(A, F) + 1, vol))
    h0 = relative_to.homogenized() if relative_to is not None else None
    for F in P.minus:
        if h0 is not None and not edge_in_hyperplane(F, h0):
            continue
        vol = volume(F)
        if vol:
            factors.append(GammaFactor(F.label(), -edge_weight(A, F) + 1, -vol))
    numerator_poles = [f for f in factors if f.exponent > 0 and is_gamma_pole(f.argument)]
    if numerator_poles:
        f = numerator_poles[0]
        raise GammaPole(f"Gamma({f.argument}) is infinite at edge {f.edge}")
    if any(f.exponent < 0 and is_gamma_pole(f.argument) for f in factors):
        return BetaValue(0j, factors)
    out = BetaValue(0j, factors)
    out.value = cmath.exp(out.log_value())
    return out


def beta_function(A: Arrangement) -> BetaValue:
    return _beta(A, None)


def beta_function_relative(A: Arrangement, f0: LinearForm) -> BetaValue:
    return _beta(A, f0)


# --------------------------------------------------------------------------
# supports and critical values
# --------------------------------------------------------------------------

@dataclass
class Support:
    vertices: tuple
    value: Fraction  # max |f_i| (external support) or min f0 (support face)


def _argmax(points, key):
    vals = [key(p) for p in points]
    m = max(vals)
    return tuple(p for p, v in zip(points, vals) if v == m), m


def external_support(A: Arrangement, chamber: Chamber, i: int) -> Support:
    f = A.forms[i]
    if any(Q.dot(f.homogeneous, r) != 0 for r in chamber.rays) or not chamber.pointed:
        raise Unbounded(f"|f_{i + 1}| is unbounded on the chamber")
    verts, m = _argmax(chamber.vertices, lambda v: abs(f(v)))
    return Support(verts, m)


def support_face_f0(chamber: Chamber, f0: LinearForm) -> Support:
    if not (chamber.bounded or chamber.is_growing(f0)):
        raise UnboundedBelow("f0 is not bounded below on the chamber")
    verts, m = _argmax(chamber.vertices, lambda v: -f0(v))
    return Support(verts, -m)


@dataclass
class CriticalValueRecord:
    hyperplane: int
    support: tuple        # vertices (bounded path) or trace directions (trace path)
    modulus: Fraction
    half_turns: int
    value: complex
    path: str             # "bounded" or "trace"


def critical_value(A: Arrangement, branch: BranchAssignment, chamber: Chamber, i: int,
                   f0: LinearForm | None = None) -> CriticalValueRecord:
    f = A.forms[i]
    unbounded = any(Q.dot(f.homogeneous, r) != 0 for r in chamber.rays)
    if not unbounded:
        sup = external_support(A, chamber, i)
        path = "bounded"
    else:
        if f0 is None:
            raise Unbounded(f"|f_{i + 1}| is unbounded and no f0 is given")
        face = trace_of_chamber(A, chamber, f0)
        verts, m = _argmax(face.directions, lambda v: abs(Q.dot(f.homogeneous, v)))
        sup = Support(verts, m)
        path = "trace"
    turns = branch.half_turns(chamber, i)
    value = branch.power(A, chamber, i, float(sup.value))
    return CriticalValueRecord(i, sup.vertices, sup.value, turns, value, path)


@dataclass
class ChamberCritical:
    signs: tuple
    records: list
    f0_min: Fraction | None = None
    exp_factor: complex = 1 + 0j

    @property
    def value(self) -> complex:
        out = self.exp_factor
        for r in self.records:
            out *= r.value
        return out


def chamber_critical(A: Arrangement, branch: BranchAssignment, chamber: Chamber,
                     f0: LinearForm | None = None, scale: complex = 1) -> ChamberCritical:
    recs = [critical_value(A, branch, chamber, i, f0) for i in range(len(A))]
    out = ChamberCritical(chamber.signs, recs)
    if f0 is not None:
        sup = support_face_f0(chamber, f0)
        out.f0_min = sup.value
        out.exp_factor = cmath.exp(-scale * float(sup.value))
    return out


def critical_log(A: Arrangement, records: list, scale: complex = 1) -> complex:
    """log of the product of critical values over the given chamber records."""
    total = 0j
    for ch in records:
        if ch.f0_min is not None:
            total += -scale * float(ch.f0_min)
        for r in ch.records:
            total += A.weights[r.hyperplane] * (math.log(float(r.modulus)) + 1j * math.pi * r.half_turns)
    return total


def critical_product(A: Arrangement, branch: BranchAssignment, chambers,
                     f0: LinearForm | None = None, scale: complex = 1):
    """(value, per-chamber records) of c(A; alpha) or c(A; alpha; f0)."""
    records = [chamber_critical(A, branch, c, f0, scale) for c in chambers]
    return cmath.exp(critical_log(A, records, scale)), records
