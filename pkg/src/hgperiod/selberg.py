"""Selberg type integrals: master function, symmetric forms, ordered domains,
and the determinant formulas with and without the exponential factor.

Variables t_1..t_n are stored 0-based; points z_1 < ... < z_p likewise.
Every power x^w of a real x uses arg x = 0 for x > 0 and arg x = pi for x < 0.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from scipy.special import loggamma

from . import rational as Q
from .chambers import chamber_of_point
from .closed_form import critical_value, support_face_f0
from .errors import GammaPole, OnSingularLocus
from .forms import BranchAssignment
from .geometry import Arrangement, LinearForm
from .polytope import Polyhedron
from .quadrature import QuadratureSpec, RegionIntegrator, relative_deviation


def comb(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass(frozen=True)
class Composition:
    parts: tuple

    @property
    def n(self) -> int:
        return sum(self.parts)

    def prefix(self, s: int) -> int:
        """l^s = l_1 + ... + l_s."""
        return sum(self.parts[:s])

    def block(self, s: int) -> range:
        """0-based variable indices of block s (1-based s)."""
        return range(self.prefix(s - 1), self.prefix(s))

    def padded(self, p: int) -> "Composition":
        return Composition(tuple(self.parts) + (0,) * (p - len(self.parts)))


def compositions(n: int, p: int) -> list:
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    out = [Composition(c) for c in itertools.product(range(n + 1), repeat=p) if sum(c) == n]
    return sorted(out, key=lambda c: c.parts)


@dataclass
class SelbergParams:
    z: tuple
    alpha: tuple
    gamma: complex
    n: int
    a: complex | None = None

    def __post_init__(self):
        self.z = tuple(Q.as_fraction(x) for x in self.z)
        self.alpha = tuple(complex(x) for x in self.alpha)
        self.gamma = complex(self.gamma)
        if len(self.z) != len(self.alpha):
            raise ValueError("need one weight per point")
        if any(b <= a for a, b in zip(self.z, self.z[1:])):
            raise ValueError("points must be strictly increasing")
        if any(w.real <= 0 for w in self.alpha) or self.gamma.real <= 0:
            raise ValueError("weights and gamma need positive real part")
        if self.a is not None:
            self.a = complex(self.a)
            if self.a.real <= 0:
                raise ValueError("a needs positive real part")

    @property
    def p(self) -> int:
        return len(self.z)


def _power(x: float, w: complex) -> complex:
    if x == 0:
        raise OnSingularLocus("point lies on the singular locus")
    arg = 0.0 if x > 0 else math.pi
    return cmath.exp(w * (math.log(abs(x)) + 1j * arg))


def master_function(t, params: SelbergParams, ordering: str = "forward") -> complex:
    """Phi(t, z); ``ordering`` picks (t_j - t_i) ("forward") or (t_i - t_j)
    ("reverse") for i < j."""
    out = 1 + 0j
    for ti in t:
        for z, w in zip(params.z, params.alpha):
            out *= _power(ti - float(z), w)
    for i, j in itertools.combinations(range(len(t)), 2):
        d = t[j] - t[i] if ordering == "forward" else t[i] - t[j]
        out *= _power(d, 2 * params.gamma)
    return out


def pole_terms(m: Composition) -> dict:
    """omega_m as {pole set: coefficient}; a pole set is a sorted tuple of (j, s)
    pairs standing for 1/(t_j - z_s), both 0-based."""
    n = m.n
    norm = 1
    for k in m.parts:
        norm *= math.factorial(k)
    out = {}
    for sigma in itertools.permutations(range(n)):
        poles = []
        for s in range(1, len(m.parts) + 1):
            poles.extend((sigma[j], s - 1) for j in m.block(s))
        key = tuple(sorted(poles))
        out[key] = out.get(key, Fraction(0)) + Fraction(1, norm)
    return out


def tilde_factor(m: Composition, params: SelbergParams) -> complex:
    """prod_s m_s! alpha_s (alpha_s + gamma) ... (alpha_s + (m_s - 1) gamma)."""
    out = 1 + 0j
    for s, k in enumerate(m.parts):
        out *= math.factorial(k)
        for r in range(k):
            out *= params.alpha[s] + r * params.gamma
    return out


def omega_m(t, m: Composition, params: SelbergParams) -> complex:
    total = 0j
    for poles, c in pole_terms(m).items():
        v = float(c)
        for j, s in poles:
            d = t[j] - float(params.z[s])
            if d == 0:
                raise OnSingularLocus(f"t_{j + 1} = z_{s + 1}")
            v /= d
        total += v
    return total


def omega_tilde_m(t, m: Composition, params: SelbergParams) -> complex:
    return tilde_factor(m, params) * omega_m(t, m, params)


# --------------------------------------------------------------------------
# domains
# --------------------------------------------------------------------------

def _var_form(n, coeffs: dict, const) -> LinearForm:
    return LinearForm(tuple(Fraction(coeffs.get(i, 0)) for i in range(n)), Fraction(const))


@dataclass
class DomainPiece:
    region: Polyhedron
    point: tuple  # rational interior point


@dataclass
class Domain:
    kind: str
    l: Composition
    pieces: list

    @property
    def bounded(self) -> bool:
        return all(p.region.bounded for p in self.pieces)


def _interval(l: Composition, s: int, params: SelbergParams, kind: str):
    """(lower, upper) end of block s; None stands for -infinity."""
    z = params.z
    if kind == "U":
        return z[s - 1], z[s]
    return (None if s == 1 else z[s - 2]), z[s - 1]


def _chain_piece(n, chains) -> DomainPiece:
    """Region lo <= t_{c_1} <= ... <= t_{c_k} <= hi for each (chain, lo, hi)."""
    cons = []
    point = [Fraction(0)] * n
    for chain, lo, hi in chains:
        if not chain:
            continue
        k = len(chain)
        if lo is not None:
            cons.append(_var_form(n, {chain[0]: 1}, -lo))
        for a, b in zip(chain, chain[1:]):
            cons.append(_var_form(n, {b: 1, a: -1}, 0))
        cons.append(_var_form(n, {chain[-1]: -1}, hi))
        for r, j in enumerate(chain):
            if lo is None:
                point[j] = hi - (k - r)
            else:
                point[j] = lo + (hi - lo) * Fraction(r + 1, k + 1)
    return DomainPiece(Polyhedron(tuple(cons), n), tuple(point))


def domains(l: Composition, params: SelbergParams, kind: str) -> Domain:
    """U (ordered blocks in [z_s, z_{s+1}]), Ut (ordered blocks in [z_{s-1}, z_s],
    z_0 = -infinity) or V (unordered boxes with the same intervals as Ut)."""
    n = l.n
    if kind not in ("U", "Ut", "V"):
        raise ValueError(f"unknown domain kind {kind!r}")
    nblocks = len(l.parts)
    ends = [_interval(l, s, params, kind) for s in range(1, nblocks + 1)]
    if kind != "V":
        chains = [(list(l.block(s)), *ends[s - 1]) for s in range(1, nblocks + 1)]
        return Domain(kind, l, [_chain_piece(n, chains)])
    pieces = []
    perms = [itertools.permutations(l.block(s)) for s in range(1, nblocks + 1)]
    for choice in itertools.product(*perms):
        chains = [(list(c), *ends[s]) for s, c in enumerate(choice)]
        pieces.append(_chain_piece(n, chains))
    return Domain(kind, l, pieces)


# --------------------------------------------------------------------------
# integrals
# --------------------------------------------------------------------------

def _factor_list(params: SelbergParams, ordering: str):
    """[(key, form, weight)] for every factor of Phi."""
    n = params.n
    out = []
    for j in range(n):
        for s, (z, w) in enumerate(zip(params.z, params.alpha)):
            out.append((("g", j, s), _var_form(n, {j: 1}, -z), w))
    for i, j in itertools.combinations(range(n), 2):
        coeffs = {j: 1, i: -1} if ordering == "forward" else {i: 1, j: -1}
        out.append((("h", j, i), _var_form(n, coeffs, 0), 2 * params.gamma))
    return out


class SelbergIntegrals:
    """Integrals of [exp(a sum t)] Phi omega_m over the domains, with raw
    integrals cached per (domain piece, pole set)."""

    def __init__(self, params: SelbergParams, spec: QuadratureSpec | None = None,
                 exponential: bool = False, ordering: str = "forward"):
        if exponential and params.a is None:
            raise ValueError("the exponential variant needs a")
        self.params = params
        self.spec = spec or QuadratureSpec(tol=1e-9)
        self.exponential = exponential
        self.ordering = ordering
        self.factors = _factor_list(params, ordering)
        self.index = {key: k for k, (key, _, _) in enumerate(self.factors)}
        n = params.n
        self.f0 = _var_form(n, {j: -1 for j in range(n)}, 0) if exponential else None
        self._pieces = {}
        self.converged = True
        self.max_error = 0.0

    def _piece(self, piece: DomainPiece):
        key = (piece.region.constraints, piece.point)
        if key not in self._pieces:
            signs = []
            for _, form, _ in self.factors:
                v = form(piece.point)
                if v == 0:
                    raise OnSingularLocus("interior point on a factor")
                signs.append(1 if v > 0 else -1)
            forms = [f.scaled(s) for s, (_, f, _) in zip(signs, self.factors)]
            integ = RegionIntegrator(piece.region, forms, self.f0)
            phase = 1 + 0j
            for s, (_, _, w) in zip(signs, self.factors):
                if s < 0:
                    phase *= cmath.exp(1j * math.pi * w)
            self._pieces[key] = (integ, signs, phase, {})
        return self._pieces[key]

    def raw(self, piece: DomainPiece, poles: tuple) -> complex:
        integ, signs, phase, cache = self._piece(piece)
        if poles not in cache:
            exps = [w - (1 if k in poles else 0) for k, (_, _, w) in enumerate(self.factors)]
            scale = self.params.a if self.exponential else 1.0
            val, err, ok = integ.adaptive(exps, self.spec, scale)
            self.converged = self.converged and ok
            self.max_error = max(self.max_error, err)
            sign = 1
            for k in poles:
                sign *= signs[k]
            cache[poles] = phase * sign * val
        return cache[poles]

    def integral(self, domain: Domain, m: Composition) -> complex:
        total = 0j
        for poles, c in pole_terms(m).items():
            idx = tuple(sorted(self.index[("g", j, s)] for j, s in poles))
            for piece in domain.pieces:
                total += float(c) * self.raw(piece, idx)
        return total


def _det(M) -> complex:
    import numpy as np
    return complex(np.linalg.det(np.array(M, dtype=complex)))


@dataclass
class SelbergReport:
    lhs: complex
    rhs: complex
    deviation: float
    size: int
    converged: bool
    readings: dict = field(default_factory=dict)
    matrix: list = field(default_factory=list)


def _lg(z: complex) -> complex:
    if abs(z - round(z.real)) < 1e-12 and round(z.real) <= 0:
        raise GammaPole(f"Gamma({z}) is infinite")
    return complex(loggamma(z))


def _z_product_log(params: SelbergParams, exponent) -> complex:
    out = 0j
    for a, b in itertools.combinations(range(params.p), 2):
        out += exponent(a, b) * math.log(float(params.z[b] - params.z[a]))
    return out


def rhs_no_exp(params: SelbergParams, tilde: bool = False) -> complex:
    n, p, g, al = params.n, params.p, params.gamma, params.alpha
    if p < 2:
        raise ValueError("need at least two points")
    total = 0j
    for s in range(n):
        e = comb(p + n - s - 3, p - 2)
        if not e:
            continue
        if tilde:
            blk = (p - 1) * (_lg((s + 1) * g + 1) - _lg(g + 1))
            blk += sum(_lg(al[j] + s * g + 1) for j in range(p))
        else:
            blk = (p - 1) * (_lg((s + 1) * g) - _lg(g))
            blk += _lg(1 + al[-1] + s * g) + sum(_lg(al[j] + s * g) for j in range(p - 1))
        blk -= _lg(1 + sum(al) + (2 * n - 2 - s) * g)
        total += e * blk
    c1 = comb(p + n - 2, p - 1)
    total += 1j * math.pi * c1 * sum(s * al[s] for s in range(p))
    total += _z_product_log(params, lambda a, b: (al[a] + al[b]) * c1 + 2 * g * comb(p + n - 2, p))
    return cmath.exp(total)


def determinant_no_exp(params: SelbergParams, spec: QuadratureSpec | None = None,
                       tilde: bool = False) -> SelbergReport:
    """det over l, m in Z_n^{p-1} of the integral of Phi omega_m over U_l."""
    n, p = params.n, params.p
    comps = compositions(n, p - 1)
    ints = SelbergIntegrals(params, spec)
    M = []
    for l in comps:
        D = domains(l, params, "U")
        row = []
        for m in comps:
            mm = m.padded(p)
            v = ints.integral(D, mm)
            if tilde:
                v *= tilde_factor(mm, params)
            row.append(v)
        M.append(row)
    lhs = _det(M)
    rhs = rhs_no_exp(params, tilde)
    return SelbergReport(lhs, rhs, relative_deviation(lhs, rhs), len(comps), ints.converged,
                         matrix=M)


EXP_READINGS = ("a", "a_pi")
A_POWER_READINGS = ("corrected", "stated")


def _exp_tail_log(params: SelbergParams, exp_reading: str, a_power: str) -> complex:
    """Log of the phase, exponential and a-power part of the exponential formula."""
    n, p, g, al, a = params.n, params.p, params.gamma, params.alpha, params.a
    C = comb(p + n - 1, p)
    C2 = comb(p + n - 1, p + 1)
    weighted = sum((s + 1) * al[s] for s in range(p))
    out = 1j * math.pi * C * weighted
    zsum = float(sum(params.z))
    out += (a * math.pi if exp_reading == "a_pi" else a) * C * zsum
    if a_power == "stated":
        power = -C * weighted - 2 * p * C2 * g
    else:
        power = -C * sum(al) - 2 * p * C2 * g
    out += power * cmath.log(a)
    return out


def rhs_exp(params: SelbergParams, exp_reading: str = "a", a_power: str = "corrected") -> complex:
    n, p, g, al = params.n, params.p, params.gamma, params.alpha
    if exp_reading not in EXP_READINGS or a_power not in A_POWER_READINGS:
        raise ValueError("unknown reading")
    total = 0j
    for s in range(n):
        e = comb(p + n - s - 2, p - 1)
        if not e:
            continue
        blk = p * (_lg((s + 1) * g) - _lg(g)) + sum(_lg(al[j] + s * g) for j in range(p))
        total += e * blk
    C = comb(p + n - 1, p)
    total += _z_product_log(params, lambda a, b: (al[a] + al[b]) * C + 2 * g * comb(p + n - 1, p + 1))
    total += _exp_tail_log(params, exp_reading, a_power)
    sign = (-1) ** (n * comb(p + n - 1, p - 1))
    return sign * cmath.exp(total)


def determinant_exp(params: SelbergParams, spec: QuadratureSpec | None = None,
                    exp_reading: str = "a", a_power: str = "corrected") -> SelbergReport:
    """det over l, m in Z_n^p of the integral of exp(a sum t) Phi omega_m over Ut_l.

    ``readings`` holds the deviation of every combination of readings of the
    right-hand side, so the one matching the quadrature is visible.
    """
    n, p = params.n, params.p
    comps = compositions(n, p)
    ints = SelbergIntegrals(params, spec, exponential=True)
    M = [[ints.integral(domains(l, params, "Ut"), m) for m in comps] for l in comps]
    lhs = _det(M)
    rhs = rhs_exp(params, exp_reading, a_power)
    readings = {f"{e}/{ap}": relative_deviation(lhs, rhs_exp(params, e, ap))
                for e in EXP_READINGS for ap in A_POWER_READINGS}
    return SelbergReport(lhs, rhs, relative_deviation(lhs, rhs), len(comps), ints.converged,
                         readings, M)


# --------------------------------------------------------------------------
# critical value products through the general arrangement
# --------------------------------------------------------------------------

def selberg_arrangement(params: SelbergParams) -> tuple:
    """(arrangement of t_j = z_s and t_i = t_j, factor keys in form order)."""
    facs = _factor_list(params, "forward")
    A = Arrangement(params.n, tuple(f for _, f, _ in facs), tuple(w for _, _, w in facs))
    return A, [k for k, _, _ in facs]


def closed_side(params: SelbergParams, variant: str, exp_reading: str = "a",
                a_power: str = "corrected", z_product: bool = True) -> complex:
    """Closed product matched against critical values.

    For the exponential variant the critical values of the bounded factors
    also produce the z-difference product; ``z_product=False`` leaves it out.
    """
    n, p, g, al = params.n, params.p, params.gamma, params.alpha
    if variant == "bounded":
        c1 = comb(p + n - 2, p - 1)
        out = 1j * math.pi * c1 * sum(s * al[s] for s in range(p))
        out += _z_product_log(params, lambda a, b: (al[a] + al[b]) * c1 + 2 * g * comb(p + n - 2, p))
        return cmath.exp(out)
    if variant == "exponential":
        out = _exp_tail_log(params, exp_reading, a_power)
        if z_product:
            C = comb(p + n - 1, p)
            out += _z_product_log(params, lambda a, b: (al[a] + al[b]) * C + 2 * g * comb(p + n - 1, p + 1))
        return cmath.exp(out)
    raise ValueError(f"unknown variant {variant!r}")


def critical_side(params: SelbergParams, variant: str) -> complex:
    """Product over the domains of the critical values of every factor of Phi
    (and, for the exponential variant, of exp(a sum t)), computed by the
    general critical value routines."""
    A, _ = selberg_arrangement(params)
    branch = BranchAssignment()
    n, p = params.n, params.p
    log_total = 0j
    if variant == "bounded":
        comps, kind, f0 = compositions(n, p - 1), "U", None
    elif variant == "exponential":
        comps, kind = compositions(n, p), "Ut"
        f0 = _var_form(n, {0: -1}, 0)   # -a t_1 up to the positive factor a
    else:
        raise ValueError(f"unknown variant {variant!r}")
    a = params.a
    for l in comps:
        D = domains(l, params, kind)
        chamber = chamber_of_point(A, D.pieces[0].point)
        for i in range(len(A)):
            rec = critical_value(A, branch, chamber, i, f0)
            w = A.weights[i]
            log_total += w * (math.log(float(rec.modulus)) + 1j * math.pi * rec.half_turns)
            if rec.path == "trace":
                # the trace of f_i relative to -a t_1 is 1/a times that relative to -t_1
                log_total -= w * cmath.log(a)
        if variant == "exponential":
            sup = support_face_f0(chamber, _var_form(n, {j: -1 for j in range(n)}, 0))
            log_total += -a * float(sup.value)
    return cmath.exp(log_total)


def critical_products_selberg(params: SelbergParams, variant: str, exp_reading: str = "a",
                              a_power: str = "corrected", z_product: bool = True) -> tuple:
    lhs = closed_side(params, variant, exp_reading, a_power, z_product)
    rhs = critical_side(params, variant)
    return lhs, rhs, relative_deviation(lhs, rhs)


# --------------------------------------------------------------------------
# boxes versus ordered simplices
# --------------------------------------------------------------------------

def rectangular_factor(l: Composition, gamma: complex) -> complex:
    n = l.n
    out = cmath.exp(1j * math.pi * gamma * n * (n - 1))
    for k in l.parts:
        for s in range(1, k + 1):
            out *= cmath.sin(-s * math.pi * gamma) / cmath.sin(-math.pi * gamma)
        out *= cmath.exp(-1j * math.pi * gamma * k * (k - 1) / 2)
    return out


def rectangular_to_triangular(l: Composition, m: Composition, params: SelbergParams,
                              spec: QuadratureSpec | None = None) -> tuple:
    """(box integral with (t_i - t_j)^{2 gamma}, factor times ordered integral, deviation)."""
    box = SelbergIntegrals(params, spec, exponential=True, ordering="reverse")
    tri = SelbergIntegrals(params, spec, exponential=True, ordering="forward")
    lhs = box.integral(domains(l, params, "V"), m)
    rhs = rectangular_factor(l, params.gamma) * tri.integral(domains(l, params, "Ut"), m)
    return lhs, rhs, relative_deviation(lhs, rhs)
