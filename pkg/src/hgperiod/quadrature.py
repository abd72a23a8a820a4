"""Singular quadrature over polyhedra, period matrices, and verification reports.

Every integrand handled here has the shape

    prod_h h(x)^{e_h} * exp(-scale * f0(x))

on a polyhedron where each h >= 0 is an affine form and Re e_h > -1.  The
region is cut into the simplices of its barycentric flag subdivision.  On a
simplex with vertices b_0 (a vertex), b_1 (barycenter of an edge), ..., b_n
(barycenter of the region), collapsed coordinates y in [0,1]^n give

    lambda_j = y_1...y_j (1 - y_{j+1}),   lambda_n = y_1...y_n,

and a factor h vanishing on the first k+1 faces of the flag (and no further)
equals (y_1...y_{k+1}) times a positive polynomial.  All singular behaviour
therefore becomes a product of powers y_m^{E_m}, integrated exactly by
Gauss-Jacobi rules.  Growing regions are split at f0 = T0 into a polytope and
a semi-infinite prism swept by a moving cross-section.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from . import rational as Q
from .chambers import Chamber, truncate
from .closed_form import (beta_function, beta_function_relative,
                          critical_product)
from .errors import NonIntegrable, NotGrowing
from .forms import BranchAssignment, NForm, phi_set
from .geometry import Arrangement, LinearForm
from .nbc import Labelling, chamber_bijection
from .polytope import Polyhedron, section_polytope


@dataclass
class QuadratureSpec:
    tol: float = 1e-10       # relative accuracy target for each raw integral
    nodes: int = 10          # Gauss nodes per direction at the first level
    max_depth: int = 4       # number of refinements before giving up

    def __post_init__(self):
        if not 0 < self.tol < 1:
            raise ValueError("tolerance must lie in (0, 1)")
        if self.nodes < 2:
            raise ValueError("need at least two nodes")

    def levels(self):
        n = self.nodes
        for _ in range(self.max_depth + 1):
            yield n
            n = n + max(2, n // 2)


# --------------------------------------------------------------------------
# one-dimensional rules
# --------------------------------------------------------------------------

def _complex_jacobi(N: int, E: complex):
    """Gauss rule for the complex weight y^E on [0, 1] (Golub-Welsch on the
    analytically continued Jacobi recurrence)."""
    a, b = 0.0, complex(E)
    k = np.arange(N, dtype=float)
    s = 2 * k + a + b
    diag = (b * b - a * a) / (s * (s + 2))
    diag[0] = (b - a) / (a + b + 2)
    kk = np.arange(1, N, dtype=float)
    s1 = 2 * kk + a + b
    off = 4 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s1 ** 2 * (s1 + 1) * (s1 - 1))
    J = np.diag(diag) + np.diag(np.sqrt(off), 1) + np.diag(np.sqrt(off), -1)
    x, V = np.linalg.eig(J)
    w = V[0, :] ** 2 / np.sum(V * V, axis=0) / (E + 1)
    order = np.argsort(x.real)
    return (1 + x[order]) / 2, w[order]


@lru_cache(maxsize=4096)
def jacobi_rule(N: int, E: complex):
    """Nodes and weights for integral_0^1 y^E g(y) dy."""
    E = complex(E)
    if E.real <= -1:
        raise NonIntegrable(f"exponent {E} is not integrable at 0")
    if E.imag == 0:
        x, w = roots_jacobi(N, 0.0, E.real)
        return (1 + x) / 2, w / 2 ** (E.real + 1)
    return _complex_jacobi(N, E)


@lru_cache(maxsize=64)
def legendre_rule(N: int):
    x, w = roots_legendre(N)
    return (1 + x) / 2, w / 2


def _tensor(rules):
    """Tensor grid of 1-d rules: points (M, d), weights (M,)."""
    if not rules:
        return np.zeros((1, 0)), np.ones(1)
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    Y = np.stack([g.ravel() for g in grids], axis=1)
    W = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return Y, W


def _collapsed(Y):
    """Barycentric coordinates lambda (M, d+1) and prefix products P (M, d+1)."""
    M, d = Y.shape
    P = np.ones((M, d + 1), dtype=Y.dtype)
    for j in range(1, d + 1):
        P[:, j] = P[:, j - 1] * Y[:, j - 1]
    lam = np.empty((M, d + 1), dtype=Y.dtype)
    for j in range(d):
        lam[:, j] = P[:, j] * (1 - Y[:, j])
    lam[:, d] = P[:, d]
    return lam, P


def _reduced_weights(lam, P, k):
    """mu_i = lambda_i / (y_1...y_{k+1}) for i > k, zero otherwise."""
    mu = np.zeros_like(lam)
    mu[:, k + 1:] = lam[:, k + 1:] / P[:, k + 1:k + 2]
    return mu


def _level_exponents(d, levels, exps):
    """E_m = (d - m) + sum of e_h over factors with level >= m - 1."""
    return [complex(d - m) + sum((e for k, e in zip(levels, exps) if k >= m - 1), 0j)
            for m in range(1, d + 1)]


def _cpow(s, e):
    if e == 0:
        return 1.0
    if np.iscomplexobj(s) or isinstance(e, complex) and e.imag != 0:
        return np.exp(e * np.log(s.astype(complex)))
    return np.exp(e.real * np.log(s))


# --------------------------------------------------------------------------
# integration over a region
# --------------------------------------------------------------------------

@dataclass
class _Simplex:
    points: np.ndarray       # (d+1, n) barycenters
    velocity: np.ndarray     # (d+1, n) d(points)/dtau (semi-infinite pieces)
    values: np.ndarray       # (F, d+1) factor values at the points
    slopes: np.ndarray       # (F, d+1) factor slopes along tau
    levels: tuple            # per factor, last flag index where it vanishes (-1 if none)
    volume: float            # |det(b_i - b_0)| (bounded pieces)


def _flag_simplices(P: Polyhedron, factors, to_x=None, velocity=None):
    verts = P.vertices
    xs = [to_x(v) if to_x else v for v in verts]
    out = []
    for chain in P.flags:
        bary = [Q.mean([xs[k] for k in sorted(G)]) for G in chain]
        levels = []
        for h in factors:
            k = -1
            for G in chain:
                if all(h(xs[v]) == 0 for v in G):
                    k += 1
                else:
                    break
            levels.append(k)
        pts = np.array([[float(c) for c in b] for b in bary], dtype=float)
        vals = np.array([[float(h(b)) for b in bary] for h in factors], dtype=float).reshape(len(factors), len(bary))
        if velocity is not None:
            vel = [Q.mean([velocity[k] for k in sorted(G)]) for G in chain]
            velf = np.array([[float(c) for c in v] for v in vel], dtype=float)
            slopes = np.array([[float(Q.dot(h.homogeneous, v)) for v in vel] for h in factors],
                              dtype=float).reshape(len(factors), len(vel))
        else:
            velf = np.zeros_like(pts)
            slopes = np.zeros_like(vals)
        if len(bary) > 1 and velocity is None:
            vol = abs(float(Q.det([Q.sub(b, bary[0]) for b in bary[1:]])))
        else:
            vol = 1.0
        out.append(_Simplex(pts, velf, vals, slopes, tuple(levels), vol))
    return out


class RegionIntegrator:
    """Integrals of prod h^{e_h} [exp(-scale f0)] over a pointed polyhedron.

    ``factors`` are affine forms nonnegative on the region.  Unbounded regions
    need ``f0`` increasing along every recession ray.
    """

    def __init__(self, region: Polyhedron, factors, f0: LinearForm | None = None):
        self.region = region
        self.factors = tuple(factors)
        self.f0 = f0
        n = region.dimension
        self.n = n
        if region.bounded:
            self.bounded_pieces = _flag_simplices(region, self.factors)
            self.tail_pieces = []
            self.T0 = None
            return
        if f0 is None or any(Q.dot(f0.homogeneous, r) <= 0 for r in region.rays):
            raise NotGrowing("unbounded region on which f0 does not grow")
        self.T0 = max(f0(v) for v in region.vertices) + 1
        cut = LinearForm(Q.scale(-1, f0.homogeneous), self.T0 - f0.constant)
        truncated = Polyhedron(region.constraints + (cut,), n)
        self.bounded_pieces = _flag_simplices(truncated, self.factors)
        S, base, frame = section_polytope(region, f0, self.T0)

        def to_x(u):
            x = base
            for c, b in zip(u, frame):
                x = Q.add(x, Q.scale(c, b))
            return x

        vel = []
        rows = [g.homogeneous for g in region.constraints]
        for u in S.vertices:
            w = to_x(u)
            tight = [rows[k] for k, g in enumerate(region.constraints) if g(w) == 0]
            ker = Q.nullspace(tight, n)
            if len(ker) != 1:
                raise ValueError("cross-section vertex is not on an unbounded edge")
            r = ker[0]
            s = Q.dot(f0.homogeneous, r)
            vel.append(Q.scale(1 / s, r))
        self.tail_pieces = _flag_simplices(S, self.factors, to_x, vel)

    # ------------------------------------------------------------------
    def _bounded(self, piece: _Simplex, exps, scale, N):
        d = self.n
        E = _level_exponents(d, piece.levels, exps)
        Y, W = _tensor([jacobi_rule(N, e) for e in E])
        lam, P = _collapsed(Y)
        val = np.ones(len(W), dtype=complex if np.iscomplexobj(Y) else float)
        for h, (k, e) in enumerate(zip(piece.levels, exps)):
            if e == 0:
                continue
            mu = _reduced_weights(lam, P, k)
            val = val * _cpow(mu @ piece.values[h], e)
        if self.f0 is not None:
            x = lam @ piece.points
            g = np.array([float(c) for c in self.f0.homogeneous])
            val = val * np.exp(-scale * (x @ g + float(self.f0.constant)))
        return piece.volume * np.sum(W * val)

    def _tail(self, piece: _Simplex, exps, scale, N):
        d = self.n - 1
        E = _level_exponents(d, piece.levels, exps)
        Y, W = _tensor([jacobi_rule(N, e) for e in E])
        lam, P = _collapsed(Y)
        mus = {k: _reduced_weights(lam, P, k) for k in set(piece.levels)}
        un, uw = legendre_rule(N)
        rate = max(scale.real, 1e-3)
        T0 = float(self.T0)
        total = 0j
        lo, width = 0.0, 1.0 / rate
        for panel in range(80):
            u = lo + width * un
            w_u = width * uw
            # grid: section points x tau points
            U = u[None, :]
            jac = self._tail_jacobian(piece, lam, u)
            val = np.ones((len(W), len(u)), dtype=complex)
            for h, (k, e) in enumerate(zip(piece.levels, exps)):
                if e == 0:
                    continue
                s = (mus[k] @ piece.values[h])[:, None] + (mus[k] @ piece.slopes[h])[:, None] * U
                val = val * _cpow(s, e)
            val = val * jac * np.exp(-scale * (T0 + U))
            part = np.sum(W[:, None] * w_u[None, :] * val)
            total += part
            if panel >= 3 and abs(part) <= 1e-17 * abs(total):
                break
            lo += width
            if panel >= 1:
                width *= 2
        return total

    def _tail_jacobian(self, piece: _Simplex, lam, u):
        """|det[dx/dtau, c_1 - c_0, ..., c_d - c_0]| on the (section point, tau) grid."""
        n = self.n
        C, V = piece.points, piece.velocity
        dxdt = lam @ V                                     # (M, n), tau independent
        M, L = lam.shape[0], len(u)
        mat = np.empty((M, L, n, n), dtype=lam.dtype)
        mat[:, :, :, 0] = dxdt[:, None, :]
        for i in range(1, n):
            edge = (C[i] - C[0])[None, :] + u[:, None] * (V[i] - V[0])[None, :]   # (L, n)
            mat[:, :, :, i] = edge[None, :, :]
        return np.abs(np.linalg.det(mat)) if not np.iscomplexobj(mat) else _signed_abs_det(mat)

    def integrate(self, exps, scale=1.0, N=10) -> complex:
        exps = tuple(complex(e) for e in exps)
        for e in exps:
            if e.real <= -1:
                raise NonIntegrable(f"exponent {e} is not integrable")
        scale = complex(scale)
        total = 0j
        for piece in self.bounded_pieces:
            total += self._bounded(piece, exps, scale, N)
        for piece in self.tail_pieces:
            total += self._tail(piece, exps, scale, N)
        return complex(total)

    def adaptive(self, exps, spec: QuadratureSpec, scale=1.0):
        """(value, error estimate, converged)."""
        prev = None
        for N in spec.levels():
            val = self.integrate(exps, scale, N)
            if prev is not None:
                err = abs(val - prev)
                if err <= spec.tol * max(abs(val), 1e-300):
                    return val, err, True
            prev = val
        return val, err, False


def _signed_abs_det(mat):
    """Determinant of the analytic continuation of a positive Jacobian.

    With complex nodes the Jacobian is a polynomial evaluated off the real
    axis; its sign is fixed by the real part.
    """
    d = np.linalg.det(mat)
    return np.where(d.real >= 0, d, -d)


# --------------------------------------------------------------------------
# period matrices
# --------------------------------------------------------------------------

def chamber_region(A: Arrangement, chamber: Chamber) -> tuple:
    """Polyhedron of the chamber closure and its nonnegative factors s_i f_i."""
    forms = tuple(f.scaled(s) for s, f in zip(chamber.signs, A.forms))
    return Polyhedron(forms, A.dimension), forms


@dataclass
class PeriodMatrix:
    matrix: np.ndarray
    errors: np.ndarray
    labelling: Labelling
    forms: list
    converged: bool
    raw: dict = field(default_factory=dict)


class PeriodComputation:
    """Raw integrals I(chamber, pole set), cached independently of branches
    and orientations so that those can be varied cheaply."""

    def __init__(self, A: Arrangement, f0: LinearForm | None = None,
                 spec: QuadratureSpec | None = None, scale: complex = 1.0):
        self.A = A
        self.f0 = f0
        self.spec = spec or QuadratureSpec()
        self.scale = scale
        self.labelling = chamber_bijection(A, f0)
        self.forms = phi_set(A, f0)
        self._integrators = {}
        self.raw = {}

    def integrator(self, chamber: Chamber) -> RegionIntegrator:
        key = chamber.signs
        if key not in self._integrators:
            region, factors = chamber_region(self.A, chamber)
            self._integrators[key] = RegionIntegrator(region, factors, self.f0)
        return self._integrators[key]

    def raw_integral(self, chamber: Chamber, poles: tuple):
        key = (chamber.signs, poles)
        if key not in self.raw:
            exps = [w - (1 if i in poles else 0) for i, w in enumerate(self.A.weights)]
            self.raw[key] = self.integrator(chamber).adaptive(exps, self.spec, self.scale)
        return self.raw[key]

    def entry(self, phi: NForm, chamber: Chamber, orientation: int, branch: BranchAssignment):
        A = self.A
        val, err, ok = 0j, 0.0, True
        for c, T in phi.terms:
            d = float(Q.det([A.forms[j].homogeneous for j in T]))
            sign = 1
            for j in T:
                sign *= chamber.signs[j]
            I, e, conv = self.raw_integral(chamber, T)
            val += c * d * sign * I
            err += abs(c * d) * e
            ok = ok and conv
        phase = branch.chamber_phase(A, chamber)
        return orientation * phase * val, abs(phase) * err, ok

    def matrix(self, branch: BranchAssignment | None = None, orientations=None) -> PeriodMatrix:
        branch = branch or BranchAssignment()
        lab = self.labelling
        orient = orientations if orientations is not None else lab.orientations
        m = len(lab)
        M = np.zeros((m, m), dtype=complex)
        E = np.zeros((m, m))
        ok = True
        for k, phi in enumerate(self.forms):
            for j, ch in enumerate(lab.chambers):
                M[k, j], E[k, j], conv = self.entry(phi, ch, orient[j], branch)
                ok = ok and conv
        return PeriodMatrix(M, E, lab, self.forms, ok)


def period_matrix(A: Arrangement, branch: BranchAssignment | None = None,
                  spec: QuadratureSpec | None = None, f0: LinearForm | None = None) -> PeriodMatrix:
    return PeriodComputation(A, f0, spec).matrix(branch)


def determinant(M: np.ndarray) -> complex:
    if M.shape[0] == 0:
        return 1 + 0j
    return complex(np.linalg.det(M))


def condition_number(M: np.ndarray) -> float:
    if M.shape[0] == 0:
        return 1.0
    return float(np.linalg.cond(M))


def relative_deviation(lhs: complex, rhs: complex) -> float:
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0 else abs(lhs - rhs) / scale


@dataclass
class VerificationReport:
    lhs: complex
    rhs: complex
    deviation: float
    tolerance: float
    size: int
    condition: float
    entry_error: float
    converged: bool
    beta: complex
    critical: complex
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.converged and self.deviation <= self.tolerance


def verify(A: Arrangement, tol: float = 1e-6, f0: LinearForm | None = None,
           spec: QuadratureSpec | None = None, branch: BranchAssignment | None = None,
           computation: PeriodComputation | None = None, orientations=None) -> VerificationReport:
    """Compare det PM with c * B (with or without f0)."""
    start = time.perf_counter()
    if spec is None:
        spec = QuadratureSpec(tol=min(1e-10, tol * 1e-3))
    comp = computation or PeriodComputation(A, f0, spec)
    branch = branch or BranchAssignment()
    pm = comp.matrix(branch, orientations)
    lhs = determinant(pm.matrix)
    beta = beta_function(A) if f0 is None else beta_function_relative(A, f0)
    crit, _ = critical_product(A, branch, comp.labelling.chambers, f0)
    rhs = crit * beta.value
    return VerificationReport(lhs, rhs, relative_deviation(lhs, rhs), tol, len(comp.labelling),
                              condition_number(pm.matrix), float(pm.errors.max(initial=0.0)),
                              pm.converged, beta.value, crit,
                              time.perf_counter() - start)


# --------------------------------------------------------------------------
# optional truncation convergence check
# --------------------------------------------------------------------------

def convergence_check(A: Arrangement, f0: LinearForm, ts=(10, 40, 160),
                      spec: QuadratureSpec | None = None) -> list:
    """Deviation of PM(A_t) (weight t on 1 - f0/t, positive branch) from PM(A; f0).

    Rows and columns are matched through the betanbc labels.
    """
    spec = spec or QuadratureSpec(tol=1e-9)
    ref = PeriodComputation(A, f0, spec)
    target = ref.matrix().matrix
    ref_bases = ref.labelling.bases
    out = []
    for t in ts:
        At = truncate(A, f0, t)
        comp = PeriodComputation(At, None, spec)
        Mt = comp.matrix().matrix
        # betanbc(A_t) never contains H_t: compare by shifting indices
        order = [comp.labelling.bases.index(tuple(i + 1 for i in B)) for B in ref_bases]
        Mt = Mt[np.ix_(order, order)]
        out.append((t, float(np.max(np.abs(Mt - target)) / np.max(np.abs(target)))))
    return out
