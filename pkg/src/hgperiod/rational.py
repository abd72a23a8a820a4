"""Exact linear algebra over the rationals.

Everything here works on plain Python lists/tuples of ``fractions.Fraction``.
Matrices are sequences of rows.  Sizes in this package are tiny (at most a
dozen rows, four columns), so clarity wins over speed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and exact strings like ``"3/4"`` to a Fraction.

    Floats are converted exactly (binary value), never rounded.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a, b) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def add(a, b) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a) -> Vector:
    return tuple(c * x for x in a)


def mean(points: Sequence[Sequence[Fraction]]) -> Vector:
    k = len(points)
    return tuple(sum(col, Fraction(0)) / k for col in zip(*points))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Reduced row echelon form.  Returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of {x : rows @ x = 0}."""
    reduced, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_affine(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int):
    """Solve rows @ x = rhs.

    Returns ``(point, directions)`` describing the affine solution space, or
    ``None`` when the system is inconsistent.
    """
    if not rows:
        return tuple(Fraction(0) for _ in range(ncols)), nullspace([], ncols)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    point = [Fraction(0)] * ncols
    for row, pc in zip(reduced, pivots):
        point[pc] = row[ncols]
    return tuple(point), nullspace(rows, ncols)


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(r) for r in matrix]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                factor = m[i][c] / m[c][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[c])]
    return result


def orthogonal_complement(vectors: Sequence[Sequence[Fraction]], dim: int) -> list[Vector]:
    """Rational basis of the orthogonal complement of span(vectors) in Q^dim."""
    return nullspace(list(vectors), dim)


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of a nonempty point set."""
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [sub(p, base) for p in points[1:]]
    return rank(diffs, len(base))


def proportional(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    """True iff a = c*b for some nonzero rational c (both nonzero)."""
    k = next((i for i, x in enumerate(b) if x != 0), None)
    if k is None or a[k] == 0:
        return False
    c = a[k] / b[k]
    return all(x == c * y for x, y in zip(a, b))


def primitive_key(a: Sequence[Fraction]) -> Vector:
    """Scale-invariant key: divide by the first nonzero entry."""
    k = next(i for i, x in enumerate(a) if x != 0)
    return tuple(x / a[k] for x in a)


# --------------------------------------------------------------------------
# Fourier-Motzkin feasibility with strict inequalities
# --------------------------------------------------------------------------

def _normalize(constraints):
    """Scale each constraint, drop trivial ones, keep the tightest duplicate.

    A constraint is ``(coeffs, const, strict)`` meaning
    ``coeffs . x + const > 0`` (strict) or ``>= 0``.
    Returns None if a constant constraint is violated.
    """
    best: dict = {}
    for coeffs, const, strict in constraints:
        k = next((i for i, x in enumerate(coeffs) if x != 0), None)
        if k is None:
            if const < 0 or (const == 0 and strict):
                return None
            continue
        s = abs(coeffs[k])
        key = tuple(x / s for x in coeffs)
        c = const / s
        old = best.get(key)
        if old is None or c < old[0] or (c == old[0] and strict and not old[1]):
            best[key] = (c, strict)
    return [(k, c, s) for k, (c, s) in best.items()]


def find_point(constraints, dim: int):
    """Exact witness point for a system of (possibly strict) linear inequalities.

    Returns a tuple of Fractions or None when infeasible.
    """
    cur = _normalize([(tuple(a), Fraction(b), bool(s)) for a, b, s in constraints])
    if cur is None:
        return None
    stages = []
    for k in reversed(range(dim)):
        stages.append((k, cur))
        pos = [c for c in cur if c[0][k] > 0]
        neg = [c for c in cur if c[0][k] < 0]
        new = [c for c in cur if c[0][k] == 0]
        for ap, bp, sp in pos:
            for aq, bq, sq in neg:
                lp, lq = -aq[k], ap[k]
                coeffs = tuple(lp * x + lq * y for x, y in zip(ap, aq))
                new.append((coeffs, lp * bp + lq * bq, sp or sq))
        cur = _normalize(new)
        if cur is None:
            return None
    x = [Fraction(0)] * dim
    for k, cons in reversed(stages):
        lo = hi = None
        lo_strict = hi_strict = False
        for coeffs, const, strict in cons:
            a = coeffs[k]
            if a == 0:
                continue
            rest = const + sum((coeffs[i] * x[i] for i in range(k)), Fraction(0))
            bound = -rest / a
            if a > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
        if lo is not None and hi is not None:
            if lo < hi:
                x[k] = (lo + hi) / 2
            elif lo == hi and not lo_strict and not hi_strict:
                x[k] = lo
            else:  # pragma: no cover - FM guarantees consistency
                return None
        elif lo is not None:
            x[k] = lo + 1
        elif hi is not None:
            x[k] = hi - 1
    return tuple(x)
