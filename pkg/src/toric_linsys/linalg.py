"""Exact integer / rational linear algebra and a small simplex LP solver.

Everything works over Python ints and fractions.Fraction; no floats ever.
Vectors are tuples, matrices are sequences of row sequences.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(s, a):
    return tuple(s * x for x in a)


def vec_neg(a):
    return tuple(-x for x in a)


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b):
    cols = transpose(b)
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def columns_matrix(vectors):
    """Matrix whose columns are the given vectors."""
    return transpose(tuple(vectors))


def det(m):
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def invert(m):
    """Exact inverse of a square matrix, entries Fraction. Raises on singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def solve_unique(m, b):
    """Solve the square system m x = b exactly; None if m is singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(m, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(a[i][n] for i in range(n))


def solve_in_span(vectors, target):
    """Express target as a combination of linearly independent vectors.

    Returns the coefficient tuple, or None when target is outside the span.
    Raises ValueError if the vectors are linearly dependent.
    """
    k = len(vectors)
    rows = [[Fraction(vectors[j][i]) for j in range(k)] + [Fraction(target[i])]
            for i in range(len(target))]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            raise ValueError("linearly dependent vectors")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][k] != 0:
            return None
    return tuple(rows[i][k] for i in range(k))


def rank(rows):
    """Exact rank over the rationals."""
    a = [[Fraction(x) for x in row] for row in rows]
    rk = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        prow = a[rk]
        inv = 1 / prow[col]
        for i in range(rk + 1, len(a)):
            if a[i][col] != 0:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        rk += 1
        if rk == len(a):
            break
    return rk


def affine_rank(points):
    """Dimension of the affine hull of the given rational points."""
    if not points:
        return -1
    base = points[0]
    diffs = [vec_sub(p, base) for p in points[1:]]
    return rank(diffs) if diffs else 0


# ---------------------------------------------------------------------------
# Simplex LP, exact over Fractions.  Small problems only; Bland's rule keeps
# pivoting finite.

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPResult:
    __slots__ = ("status", "value", "x")

    def __init__(self, status, value=None, x=None):
        self.status = status
        self.value = value
        self.x = x

    def __repr__(self):
        return f"LPResult({self.status}, {self.value})"


def lp_solve(n_vars, objective=None, ineqs=(), eqs=(), maximize=True,
             nonneg=False):
    """Solve max/min objective . x subject to a.x <= b and c.x == d.

    ineqs and eqs are sequences of (coeffs, rhs) pairs. Variables are free
    unless nonneg=True. objective None means pure feasibility. Exact
    two-phase tableau simplex with Bland's rule.
    """
    split = not nonneg
    width = 2 * n_vars if split else n_vars

    def expand(coeffs):
        if split:
            return [Fraction(c) for c in coeffs] + [Fraction(-c) for c in coeffs]
        return [Fraction(c) for c in coeffs]

    rows = []
    slack_of_row = []
    for coeffs, rhs in ineqs:
        rows.append((expand(coeffs), Fraction(rhs), True))
    for coeffs, rhs in eqs:
        rows.append((expand(coeffs), Fraction(rhs), False))

    m = len(rows)
    nslack = sum(1 for _, _, s in rows if s)
    ncols = width + nslack + m  # structural + slack + artificial
    tableau = []
    sidx = 0
    for r, (coeffs, rhs, has_slack) in enumerate(rows):
        row = coeffs + [Fraction(0)] * (nslack + m) + [rhs]
        if has_slack:
            row[width + sidx] = Fraction(1)
            sidx += 1
        if rhs < 0:
            row = [-x for x in row[:-1]] + [-rhs]
        row[width + nslack + r] = Fraction(1)
        tableau.append(row)
    basis = [width + nslack + r for r in range(m)]

    def pivot(ri, ci):
        prow = tableau[ri]
        inv = 1 / prow[ci]
        tableau[ri] = [x * inv for x in prow]
        prow = tableau[ri]
        for i in range(len(tableau)):
            if i != ri and tableau[i][ci] != 0:
                f = tableau[i][ci]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], prow)]
        basis[ri] = ci

    def run(costs, restrict):
        # maximize costs . vars; returns False on unboundedness
        while True:
            zrow = [Fraction(c) for c in costs] + [Fraction(0)]
            for ri, bi in enumerate(basis):
                cb = costs[bi]
                if cb != 0:
                    zrow = [z - cb * t for z, t in zip(zrow, tableau[ri])]
            enter = None
            for j in range(restrict):
                if zrow[j] > 0:
                    enter = j
                    break
            if enter is None:
                return True
            leave = None
            best = None
            for i in range(m):
                a = tableau[i][enter]
                if a > 0:
                    ratio = tableau[i][-1] / a
                    if best is None or ratio < best or (
                            ratio == best and basis[i] < basis[leave]):
                        best = ratio
                        leave = i
            if leave is None:
                return False
            pivot(leave, enter)

    # phase 1: drive artificials to zero
    costs1 = [Fraction(0)] * ncols
    for j in range(width + nslack, ncols):
        costs1[j] = Fraction(-1)
    run(costs1, ncols)
    total = sum(tableau[i][-1] for i in range(m)
                if basis[i] >= width + nslack)
    if total != 0:
        return LPResult(INFEASIBLE)
    # pivot out artificials still basic at zero
    for i in range(m):
        if basis[i] >= width + nslack:
            c = next((j for j in range(width + nslack)
                      if tableau[i][j] != 0), None)
            if c is not None:
                pivot(i, c)
    live = [i for i in range(m) if basis[i] < width + nslack]
    if len(live) < m:
        tableau[:] = [tableau[i] for i in live]
        basis[:] = [basis[i] for i in live]
        m = len(live)

    def extract():
        full = [Fraction(0)] * ncols
        for ri, bi in enumerate(basis):
            full[bi] = tableau[ri][-1]
        if split:
            return tuple(full[i] - full[n_vars + i] for i in range(n_vars))
        return tuple(full[:n_vars])

    if objective is None:
        return LPResult(OPTIMAL, Fraction(0), extract())

    obj = list(objective) if maximize else [-c for c in objective]
    costs2 = [Fraction(0)] * ncols
    for i in range(n_vars):
        costs2[i] = Fraction(obj[i])
        if split:
            costs2[n_vars + i] = Fraction(-obj[i])
    if not run(costs2, width + nslack):
        return LPResult(UNBOUNDED)
    x = extract()
    value = dot(objective, x)
    return LPResult(OPTIMAL, value, x)


def feasible(ineqs, eqs=(), n_vars=None, nonneg=False):
    """Exact feasibility of a.x <= b (and c.x == d) over the rationals."""
    if n_vars is None:
        if ineqs:
            n_vars = len(ineqs[0][0])
        elif eqs:
            n_vars = len(eqs[0][0])
        else:
            return True
    res = lp_solve(n_vars, None, ineqs, eqs, nonneg=nonneg)
    return res.status == OPTIMAL


def point_in_hull(points, x):
    """Is x in the convex hull of the given rational points? Exact LP."""
    k = len(points)
    if k == 0:
        return False
    d = len(x)
    eqs = [(tuple(p[i] for p in points), x[i]) for i in range(d)]
    eqs.append(((1,) * k, 1))
    res = lp_solve(k, None, ineqs=(), eqs=eqs, nonneg=True)
    return res.status == OPTIMAL
