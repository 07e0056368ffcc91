"""Row reduction over Q with ``fractions.Fraction``.

Matrices are lists of rows.  Nothing here knows about interval exchanges.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _frac_rows(m):
    return [[Fraction(x) for x in row] for row in m]


def rref(m):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)`` with zero
    rows dropped."""
    rows = _frac_rows(m)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m, ncols=None):
    """Basis of ``{v : m v = 0}``; ``ncols`` is needed when ``m`` has no rows."""
    if not m:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(m[0])
    rows, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(m, rhs):
    """One solution of ``m v = rhs`` or ``None`` if inconsistent."""
    if not m:
        return None
    ncols = len(m[0])
    aug = [list(row) + [b] for row, b in zip(m, rhs)]
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for row, p in zip(rows, pivots):
        v[p] = row[-1]
    return v


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def dot(u, v):
    return sum((Fraction(x) * y for x, y in zip(u, v)), Fraction(0))


def bilinear(u, m, v):
    return dot(u, matvec(m, v))


def primitive(v):
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) if any(ints) else 1
    ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return ints


def integral_row_basis(m):
    """Canonical primitive integral basis of the row space of ``m``."""
    rows, _ = rref(m)
    return [primitive(r) for r in rows]


def same_span(a, b) -> bool:
    if not a and not b:
        return True
    if not a or not b:
        return False
    return rref(a)[0] == rref(b)[0]
