"""Small exact linear algebra over the rationals.

Matrices are lists of lists of Fractions.  Everything here is
Gauss-based and sized for the handful-of-variables systems that arise
from homogeneity spaces and ray canonicalization.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [row for row in rows if any(row)], pivots


def rank(matrix):
    return len(rref(matrix)[0])


def nullspace(matrix, ncols=None):
    """Basis of the right null space, one vector per free column."""
    if not matrix:
        if ncols is None:
            return []
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def solve(matrix, rhs):
    """One solution of A x = b, or None if inconsistent."""
    if not matrix:
        return None
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    for row in rows:
        if not any(row[:ncols]) and row[ncols]:
            return None
    x = [Fraction(0)] * ncols
    for row, p in zip(rows, pivots):
        if p < ncols:
            x[p] = row[ncols]
    return x


def in_row_space(matrix, vector):
    """Whether vector lies in the span of the matrix rows."""
    if not matrix:
        return not any(vector)
    base = rank(matrix)
    return rank(matrix + [list(vector)]) == base


def matvec(matrix, vector):
    return [sum(a * x for a, x in zip(row, vector)) for row in matrix]


def project_off(basis, vector):
    """Component of vector orthogonal to the span of the basis rows.

    Exact least squares through the normal equations; returns the vector
    unchanged when the basis is empty.
    """
    if not basis:
        return [Fraction(x) for x in vector]
    gram = [[sum(a * b for a, b in zip(u, v)) for v in basis] for u in basis]
    rhs = [sum(a * x for a, x in zip(u, vector)) for u in basis]
    coeffs = solve(gram, rhs)
    out = [Fraction(x) for x in vector]
    for c, u in zip(coeffs, basis):
        for i, a in enumerate(u):
            out[i] -= c * a
    return out


def primitive(vector):
    """Scale by a positive rational so entries are coprime integers.

    Returns None for the zero vector.  The direction is preserved.
    """
    if not any(vector):
        return None
    denom = lcm(*[Fraction(x).denominator for x in vector])
    ints = [int(Fraction(x) * denom) for x in vector]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [v // g for v in ints]
