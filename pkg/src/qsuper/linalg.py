"""Exact dense linear algebra over a field (Fraction or FieldScalar entries).

Matrices are lists of row lists.  Everything here is plain Gaussian
elimination; sizes in this package stay in the tens.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import NotInvertible


def _is_zero(x) -> bool:
    return x == 0


def rref(matrix: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns (leftmost-first)."""
    m = [list(r) for r in matrix]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if not _is_zero(m[i][c])), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], int) else Fraction(1, m[r][c])
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def independent_rows(matrix) -> list[int]:
    """Greedy (first-come) maximal set of linearly independent rows."""
    return rref(transpose(matrix))[1] if matrix else []


def transpose(matrix):
    return [list(r) for r in zip(*matrix)]


def nullspace(matrix, zero, one) -> list[list]:
    """Basis of the right null space, one vector per free column (in column order)."""
    if not matrix:
        return []
    red, pivots = rref(matrix)
    cols = len(matrix[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


def inverse(matrix, zero, one) -> list[list]:
    n = len(matrix)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("singular matrix")
    return [row[n:] for row in red]


def matmul(a, b, zero):
    if not a:
        return []
    bt = transpose(b)
    return [[_dot(row, col, zero) for col in bt] for row in a]


def _dot(u, v, zero):
    s = zero
    for x, y in zip(u, v):
        if not _is_zero(x) and not _is_zero(y):
            s = s + x * y
    return s


def matvec(a, v, zero):
    return [_dot(row, v, zero) for row in a]


def identity(n, zero, one):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def is_zero_matrix(a) -> bool:
    return all(_is_zero(x) for row in a for x in row)


def count_nonzero(a) -> int:
    return sum(1 for row in a for x in row if not _is_zero(x))
