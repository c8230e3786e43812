"""Small exact linear-algebra helpers over the rationals.

Matrices are lists of rows of Fractions.  Right-hand sides may live in any
commutative ring that supports addition, subtraction and multiplication by
Fraction (in particular :class:`hetg2.scalar.Scalar`), so a rational system
can be solved with polynomial data carried along exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .scalar import AlgebraError


class InconsistentSystemError(AlgebraError):
    def __init__(self, residual):
        super().__init__("linear system has no solution")
        self.residual = residual


def rref(matrix: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(map(Fraction, r)) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve_ring_rhs(matrix: Sequence[Sequence[Fraction]], rhs: list,
                   zero, is_zero: Callable[[object], bool]):
    """Solve M x = b exactly where M is rational and b has ring entries.

    The system must have full column rank; an inconsistent system raises
    :class:`InconsistentSystemError` carrying the offending residual entry.
    """
    rows = [list(map(Fraction, r)) for r in matrix]
    b = list(rhs)
    n = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        b[r], b[pivot] = b[pivot], b[r]
        for i in range(r + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * d for a, d in zip(rows[i], rows[r])]
                b[i] = b[i] - f * b[r]
        pivots.append((r, c))
        r += 1
        if r == n:
            break
    if len(pivots) != ncols:
        raise AlgebraError("system does not have full column rank")
    for i in range(r, n):
        if not is_zero(b[i]):
            raise InconsistentSystemError(b[i])
    x = [zero] * ncols
    for r, c in reversed(pivots):
        acc = b[r]
        for c2 in range(c + 1, ncols):
            if rows[r][c2] != 0:
                acc = acc - rows[r][c2] * x[c2]
        x[c] = acc * (1 / rows[r][c])
    return x
