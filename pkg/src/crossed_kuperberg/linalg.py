"""Row reduction over an exact field."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from crossed_kuperberg.errors import DimensionMismatch, DivisionByZero
from crossed_kuperberg.scalar import FieldDescriptor, Native


def rref(field: FieldDescriptor, rows: Sequence[Sequence[Native]], ncols: int) -> tuple[list[list[Native]], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    m = [[field.native(v) for v in row] for row in rows]
    for row in m:
        if len(row) != ncols:
            raise DimensionMismatch(f"row of length {len(row)} in a system with {ncols} columns")
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not field.is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                factor = m[i][c]
                m[i] = [field.sub(a, field.mul(factor, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(field: FieldDescriptor, rows: Sequence[Sequence[Native]], ncols: int) -> list[list[Native]]:
    """Basis of {v : rows · v = 0}, one vector per free column."""
    reduced, pivots = rref(field, rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(reduced, pivots):
            v[pc] = field.neg(row[f])
        basis.append(v)
    return basis


def inverse(field: FieldDescriptor, matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=object)
    n = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != n:
        raise DimensionMismatch(f"cannot invert a matrix of shape {matrix.shape}")
    if n == 0:
        return field.zeros((0, 0))
    augmented = [list(matrix[i]) + [field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    reduced, pivots = rref(field, augmented, 2 * n)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise DivisionByZero("matrix is singular")
    return field.array([row[n:] for row in reduced])
