"""Exact dense linear algebra on numpy ``object`` arrays of scalars.

Matrices follow the column convention: column ``j`` holds the coordinates of
the image of the ``j``-th basis vector.  Elimination is fraction-free
(Bareiss) in the forward sweep so that integer-valued inputs stay small;
pivots are normalised only in the final back substitution.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .scalars import canonical

__all__ = [
    "SingularMatrix",
    "InconsistentSystem",
    "matrix",
    "vector",
    "zeros",
    "identity",
    "is_zero",
    "equal",
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "det",
    "solve",
    "mat_pow",
    "block_diag",
    "unit",
]


class SingularMatrix(ZeroDivisionError):
    pass


class InconsistentSystem(ValueError):
    pass


def matrix(rows: Iterable[Sequence]) -> np.ndarray:
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    out = np.empty((len(rows), ncols), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            out[i, j] = canonical(x)
    return out


def vector(entries: Iterable) -> np.ndarray:
    entries = list(entries)
    out = np.empty(len(entries), dtype=object)
    for i, x in enumerate(entries):
        out[i] = canonical(x)
    return out


def zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def unit(n: int, i: int) -> np.ndarray:
    v = zeros(n)
    v[i] = Fraction(1)
    return v


def is_zero(a: np.ndarray) -> bool:
    return all(x == 0 for x in np.asarray(a).flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(m, dtype=object, copy=True)
    if a.ndim != 2:
        raise ValueError("rref expects a matrix")
    nrows, ncols = a.shape
    pivots: list[int] = []
    row = 0
    prev = Fraction(1)
    for col in range(ncols):
        if row >= nrows:
            break
        p = next((i for i in range(row, nrows) if a[i, col] != 0), None)
        if p is None:
            continue
        if p != row:
            a[[row, p]] = a[[p, row]]
        piv = a[row, col]
        for i in range(row + 1, nrows):
            if a[i, col] != 0:
                a[i] = (piv * a[i] - a[i, col] * a[row]) / prev
            elif prev != 1:
                a[i] = (piv * a[i]) / prev
        prev = piv
        pivots.append(col)
        row += 1
    for r in range(len(pivots) - 1, -1, -1):
        col = pivots[r]
        a[r] = a[r] / a[r, col]
        for i in range(r):
            if a[i, col] != 0:
                a[i] = a[i] - a[i, col] * a[r]
    for i in range(len(pivots), nrows):
        a[i] = Fraction(0)
    return a, pivots


def rank(m: np.ndarray) -> int:
    if np.asarray(m).size == 0:
        return 0
    return len(rref(m)[1])


def nullspace(m: np.ndarray) -> list[np.ndarray]:
    """Basis of ``{x : m @ x = 0}``, one vector per free column."""
    m = np.asarray(m, dtype=object)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return [unit(ncols, j) for j in range(ncols)]
    r, pivots = rref(m)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = zeros(ncols)
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, f]
        basis.append(v)
    return basis


def inverse(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([m, identity(n)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return r[:, n:]


def det(m: np.ndarray):
    """Determinant by Bareiss elimination; the last pivot is the determinant."""
    a = np.array(m, dtype=object, copy=True)
    n = a.shape[0]
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k, k] == 0:
            p = next((i for i in range(k + 1, n) if a[i, k] != 0), None)
            if p is None:
                return Fraction(0)
            a[[k, p]] = a[[p, k]]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i, j] = (a[i, j] * a[k, k] - a[i, k] * a[k, j]) / prev
        prev = a[k, k]
    return canonical(sign * a[n - 1, n - 1])


def solve(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One exact solution of ``m @ x = b`` (free variables set to zero)."""
    m = np.asarray(m, dtype=object)
    b = np.asarray(b, dtype=object)
    ncols = m.shape[1]
    aug = np.concatenate([m, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(aug)
    if ncols in pivots:
        raise InconsistentSystem("right-hand side is not in the column space")
    x = zeros(ncols)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, ncols]
    return x


def mat_pow(m: np.ndarray, k: int) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    if k < 0:
        m, k = inverse(m), -k
    out = identity(m.shape[0])
    base = m
    while k:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out


def block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a, dtype=object), np.asarray(b, dtype=object)
    out = zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out
