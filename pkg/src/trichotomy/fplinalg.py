"""Exact dense linear algebra over F_p."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import rref_inplace
from .words import check_prime


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MatrixFp:
    p: int
    entries: np.ndarray

    def __post_init__(self):
        check_prime(self.p)
        a = np.array(self.entries, dtype=np.int64, copy=True)
        if a.ndim != 2:
            raise DimensionError("MatrixFp entries must be 2-dimensional")
        a %= self.p
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_rows(cls, rows, p: int, cols: int | None = None) -> "MatrixFp":
        rows = list(rows)
        if not rows:
            if cols is None:
                raise DimensionError("column count needed for an empty matrix")
            return cls(p, np.zeros((0, cols), dtype=np.int64))
        a = np.asarray(rows, dtype=np.int64)
        if cols is not None and a.shape[1] != cols:
            raise DimensionError(f"expected {cols} columns, got {a.shape[1]}")
        return cls(p, a)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "MatrixFp":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, n: int, p: int) -> "MatrixFp":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> "MatrixFp":
        return MatrixFp(self.p, self.entries.T)

    def __matmul__(self, other):
        if isinstance(other, MatrixFp):
            if other.p != self.p:
                raise DimensionError("moduli differ")
            if self.cols != other.rows:
                raise DimensionError("inner dimensions differ")
            return MatrixFp(self.p, self.entries @ other.entries)
        v = np.asarray(other, dtype=np.int64)
        if v.shape[0] != self.cols:
            raise DimensionError("vector length does not match column count")
        return (self.entries @ v) % self.p

    def __eq__(self, other):
        return (
            isinstance(other, MatrixFp)
            and self.p == other.p
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __repr__(self):
        return f"MatrixFp(p={self.p}, shape={self.entries.shape})"

    def stack(self, other: "MatrixFp") -> "MatrixFp":
        return MatrixFp(self.p, np.vstack([self.entries, other.entries]))


def as_matrix(m, p: int | None = None) -> MatrixFp:
    if isinstance(m, MatrixFp):
        return m
    if p is None:
        raise DimensionError("prime required")
    return MatrixFp(check_prime(p), np.asarray(m, dtype=np.int64))


def rref(m: MatrixFp) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form and pivot columns (deterministic pivoting)."""
    a = m.entries.copy()
    piv = rref_inplace(a, m.p)
    return a, piv


def rank(m: MatrixFp) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(len(rref(m)[1]))


def kernel_basis(m: MatrixFp) -> list[np.ndarray]:
    """Basis of ``{v : m v = 0}``; one vector per free column, in column order."""
    p = m.p
    a, piv = rref(m)
    piv = [int(c) for c in piv]
    pivset = set(piv)
    free = [c for c in range(m.cols) if c not in pivset]
    basis = []
    for f in free:
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(piv):
            v[c] = (-a[r, f]) % p
        basis.append(v)
    return basis


def kernel_matrix(m: MatrixFp) -> MatrixFp:
    return MatrixFp.from_rows(kernel_basis(m), m.p, cols=m.cols)


def row_space_basis(m: MatrixFp) -> MatrixFp:
    a, piv = rref(m)
    return MatrixFp(m.p, a[: len(piv)])


def image_basis(m: MatrixFp) -> list[np.ndarray]:
    """Basis of the column space: the pivot columns of ``m`` itself."""
    _, piv = rref(m)
    return [m.entries[:, int(c)].copy() for c in piv]


def solve_in_span(m: MatrixFp, target) -> np.ndarray | None:
    """Coefficients ``x`` with ``mᵀ x = target`` (``target`` in the row space).

    Returns ``None`` when ``target`` lies outside the row space of ``m``.
    """
    p = m.p
    t = np.asarray(target, dtype=np.int64) % p
    if t.shape != (m.cols,):
        raise DimensionError(f"target has length {t.shape}, expected ({m.cols},)")
    if m.rows == 0:
        return np.zeros(0, dtype=np.int64) if not t.any() else None
    aug = np.hstack([m.entries, np.eye(m.rows, dtype=np.int64)])
    piv = rref_inplace(aug, p, limit=m.cols)
    red, transform = aug[:, : m.cols], aug[:, m.cols:]
    coeff = np.zeros(m.rows, dtype=np.int64)
    for r, c in enumerate(piv):
        coeff[r] = t[c]
    if not np.array_equal((coeff @ red) % p, t):
        return None
    return (coeff @ transform) % p


def in_row_space(m: MatrixFp, v) -> bool:
    return solve_in_span(m, v) is not None


def quotient_dim(sub: MatrixFp, whole: MatrixFp) -> int:
    """``dim(span(whole) + span(sub)) - dim span(sub)`` for row spaces."""
    return rank(sub.stack(whole)) - rank(sub)
