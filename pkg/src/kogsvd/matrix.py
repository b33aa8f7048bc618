"""2x2 matrices of working-precision scalars and signed permutations."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = ["Matrix2", "SignPerm", "IDENTITY", "SWAP", "rotation", "sp_left", "sp_right", "sp_matmul", "matmul"]


class Matrix2(NamedTuple):
    """Row-major 2x2 matrix [[g11, g12], [g21, g22]]."""

    g11: float
    g12: float
    g21: float
    g22: float

    @classmethod
    def from_rows(cls, rows) -> "Matrix2":
        (a, b), (c, d) = rows
        return cls(float(a), float(b), float(c), float(d))

    @property
    def T(self) -> "Matrix2":
        return Matrix2(self.g11, self.g21, self.g12, self.g22)

    def rows(self) -> list[list[float]]:
        return [[self.g11, self.g12], [self.g21, self.g22]]

    def to_array(self) -> np.ndarray:
        return np.array(self.rows(), dtype=np.float64)

    def __repr__(self):
        return f"Matrix2([[{self.g11!r}, {self.g12!r}], [{self.g21!r}, {self.g22!r}]])"


def rotation(c: float, s: float) -> Matrix2:
    """[[c, -s], [s, c]]"""
    return Matrix2(c, -s, s, c)


def matmul(A: Matrix2, B: Matrix2, rnd=None) -> Matrix2:
    """Plain product; exact when one factor is a signed permutation."""
    a11, a12, a21, a22 = A
    b11, b12, b21, b22 = B
    C = (a11 * b11 + a12 * b21, a11 * b12 + a12 * b22, a21 * b11 + a22 * b21, a21 * b12 + a22 * b22)
    if rnd is not None:
        C = map(rnd, C)
    return Matrix2(*C)


class SignPerm(NamedTuple):
    """A 2x2 matrix with one +-1 per row and column.

    ``swap=False`` is diag(s1, s2); ``swap=True`` is [[0, s1], [s2, 0]].
    """

    swap: bool = False
    s1: float = 1.0
    s2: float = 1.0

    @property
    def T(self) -> "SignPerm":
        if self.swap:
            return SignPerm(True, self.s2, self.s1)
        return self

    def to_matrix(self) -> Matrix2:
        if self.swap:
            return Matrix2(0.0, self.s1, self.s2, 0.0)
        return Matrix2(self.s1, 0.0, 0.0, self.s2)

    @classmethod
    def diag(cls, s1: float = 1.0, s2: float = 1.0) -> "SignPerm":
        return cls(False, s1, s2)


IDENTITY = SignPerm()
SWAP = SignPerm(True)


def sp_left(P: SignPerm, M: Matrix2) -> Matrix2:
    """P @ M, exact."""
    a, b, c, d = M
    if P.swap:
        a, b, c, d = c, d, a, b
    s1, s2 = P.s1, P.s2
    return Matrix2(s1 * a, s1 * b, s2 * c, s2 * d)


def sp_right(M: Matrix2, P: SignPerm) -> Matrix2:
    """M @ P, exact."""
    a, b, c, d = M
    s1, s2 = P.s1, P.s2
    if P.swap:
        return Matrix2(s2 * b, s1 * a, s2 * d, s1 * c)
    return Matrix2(s1 * a, s2 * b, s1 * c, s2 * d)


def sp_matmul(P: SignPerm, Q: SignPerm) -> SignPerm:
    M = sp_right(P.to_matrix(), Q)
    if M.g11 == 0.0:
        return SignPerm(True, M.g12, M.g21)
    return SignPerm(False, M.g11, M.g22)
