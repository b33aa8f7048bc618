"""Zero-pattern types, scale types and the power-of-two prescaling."""

from __future__ import annotations

import math
from typing import NamedTuple

from .fpcore import BINARY64, Format, assemble, split
from .matrix import Matrix2

__all__ = [
    "INT_MIN",
    "TypeInfo",
    "matrix_type",
    "scale_type",
    "matrix_exponent",
    "classify",
    "prescale",
    "SIMPLE_TYPES",
    "MONO_COL_TYPES",
    "MONO_ROW_TYPES",
    "TRI_TYPES",
]

INT_MIN = -(1 << 63)

# equivalence classes of the 16 zero patterns
SIMPLE_TYPES = frozenset({0, 1, 2, 4, 6, 8, 9})
MONO_COL_TYPES = frozenset({3, 12})  # one nonzero column
MONO_ROW_TYPES = frozenset({5, 10})  # one nonzero row
TRI_TYPES = frozenset({7, 11, 13, 14})

_SCALE_TYPE = {t: 0 for t in SIMPLE_TYPES}
_SCALE_TYPE.update({t: 1 for t in MONO_COL_TYPES | MONO_ROW_TYPES | TRI_TYPES})
_SCALE_TYPE[15] = 2


class TypeInfo(NamedTuple):
    t: int
    s_type: int
    s: int
    e_G: int


def matrix_type(G: Matrix2) -> int:
    """Bitmask of the nonzero elements in column-major order.

    Bit 0 is g11, bit 1 g21, bit 2 g12 and bit 3 g22, so that e.g. an upper
    triangular matrix is type 13 and a full one type 15.
    """
    return (G.g11 != 0.0) | (G.g21 != 0.0) << 1 | (G.g12 != 0.0) << 2 | (G.g22 != 0.0) << 3


def scale_type(t: int) -> int:
    return _SCALE_TYPE[t]


def matrix_exponent(G: Matrix2) -> int:
    """max floor(lg|g_ij|) over the nonzero elements, INT_MIN for a zero matrix."""
    e = INT_MIN
    for g in G:
        if g != 0.0:
            e = max(e, split(g)[0])
    return e


def classify(G: Matrix2, fmt: Format = BINARY64) -> TypeInfo:
    for g in G:
        if not math.isfinite(g):
            raise ValueError(f"matrix elements must be finite, got {G!r}")
    t = matrix_type(G)
    st = _SCALE_TYPE[t]
    eG = matrix_exponent(G)
    s = 0 if eG == INT_MIN else fmt.emax - eG - st
    return TypeInfo(t, st, s, eG)


def prescale(G: Matrix2, info: TypeInfo, fmt: Format = BINARY64) -> tuple[Matrix2, int, bool]:
    """Scale G by 2**s.

    Returns the scaled matrix, s, and whether any element was rounded by the
    scaling (only possible for s < 0, by underflow).
    """
    s = info.s
    if s == 0:
        return G, 0, False
    Gp = Matrix2(*(assemble(s + e, f, fmt) for e, f in map(split, G)))
    inexact = False
    if s < 0:
        inexact = any(
            g != 0.0 and assemble(-s + e, f, fmt) != g
            for g, (e, f) in zip(G, map(split, Gp))
        )
    return Gp, s, inexact
