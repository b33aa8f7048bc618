"""Exponent-mantissa pairs: scalars with a (practically) unbounded exponent.

A pair ``(e, f)`` stands for ``2**e * f`` where ``f`` is a working-precision
value with ``1 <= |f| < 2`` (or ``f == 0`` with ``e == 0``).  Mantissa
arithmetic is rounded in the working format; exponents are Python ints.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .fpcore import BINARY64, Format, assemble, split

__all__ = [
    "EPair",
    "ZERO",
    "ONE",
    "from_scalar",
    "oplus",
    "ominus",
    "mul",
    "div",
    "absolute",
    "neg",
    "scale2",
    "recip",
    "unary",
    "less",
    "to_scalar",
    "to_fraction",
]

_EXP_LIMIT = 1 << 63


class EPair(NamedTuple):
    e: int
    f: float

    def __repr__(self):
        return f"EPair({self.e}, {self.f!r})"


ZERO = EPair(0, 0.0)
ONE = EPair(0, 1.0)


def _pair(e: int, z: float) -> EPair:
    # z is a finite mantissa product/quotient; renormalize into [1, 2)
    if z == 0.0:
        return ZERO
    ez, fz = split(z)
    e += ez
    assert -_EXP_LIMIT < e < _EXP_LIMIT
    return EPair(e, fz)


def from_scalar(x: float) -> EPair:
    """Exact pair of a working-precision value (subnormals included)."""
    if x != x:
        raise ValueError("EPair cannot hold NaN")
    if x == 0.0:
        return ZERO
    e, f = split(x)
    return EPair(e, f)


def _check_positive(x: float, y: float):
    if not (0.0 < x < math.inf and 0.0 < y < math.inf):
        raise ValueError(f"operands must be positive and finite, got {x!r}, {y!r}")


def oplus(x: float, y: float, fmt: Format = BINARY64) -> EPair:
    """Overflow-avoiding sum of two positive finite values."""
    _check_positive(x, y)
    r = fmt.round
    z = r(x + y)
    if z <= fmt.nu:
        return from_scalar(z)
    z = r(r(0.5 * x) + r(0.5 * y))
    e, f = split(z)
    return EPair(e + 1, f)


def ominus(x: float, y: float, fmt: Format = BINARY64) -> EPair:
    """Underflow-avoiding difference of two positive finite values."""
    _check_positive(x, y)
    if x == y:
        return ZERO
    r = fmt.round
    z = r(x - y)
    if abs(z) >= fmt.mu:
        return from_scalar(z)
    c = fmt.emin + fmt.p - 1 - min(split(x)[0], split(y)[0])
    z = r(math.ldexp(x, c) - math.ldexp(y, c))
    e, f = split(z)
    return EPair(e - c, f)


def mul(x: EPair, y: EPair, fmt: Format = BINARY64) -> EPair:
    return _pair(x.e + y.e, fmt.round(x.f * y.f))


def div(x: EPair, y: EPair, fmt: Format = BINARY64) -> EPair:
    if y.f == 0.0:
        raise ZeroDivisionError("EPair division by zero")
    return _pair(x.e - y.e, fmt.round(x.f / y.f))


def absolute(x: EPair) -> EPair:
    return EPair(x.e, abs(x.f))


def neg(x: EPair) -> EPair:
    return EPair(x.e, -x.f)


def scale2(k: int, x: EPair) -> EPair:
    """2**k * x, exact."""
    if x.f == 0.0:
        return ZERO
    return EPair(x.e + k, x.f)


def recip(x: EPair, fmt: Format = BINARY64) -> EPair:
    if x.f == 0.0:
        raise ZeroDivisionError("EPair reciprocal of zero")
    return _pair(-x.e, fmt.round(1.0 / x.f))


def unary(kind: str, x: EPair, k: int = 0, fmt: Format = BINARY64) -> EPair:
    """Dispatch for the unary pair operations ``abs``, ``neg``, ``scale2``, ``recip``."""
    if kind == "abs":
        return absolute(x)
    if kind == "neg":
        return neg(x)
    if kind == "scale2":
        return scale2(k, x)
    if kind == "recip":
        return recip(x, fmt)
    raise ValueError(f"unknown unary operation {kind!r}")


def _sign(f: float) -> int:
    return (f > 0.0) - (f < 0.0)


def less(x: EPair, y: EPair) -> bool:
    """x < y by the sign / exponent / mantissa cascade.

    For negative operands a larger exponent means a smaller value, so the
    exponent comparison is reversed there.
    """
    sx = _sign(x.f)
    sy = _sign(y.f)
    if sx != sy:
        return sx < sy
    if sx == 0:
        return False
    if x.e != y.e:
        return (x.e < y.e) if sx > 0 else (x.e > y.e)
    return x.f < y.f


def to_scalar(x: EPair, fmt: Format = BINARY64) -> float:
    """Nearest working-precision value; may overflow to inf or underflow to 0."""
    return assemble(x.e, x.f, fmt)


def to_fraction(x: EPair) -> Fraction:
    v = Fraction(x.f)
    return v * 2**x.e if x.e >= 0 else v / 2**-x.e
