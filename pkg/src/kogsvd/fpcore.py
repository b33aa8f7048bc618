"""Scalar floating-point kernel.

Working precision is described by a :class:`Format` (binary32 or binary64).
Values of either format are carried as Python floats; binary32 results are
rounded back to binary32 after every operation.  For ``+ - * / sqrt`` on
binary32 operands, evaluating in binary64 and rounding once more to binary32
is innocuous (53 >= 2*24 + 2), so only ``fma`` and ``hypot`` need exact
integer evaluation.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from typing import Callable

__all__ = [
    "Format",
    "BINARY32",
    "BINARY64",
    "get_format",
    "round_dyadic",
    "to_dyadic",
    "round_quotient",
    "fma",
    "fdiv",
    "hypot_cr",
    "hypot_naive",
    "split",
    "assemble",
    "tan_from_double_angle",
    "sec_from_tan",
]

_F32 = struct.Struct("<f")


def _round32(x: float) -> float:
    try:
        return _F32.unpack(_F32.pack(x))[0]
    except OverflowError:
        return math.copysign(math.inf, x)


def _round64(x: float) -> float:
    return x


@dataclass(frozen=True)
class Format:
    """An IEEE-754 binary interchange format used as working precision."""

    name: str
    p: int  # significand bits, hidden bit included
    emin: int  # exponent of the smallest normal
    emax: int  # exponent of the largest finite value
    round: Callable[[float], float] = field(repr=False, compare=False)
    eps: float = field(init=False, repr=False, compare=False)
    mu: float = field(init=False, repr=False, compare=False)
    nu: float = field(init=False, repr=False, compare=False)
    mu_check: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "eps", math.ldexp(1.0, -self.p))
        object.__setattr__(self, "mu", math.ldexp(1.0, self.emin))
        nu = math.ldexp(2.0 - math.ldexp(1.0, 1 - self.p), self.emax)
        object.__setattr__(self, "nu", nu)
        # smallest positive subnormal
        object.__setattr__(self, "mu_check", math.ldexp(1.0, self.emin - self.p + 1))

    @property
    def e_mu(self) -> int:
        return self.emin

    @property
    def e_nu(self) -> int:
        return self.emax

    def __reduce__(self):
        return (get_format, (self.name,))


BINARY32 = Format("binary32", 24, -126, 127, _round32)
BINARY64 = Format("binary64", 53, -1022, 1023, _round64)

_FORMATS = {
    "binary32": BINARY32,
    "single": BINARY32,
    "binary64": BINARY64,
    "double": BINARY64,
}


def get_format(name: str | Format) -> Format:
    if isinstance(name, Format):
        return name
    try:
        return _FORMATS[name]
    except KeyError:
        raise ValueError(f"unknown precision {name!r}") from None


# ---------------------------------------------------------------------------
# exact dyadic helpers
# ---------------------------------------------------------------------------


def to_dyadic(x: float) -> tuple[int, int]:
    """Return (m, k) with x == m * 2**k exactly (x finite)."""
    if x == 0.0:
        return 0, 0
    f, e = math.frexp(x)
    return int(f * 9007199254740992.0), e - 53


def round_dyadic(m: int, k: int, fmt: Format = BINARY64) -> float:
    """Round ``m * 2**k`` to the nearest value of ``fmt`` (ties to even).

    Overflow gives a signed infinity, underflow rounds gradually.  A zero
    ``m`` gives +0.
    """
    if m == 0:
        return 0.0
    neg = m < 0
    if neg:
        m = -m
    e = m.bit_length() - 1 + k  # floor(lg value)
    q = max(e, fmt.emin) - fmt.p + 1  # exponent of the ulp
    shift = q - k
    if shift > 0:
        if shift > m.bit_length() + 1:
            m = 0
        else:
            rem = m & ((1 << shift) - 1)
            m >>= shift
            half = 1 << (shift - 1)
            if rem > half or (rem == half and m & 1):
                m += 1
        k = q
    if m.bit_length() - 1 + k > fmt.emax:
        r = math.inf
    else:
        r = math.ldexp(m, k) if m else 0.0
    return -r if neg else r


def round_quotient(n: int, d: int, k: int, fmt: Format = BINARY64) -> float:
    """Round ``(n / d) * 2**k`` to the nearest value of ``fmt`` (d > 0)."""
    if n == 0:
        return 0.0
    neg = n < 0
    if neg:
        n = -n
    # p + 3 quotient bits at least, then a sticky bit
    sh = max(0, fmt.p + 3 - (n.bit_length() - d.bit_length()))
    q, rem = divmod(n << sh, d)
    m = (q << 1) | (rem != 0)
    r = round_dyadic(m, k - sh - 1, fmt)
    return -r if neg else r


def fma(a: float, b: float, c: float, fmt: Format = BINARY64) -> float:
    """fl(a*b + c) with a single rounding."""
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
        return fmt.round(a * b + c)
    ma, ka = to_dyadic(a)
    mb, kb = to_dyadic(b)
    mc, kc = to_dyadic(c)
    mp, kp = ma * mb, ka + kb
    if mp == 0:
        if mc == 0:
            # IEEE sign rules for an exact zero sum
            return fmt.round(a * b + c)
        return c
    if mc == 0:
        m, k = mp, kp
    elif kp <= kc:
        m, k = mp + (mc << (kc - kp)), kp
    else:
        m, k = (mp << (kp - kc)) + mc, kc
    if m == 0:
        return 0.0
    return round_dyadic(m, k, fmt)


def fdiv(a: float, b: float, fmt: Format = BINARY64) -> float:
    """IEEE division (no ZeroDivisionError)."""
    if b == 0.0:
        if a != a or a == 0.0:
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return fmt.round(a / b)


# ---------------------------------------------------------------------------
# hypot
# ---------------------------------------------------------------------------


def hypot_cr(a: float, b: float, fmt: Format = BINARY64) -> float:
    """Correctly rounded sqrt(a*a + b*b)."""
    x = abs(a)
    y = abs(b)
    if x == math.inf or y == math.inf:
        return math.inf
    if x != x or y != y:
        return math.nan
    if x < y:
        x, y = y, x
    if y == 0.0:
        return x
    mx, kx = to_dyadic(x)
    my, ky = to_dyadic(y)
    if (mx.bit_length() + kx) - (my.bit_length() + ky) > fmt.p + 3:
        # y*y is below a quarter ulp of x*x; the result rounds to x
        return x
    k = min(kx, ky)
    n = (mx * mx << 2 * (kx - k)) + (my * my << 2 * (ky - k))
    # sqrt(n) * 2**k, with at least p + 2 bits before the sticky bit
    j = max(0, (fmt.p + 3) - (n.bit_length() >> 1))
    n <<= 2 * j
    r = math.isqrt(n)
    m = (r << 1) | (r * r != n)
    return round_dyadic(m, k - j - 1, fmt)


def hypot_naive(a: float, b: float, fmt: Format = BINARY64) -> float:
    """A scaled textbook hypot that is *not* correctly rounded.

    Used to exercise the code paths meant for platforms without a correctly
    rounded hypot.
    """
    r = fmt.round
    x = abs(a)
    y = abs(b)
    if x == math.inf or y == math.inf:
        return math.inf
    if x < y:
        x, y = y, x
    if y == 0.0:
        return x
    q = r(y / x)
    return r(x * r(math.sqrt(r(1.0 + r(q * q)))))


# ---------------------------------------------------------------------------
# exponent / mantissa
# ---------------------------------------------------------------------------


def split(x: float) -> tuple[int, float]:
    """(e, f) with 1 <= |f| < 2 and x == 2**e * f; (0, x) for zeros, infinities, NaN."""
    if x == 0.0 or not math.isfinite(x):
        return 0, x
    f, e = math.frexp(x)
    return e - 1, f * 2.0


def assemble(e: int, f: float, fmt: Format = BINARY64) -> float:
    """Nearest ``fmt`` value to 2**e * f (scalbn)."""
    if f == 0.0 or not math.isfinite(f):
        return f
    if fmt is BINARY64:
        if e > 2200:
            return math.copysign(math.inf, f)
        if e < -2200:
            return math.copysign(0.0, f)
        try:
            return math.ldexp(f, e)
        except OverflowError:
            return math.copysign(math.inf, f)
    # f has at most p bits, so the binary64 ldexp is exact over binary32 range
    e = max(min(e, 400), -400)
    return fmt.round(math.ldexp(f, e))


# ---------------------------------------------------------------------------
# rotation sub-kernels
# ---------------------------------------------------------------------------


def tan_from_double_angle(t2: float, fmt: Format = BINARY64, hypot=hypot_cr) -> float:
    """tan(phi) from tan(2 phi); ``+-inf`` maps to ``+-1``."""
    if math.isinf(t2):
        return math.copysign(1.0, t2)
    r = fmt.round
    return r(t2 / r(1.0 + hypot(t2, 1.0, fmt)))


def sec_from_tan(t: float, fmt: Format = BINARY64, hypot=hypot_cr) -> float:
    return hypot(t, 1.0, fmt)
