"""Reference singular values and the error measures.

Two independent references are provided:

* :func:`svd2_ext` runs the reduce-then-rotate method in mpmath at (by
  default) 256 bits with an unbounded exponent and returns full factors;
* :func:`singular_values_exact` evaluates the closed form
  ``sigma1 = (sqrt((a+d)^2 + (b-c)^2) + sqrt((a-d)^2 + (b+c)^2)) / 2``,
  ``sigma2 = |ad - bc| / sigma1`` in big-integer arithmetic (there is no
  cancellation in it), which is fast enough for whole batches.

The error measures are computed exactly from the working-precision data,
with a single rounding at the end.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import mpmath

from . import epair as ep
from .epair import EPair
from .fpcore import BINARY64, round_quotient, split, to_dyadic
from .matrix import Matrix2

__all__ = [
    "ExtSvd",
    "svd2_ext",
    "Dyadic",
    "singular_values_exact",
    "Factors",
    "Metrics",
    "ErrorStats",
    "metrics",
    "kappa_str",
]

SIGMA_BITS = 200


# ---------------------------------------------------------------------------
# mpmath reference
# ---------------------------------------------------------------------------


class ExtSvd(NamedTuple):
    sigma1: mpmath.mpf
    sigma2: mpmath.mpf
    U: tuple  # row-major 2x2 of mpf
    V: tuple
    ctx: object


def svd2_ext(G, prec: int = 256) -> ExtSvd:
    """SVD of G in extended precision: pivoted QR by one rotation, then two rotations."""
    if prec < 113:
        raise ValueError("the reference needs at least 113 bits")
    if not isinstance(G, Matrix2):
        G = Matrix2.from_rows(G)
    mp = mpmath.MPContext()
    mp.prec = prec
    a, b, c, d = (mp.mpf(x) for x in G)  # g11, g12, g21, g22
    one, zero = mp.mpf(1), mp.mpf(0)
    w1 = mp.hypot(a, c)
    w2 = mp.hypot(b, d)
    PV = ((one, zero), (zero, one))
    if w1 < w2:
        a, b, c, d = b, a, d, c
        w1, w2 = w2, w1
        PV = ((zero, one), (one, zero))
    if w1 == 0:
        I = ((one, zero), (zero, one))
        return ExtSvd(zero, zero, I, I, mp)
    # Q^T G = R with Q = [[ct, -st], [st, ct]]
    ct, st = a / w1, c / w1
    r11 = w1
    r12 = (a * b + c * d) / w1
    r22 = (a * d - b * c) / w1
    s12 = -one if r12 < 0 else one
    s22 = -one if r22 * s12 < 0 else one
    r12, r22 = abs(r12), abs(r22)
    # rotations of R: phi on the left, psi on the right, both in [0, pi/2]
    phi = mp.atan2(2 * r12 * r22, (r11 - r22) * (r11 + r22) + r12 * r12) / 2
    cf, sf = mp.cos(phi), mp.sin(phi)
    psi = mp.atan2(r12 * cf + r22 * sf, r11 * cf)
    cp, sp = mp.cos(psi), mp.sin(psi)
    s1 = cf * r11 * cp + (cf * r12 + sf * r22) * sp
    s2 = r11 * r22 / s1 if s1 else zero
    # U = Q diag(1, s22) rot(phi), V = PV diag(1, s12) rot(psi)
    U = ((ct * cf - st * s22 * sf, -ct * sf - st * s22 * cf),
         (st * cf + ct * s22 * sf, -st * sf + ct * s22 * cf))
    Vr = ((cp, -sp), (s12 * sp, s12 * cp))
    V = tuple(tuple(PV[i][0] * Vr[0][j] + PV[i][1] * Vr[1][j] for j in range(2)) for i in range(2))
    if s1 < s2:
        s1, s2 = s2, s1
        U = tuple((r[1], r[0]) for r in U)
        V = tuple((r[1], r[0]) for r in V)
    return ExtSvd(s1, s2, U, V, mp)


# ---------------------------------------------------------------------------
# closed-form big-integer reference
# ---------------------------------------------------------------------------


class Dyadic(NamedTuple):
    """m * 2**k with a big-integer m."""

    m: int
    k: int

    def to_fraction(self):
        from fractions import Fraction

        return Fraction(self.m) * Fraction(2) ** self.k

    def to_mpf(self, mp=mpmath.mp):
        return mp.ldexp(mp.mpf(self.m), self.k)


def _align(terms: list[tuple[int, int]]) -> tuple[list[int], int]:
    """Bring dyadics m * 2**k to a common exponent."""
    k = min((kk for m, kk in terms if m), default=0)
    return [m << (kk - k) if m else 0 for m, kk in terms], k


def singular_values_exact(G: Matrix2, bits: int = SIGMA_BITS) -> tuple[Dyadic, Dyadic]:
    """Both singular values to a relative accuracy of about 2**-bits."""
    (a, b, c, d), k = _align([to_dyadic(x) for x in G])
    P = (a + d) ** 2 + (b - c) ** 2
    Q = (a - d) ** 2 + (b + c) ** 2
    if P == 0 and Q == 0:
        return Dyadic(0, 0), Dyadic(0, 0)
    top = max(P.bit_length(), Q.bit_length())
    j = max(0, bits + 2 - top // 2)
    sP = math.isqrt(P << 2 * j)
    sQ = math.isqrt(Q << 2 * j)
    S1 = sP + sQ  # sigma1 * 2**(j + 1 - k)
    k1 = k - j - 1
    det = abs(a * d - b * c)  # det(G) * 2**(-2k)
    if det == 0:
        return Dyadic(S1, k1), Dyadic(0, 0)
    # sigma2 = det * 2**(2k) / (S1 * 2**k1)
    sh = max(0, bits + 2 - (det.bit_length() - S1.bit_length()))
    S2 = (det << sh) // S1
    return Dyadic(S1, k1), Dyadic(S2, 2 * k - k1 - sh)


# ---------------------------------------------------------------------------
# error measures
# ---------------------------------------------------------------------------


class Factors(NamedTuple):
    """Working-precision factors G ~ U diag(sigma1, sigma2) V^T."""

    U: Matrix2
    V: Matrix2
    sigma1: EPair
    sigma2: EPair


class Metrics(NamedTuple):
    reG: float
    reSigma1: float
    reSigma2: float
    reU: float
    reV: float
    kappa2: EPair | None  # None stands for infinity (singular G)


def _dy(x) -> tuple[int, int]:
    if isinstance(x, EPair):
        m, k = to_dyadic(x.f)
        return m, k + x.e
    return to_dyadic(x)


def _ratio(n: int, d: int, k: int) -> float:
    """n/d * 2**k rounded to binary64 (d > 0)."""
    return round_quotient(n, d, k, BINARY64)


def _sqrt_ratio(n2: int, d2: int, k2: int) -> float:
    # sqrt(n2/d2 * 2**k2) for an even k2
    return math.sqrt(_ratio(n2, d2, k2)) if n2 else 0.0


def _orth(Q: Matrix2) -> float:
    """||Q^T Q - I||_F, exactly then rounded."""
    q11, q12, q21, q22 = (to_dyadic(x) for x in Q)

    def prod(x, y):
        return x[0] * y[0], x[1] + y[1]

    # entries of Q^T Q - I
    entries = [
        [prod(q11, q11), prod(q21, q21), (-1, 0)],
        [prod(q11, q12), prod(q21, q22)],
        [prod(q12, q12), prod(q22, q22), (-1, 0)],
    ]
    vals = []
    for e in entries:
        ms, k = _align(e)
        vals.append((sum(ms), k))
    (m0, k0), (m1, k1), (m2, k2) = vals
    # off-diagonal entry counts twice
    terms, k = _align([(m0 * m0, 2 * k0), (2 * m1 * m1, 2 * k1), (m2 * m2, 2 * k2)])
    total = sum(terms)
    if total == 0:
        return 0.0
    if k % 2:
        total <<= 1
        k -= 1
    return _sqrt_ratio(total, 1, k)


def _rel_sigma(computed: EPair, ref: Dyadic) -> float:
    m, k = _dy(computed)
    if ref.m == 0:
        return 0.0 if m == 0 else math.inf
    (a, b), _ = _align([(m, k), (ref.m, ref.k)])
    return _ratio(abs(a - b), b, 0)


def _kappa(s1: Dyadic, s2: Dyadic) -> EPair | None:
    if s2.m == 0:
        return None if s1.m else EPair(0, 0.0)
    sh = s1.m.bit_length() - s2.m.bit_length()
    f = round_quotient(s1.m, s2.m, -sh, BINARY64)
    e, f = split(f)
    return EPair(e + sh + s1.k - s2.k, f)


def _residual(G: Matrix2, F: Factors) -> float:
    U, V = F.U, F.V
    s = (_dy(F.sigma1), _dy(F.sigma2))
    u = [[to_dyadic(U.g11), to_dyadic(U.g12)], [to_dyadic(U.g21), to_dyadic(U.g22)]]
    v = [[to_dyadic(V.g11), to_dyadic(V.g12)], [to_dyadic(V.g21), to_dyadic(V.g22)]]
    g = [[to_dyadic(G.g11), to_dyadic(G.g12)], [to_dyadic(G.g21), to_dyadic(G.g22)]]
    res = []
    for i in range(2):
        for j in range(2):
            terms = [g[i][j]]
            for l in range(2):
                m = u[i][l][0] * s[l][0] * v[j][l][0]
                terms.append((-m, u[i][l][1] + s[l][1] + v[j][l][1]))
            ms, k = _align(terms)
            res.append((sum(ms), k))
    num, kn = _align([(m * m, 2 * k) for m, k in res])
    den, kd = _align([(m * m, 2 * k) for m, k in (to_dyadic(x) for x in G)])
    N, D = sum(num), sum(den)
    if D == 0:
        return 0.0 if N == 0 else math.inf
    if N == 0:
        return 0.0
    k = kn - kd
    if k % 2:
        N <<= 1
        k -= 1
    return _sqrt_ratio(N, D, k)


def metrics(G: Matrix2, F: Factors, ref: tuple[Dyadic, Dyadic] | None = None) -> Metrics:
    """Error measures of the factors F of G against reference singular values."""
    if ref is None:
        ref = singular_values_exact(G)
    return Metrics(
        _residual(G, F),
        _rel_sigma(F.sigma1, ref[0]),
        _rel_sigma(F.sigma2, ref[1]),
        _orth(F.U),
        _orth(F.V),
        _kappa(*ref),
    )


def _kappa_key(k: EPair | None):
    if k is None:
        return (1, 0, 0.0)
    if k.f == 0.0:
        return (-1, 0, 0.0)
    return (0, k.e, k.f)


def kappa_str(k: EPair | None) -> str:
    if k is None:
        return "inf"
    v = ep.to_scalar(k)
    if v != 0.0 and math.isfinite(v) and ep.from_scalar(v) == k:
        return repr(v)
    mp = mpmath.MPContext()
    mp.prec = 64
    return mpmath.nstr(mp.ldexp(mp.mpf(k.f), k.e), 17)


@dataclass
class ErrorStats:
    """Batch maxima of the error measures."""

    reG: float = 0.0
    reSigma1: float = 0.0
    reSigma2: float = 0.0
    reU: float = 0.0
    reV: float = 0.0
    maxKappa2: EPair | None = field(default_factory=lambda: EPair(0, 0.0))
    count: int = 0
    coverage: Counter = field(default_factory=Counter)  # branch tags of svd2 traces

    def add(self, m: Metrics) -> None:
        for name in ("reG", "reSigma1", "reSigma2", "reU", "reV"):
            v = getattr(m, name)
            if v != v or (v == math.inf and name in ("reG", "reU", "reV")):
                raise ValueError(f"{v} in {name}")
            if v > getattr(self, name):
                setattr(self, name, v)
        if _kappa_key(m.kappa2) > _kappa_key(self.maxKappa2):
            self.maxKappa2 = m.kappa2
        self.count += 1

    def merge(self, other: "ErrorStats") -> "ErrorStats":
        out = ErrorStats(
            max(self.reG, other.reG),
            max(self.reSigma1, other.reSigma1),
            max(self.reSigma2, other.reSigma2),
            max(self.reU, other.reU),
            max(self.reV, other.reV),
            max(self.maxKappa2, other.maxKappa2, key=_kappa_key),
            self.count + other.count,
            self.coverage + other.coverage,
        )
        return out

    def row(self) -> list[str]:
        return [repr(self.reG), repr(self.reSigma1), repr(self.reSigma2), repr(self.reU), repr(self.reV),
                kappa_str(self.maxKappa2)]
