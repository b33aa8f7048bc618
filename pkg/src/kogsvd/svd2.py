"""SVD of a real 2x2 matrix by one Kogbetliantz-style step.

The driver classifies G by its zero pattern, scales it by a power of two so
that no intermediate result overflows, reduces it to an upper triangular
matrix with nonnegative elements (when needed), and diagonalizes that with
two plane rotations whose tangents never exceed one.  Singular values are
returned as exponent-mantissa pairs so that they cannot over- or underflow
when the scaling is undone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from . import epair as ep
from .classify import (
    MONO_COL_TYPES,
    MONO_ROW_TYPES,
    SIMPLE_TYPES,
    TRI_TYPES,
    classify,
    matrix_type,
    prescale,
)
from .epair import EPair
from .fpcore import (
    BINARY64,
    Format,
    assemble,
    fdiv,
    fma,
    get_format,
    hypot_cr,
    hypot_naive,
    round_quotient,
    split,
    tan_from_double_angle,
    to_dyadic,
)
from .matrix import IDENTITY, SWAP, Matrix2, SignPerm, matmul, rotation, sp_left, sp_matmul, sp_right

__all__ = [
    "Options",
    "Trace",
    "Rot",
    "Svd2Result",
    "TriSvd",
    "URV",
    "svd2",
    "svd_simple",
    "svd_mono",
    "triangularize13",
    "urv15",
    "tri_svd",
    "tan2phi",
    "compose_left",
]


@dataclass(frozen=True)
class Options:
    """Knobs of the algorithm.

    ``cr_hypot=False`` assumes hypot is not correctly rounded and switches the
    double-angle tangent to the ratio formula.  ``exact_minus`` evaluates
    ``h - r22`` with the underflow-avoiding pair difference.  ``kahan_det``
    replaces the wide-precision channel for the cancelling element of the
    triangularized matrix with an fma-based 2x2 determinant.
    """

    fmt: Format = BINARY64
    cr_hypot: bool = True
    exact_minus: bool = False
    kahan_det: bool = False

    @property
    def hypot_fn(self):
        return hypot_cr if self.cr_hypot else hypot_naive

    def hypot(self, a: float, b: float) -> float:
        return self.hypot_fn(a, b, self.fmt)


class Rot(NamedTuple):
    tan: float
    sec: float
    cos: float
    sin: float


class Trace(NamedTuple):
    """Which branches a call went through (for coverage and debugging)."""

    t: int
    t_prime: int
    path: str  # simple | mono | tri13 | urv15
    s: int = 0
    underflow: bool = False  # the prescaling rounded some element
    urv: str | None = None  # exact_tan | wide_r12 | wide_r22 | deg_r12 | deg_r22
    r_swap: bool = False
    alg1: str | None = None  # a | b | c | d | e | e_inf
    alg2: str | None = None  # finite | inf
    p_sigma: bool = False
    tans: tuple = ()  # (name, value) of every tangent computed


@dataclass
class Svd2Result:
    """G = U diag(sigma1, sigma2) V^T with sigma1 >= sigma2 >= 0."""

    U: Matrix2
    V: Matrix2
    sigma1: EPair
    sigma2: EPair
    s: int
    fmt: Format = field(default=BINARY64, repr=False)
    trace: Trace | None = field(default=None, repr=False)

    def sigma(self) -> tuple[float, float]:
        """Singular values in working precision (may over/underflow)."""
        return ep.to_scalar(self.sigma1, self.fmt), ep.to_scalar(self.sigma2, self.fmt)

    def sigma_scaled(self) -> tuple[EPair, EPair]:
        """Singular values of the prescaled matrix 2**s G."""
        return ep.scale2(self.s, self.sigma1), ep.scale2(self.s, self.sigma2)


def _sgn(x: float) -> float:
    return -1.0 if x < 0.0 else 1.0


def _rot_from_tan(t: float, o: Options) -> Rot:
    r = o.fmt.round
    sec = o.hypot(t, 1.0)
    return Rot(t, sec, r(1.0 / sec), r(t / sec))


def _options(fmt, opts: Options | None, **kw) -> Options:
    if opts is None:
        opts = Options(fmt=get_format(fmt) if fmt is not None else BINARY64, **kw)
    return opts


# ---------------------------------------------------------------------------
# diagonal and single-row/column patterns
# ---------------------------------------------------------------------------


def _simple(G: Matrix2) -> tuple[SignPerm, SignPerm, float, float]:
    PV = IDENTITY
    D = G
    if G.g12 != 0.0 or G.g21 != 0.0:
        # antidiagonal pattern
        PV = SWAP
        D = sp_right(G, SWAP)
    d1, d2 = D.g11, D.g22
    PU = IDENTITY
    if abs(d1) < abs(d2):
        PU = SWAP
        PV = sp_matmul(PV, SWAP)
        d1, d2 = d2, d1
    U = sp_matmul(PU, SignPerm.diag(_sgn(d1), _sgn(d2)))
    return U, PV, abs(d1), abs(d2)


def svd_simple(G: Matrix2, fmt: Format | str = BINARY64) -> Svd2Result:
    """SVD of a matrix with at most one nonzero per row and column (exact)."""
    fmt = get_format(fmt)
    t = matrix_type(G)
    if t not in SIMPLE_TYPES:
        raise ValueError(f"type {t} is not diagonal-like")
    U, V, a, b = _simple(G)
    tr = Trace(t, t, "simple")
    return Svd2Result(U.to_matrix(), V.to_matrix(), ep.from_scalar(a), ep.from_scalar(b), 0, fmt, tr)


def _mono(G: Matrix2, o: Options) -> tuple[Matrix2, Matrix2, float, Rot]:
    t = matrix_type(G)
    r = o.fmt.round
    if t in MONO_COL_TYPES:
        PV = SWAP if t == 12 else IDENTITY
        Gc = sp_right(G, PV)
        x0, y0 = Gc.g11, Gc.g21
    elif t in MONO_ROW_TYPES:
        PU = SWAP if t == 10 else IDENTITY
        Gr = sp_left(PU.T, G)
        x0, y0 = Gr.g11, Gr.g12
    else:
        raise ValueError(f"type {t} does not have exactly one nonzero row or column")
    S = SignPerm.diag(_sgn(x0), _sgn(y0))
    x, y = abs(x0), abs(y0)
    P = IDENTITY
    if x < y:
        P = SWAP
        x, y = y, x
    rot = _rot_from_tan(r(y / x), o)
    sigma1 = o.hypot(x, y)
    W = sp_left(sp_matmul(S, P), rotation(rot.cos, rot.sin))
    if t in MONO_COL_TYPES:
        return W, PV.to_matrix(), sigma1, rot
    return PU.to_matrix(), W, sigma1, rot


def svd_mono(G: Matrix2, fmt: Format | str = BINARY64, *, opts: Options | None = None) -> Svd2Result:
    """SVD of a matrix whose nonzeros lie in a single row or column."""
    o = _options(fmt, opts)
    t = matrix_type(G)
    U, V, s1, rot = _mono(G, o)
    tr = Trace(t, t, "mono", tans=(("theta", rot.tan),))
    return Svd2Result(U, V, ep.from_scalar(s1), ep.ZERO, 0, o.fmt, tr)


# ---------------------------------------------------------------------------
# reduction to upper triangular form
# ---------------------------------------------------------------------------

_TRI_PERM = {
    13: (IDENTITY, IDENTITY),
    11: (SWAP, SWAP),
    7: (IDENTITY, SWAP),
    14: (SWAP, IDENTITY),
}


def triangularize13(G: Matrix2) -> tuple[Matrix2, SignPerm, SignPerm]:
    """Exact R = U+^T G V+ with R upper triangular and r11, r12, r22 > 0.

    G must have exactly three nonzeros.
    """
    t = matrix_type(G)
    if t not in TRI_TYPES:
        raise ValueError(f"type {t} does not have three nonzeros")
    PU, PV = _TRI_PERM[t]
    R = sp_right(sp_left(PU.T, G), PV)
    S11 = SignPerm.diag(_sgn(R.g11), 1.0)
    R = sp_left(S11, R)
    S12 = SignPerm.diag(1.0, _sgn(R.g12))
    R = sp_right(R, S12)
    S22 = SignPerm.diag(1.0, _sgn(R.g22))
    R = sp_left(S22, R)
    Uplus = sp_matmul(sp_matmul(PU, S11), S22)
    Vplus = sp_matmul(PV, S12)
    return R, Uplus, Vplus


class URV(NamedTuple):
    """Result of the URV factorization of a full matrix.

    ``G == S1 PU rot(theta) Rpp (PV S12)^T`` where ``Rpp`` is the computed
    triangular factor before its signs are removed; ``R = S22 Rpp S12`` is
    returned when neither r12 nor r22 vanished.
    """

    R: Matrix2 | None
    S1: SignPerm
    PU: SignPerm
    rot: Rot
    S22: SignPerm
    Vplus: SignPerm
    G3: Matrix2  # the pivoted matrix with g11 >= g21 > 0
    Rpp: Matrix2
    kind: str


def _is_exact_quotient(b: float, a: float, q: float) -> bool:
    """Whether q == b / a holds exactly."""
    mq, kq = to_dyadic(q)
    ma, ka = to_dyadic(a)
    mb, kb = to_dyadic(b)
    m, k = mq * ma, kq + ka
    if k >= kb:
        return (m << (k - kb)) == mb
    return m == (mb << (kb - k))


def _wide_quotient(x: float, a: float, y: float, b: float, den: float, o: Options) -> float:
    """fl((x*a + y*b) / den) through a channel wider than the working format."""
    fmt = o.fmt
    if o.kahan_det:
        # x*a - (-y)*b with the fma-based determinant, in working precision,
        # on operands scaled to about one so that the products cannot overflow
        r = fmt.round
        ex = split(max(abs(x), abs(y)))[0]
        ea = split(den)[0]
        x, y = assemble(-ex, x, fmt), assemble(-ex, y, fmt)
        a, b, den = assemble(-ea, a, fmt), assemble(-ea, b, fmt), assemble(-ea, den, fmt)
        w = r(-y * b)
        e = fma(y, b, w, fmt)
        f = fma(x, a, -w, fmt)
        return assemble(ex, r(r(f + e) / den), fmt)
    if fmt.p * 2 + 2 <= 53:
        # binary64 products are exact; one rounding for the sum, one for the quotient
        return fmt.round((x * a + y * b) / den)
    mx, kx = to_dyadic(x)
    ma, ka = to_dyadic(a)
    my, ky = to_dyadic(y)
    mb, kb = to_dyadic(b)
    m1, k1 = mx * ma, kx + ka
    m2, k2 = my * mb, ky + kb
    if k1 <= k2:
        m, k = m1 + (m2 << (k2 - k1)), k1
    else:
        m, k = (m1 << (k1 - k2)) + m2, k2
    md, kd = to_dyadic(den)
    if md < 0:
        m, md = -m, -md
    return round_quotient(m, md, k - kd, fmt)


def _urv(G: Matrix2, o: Options) -> URV:
    r = o.fmt.round
    w1 = o.hypot(G.g11, G.g21)
    w2 = o.hypot(G.g12, G.g22)
    PV = IDENTITY
    if w1 < w2:
        PV = SWAP
        w1 = w2
    Gt = sp_right(G, PV)
    S1 = SignPerm.diag(_sgn(Gt.g11), _sgn(Gt.g21))
    G2 = sp_left(S1, Gt)
    PU = IDENTITY
    if G2.g11 < G2.g21:
        PU = SWAP
    G3 = sp_left(PU.T, G2)
    a, c, b, d = G3  # first column (a, b), second column (c, d)
    rot = _rot_from_tan(r(b / a), o)
    t, sec = rot.tan, rot.sec
    if _is_exact_quotient(b, a, t):
        kind = "exact_tan"
        r12 = r(fma(d, t, c, o.fmt) / sec)
        r22 = r(fma(-c, t, d, o.fmt) / sec)
    elif (c < 0.0) == (d < 0.0):
        kind = "wide_r22"
        r12 = r(fma(d, t, c, o.fmt) / sec)
        r22 = r(_wide_quotient(d, a, -c, b, a, o) / sec)
    else:
        kind = "wide_r12"
        r22 = r(fma(-c, t, d, o.fmt) / sec)
        r12 = r(_wide_quotient(c, a, d, b, a, o) / sec)
    Rpp = Matrix2(w1, r12, 0.0, r22)
    if r12 == 0.0:
        return URV(None, S1, PU, rot, IDENTITY, PV, G3, Rpp, "deg_r12")
    if r22 == 0.0:
        return URV(None, S1, PU, rot, IDENTITY, PV, G3, Rpp, "deg_r22")
    S12 = SignPerm.diag(1.0, _sgn(r12))
    Rp = sp_right(Rpp, S12)
    S22 = SignPerm.diag(1.0, _sgn(Rp.g22))
    R = sp_left(S22, Rp)
    return URV(R, S1, PU, rot, S22, sp_matmul(PV, S12), G3, Rpp, kind)


def urv15(G: Matrix2, fmt: Format | str = BINARY64, *, opts: Options | None = None) -> URV:
    """Triangularize a full (prescaled) matrix by column pivoting and one rotation."""
    o = _options(fmt, opts)
    if matrix_type(G) != 15:
        raise ValueError("urv15 needs a matrix without zeros")
    return _urv(G, o)


# ---------------------------------------------------------------------------
# the triangular SVD
# ---------------------------------------------------------------------------


def tan2phi(r11: float, r12: float, r22: float, t13: bool = False, *, opts: Options | None = None,
            fmt: Format | str = BINARY64) -> tuple[float, str]:
    """tan(2 phi) of the left rotation for R = [[r11, r12], [0, r22]], r11 >= r22.

    Returns the value and a tag naming the formula used.
    """
    o = _options(fmt, opts)
    fmt = o.fmt
    r = fmt.round
    if r11 == r22:
        return r(r(2.0 * r22) / r12), "a"
    if r12 == r22:
        R12 = ep.from_scalar(r12)
        num = ep.mul(ep.scale2(1, R12), R12, fmt)
        R11 = ep.from_scalar(r11)
        return ep.to_scalar(ep.div(num, ep.mul(R11, R11, fmt), fmt), fmt), "b"
    if t13 and r(r11 / r12) < fmt.eps:
        return r(r(2.0 * r22) / r12), "c"
    if not o.cr_hypot:
        if r11 > r12:
            x = r(r12 / r11)
            y = r(r22 / r11)
            num = r(r(2.0 * x) * y)
        else:
            x = r(r11 / r12)
            y = r(r22 / r12)
            num = r(2.0 * y)
        den = max(fma(r(x - y), r(x + y), 1.0, fmt), 0.0)
        return fdiv(num, den, fmt), "d"
    h = hypot_cr(r11, r12, fmt)
    if h == r22:
        return math.inf, "e_inf"
    S = ep.oplus(h, r22, fmt)
    if o.exact_minus:
        D = ep.ominus(h, r22, fmt)
    else:
        D = ep.from_scalar(r(h - r22))
    num = ep.mul(ep.scale2(1, ep.from_scalar(r12)), ep.from_scalar(r22), fmt)
    return ep.to_scalar(ep.div(num, ep.mul(D, S, fmt), fmt), fmt), "e"


class TriSvd(NamedTuple):
    """U_phi^T R V_psi = diag(sigma1, sigma2) for R with r11 >= r22, then
    ordered by the optional swap ``p_sigma``."""

    phi: Rot
    psi: Rot
    sigma1: EPair
    sigma2: EPair
    p_sigma: bool
    alg1: str
    alg2: str


def _tri_svd(r11: float, r12: float, r22: float, t13: bool, o: Options) -> TriSvd:
    fmt = o.fmt
    r = fmt.round
    t2, b1 = tan2phi(r11, r12, r22, t13, opts=o)
    tphi = tan_from_double_angle(t2, fmt, o.hypot_fn)
    phi = _rot_from_tan(tphi, o)
    tt = fma(r22, tphi, r12, fmt)
    tpsi = fdiv(tt, r11, fmt)
    R11 = ep.from_scalar(r11)
    R22 = ep.from_scalar(r22)
    secphi = ep.from_scalar(phi.sec)
    if tpsi == math.inf:
        T = ep.from_scalar(tt)
        cpsi = ep.div(R11, T, fmt)
        psi = Rot(math.inf, math.inf, ep.to_scalar(cpsi, fmt), 1.0)
        s1 = ep.div(T, secphi, fmt)
        s2 = ep.mul(R22, ep.mul(secphi, cpsi, fmt), fmt)
        b2 = "inf"
    else:
        psi = _rot_from_tan(tpsi, o)
        sp = ep.div(secphi, ep.from_scalar(psi.sec), fmt)
        s1 = ep.div(R11, sp, fmt)
        s2 = ep.mul(R22, sp, fmt)
        b2 = "finite"
    swap = ep.less(s1, s2)
    if swap:
        s1, s2 = s2, s1
    return TriSvd(phi, psi, s1, s2, swap, b1, b2)


def tri_svd(R: Matrix2, t13: bool = False, fmt: Format | str = BINARY64, *,
            opts: Options | None = None) -> TriSvd:
    """Rotations diagonalizing an upper triangular R with positive r11, r12, r22 and r11 >= r22."""
    o = _options(fmt, opts)
    if not (R.g21 == 0.0 and R.g11 >= R.g22 > 0.0 and R.g12 > 0.0):
        raise ValueError(f"expected positive upper triangular R with r11 >= r22, got {R!r}")
    return _tri_svd(R.g11, R.g12, R.g22, t13, o)


def compose_left(tan_phi: float, tan_theta: float, minus: bool = False, *, reciprocal: bool = False,
                 fmt: Format | str = BINARY64, opts: Options | None = None) -> Rot:
    """Rotation by phi + theta (or phi - theta) from the two tangents.

    With ``reciprocal=True`` the first argument is cot(phi).  The returned
    cosine may be negative or zero when the sum leaves [-pi/2, pi/2].
    """
    o = _options(fmt, opts)
    r = o.fmt.round
    if reciprocal:
        n, d = (0.0, 1.0) if tan_phi == math.inf else (1.0, tan_phi)
    else:
        n, d = tan_phi, 1.0
    if minus:
        num = fma(-d, tan_theta, n, o.fmt)
        den = fma(n, tan_theta, d, o.fmt)
    else:
        num = fma(d, tan_theta, n, o.fmt)
        den = fma(-n, tan_theta, d, o.fmt)
    if abs(num) <= abs(den):
        t = r(num / den)
        sec = o.hypot(t, 1.0)
        g = _sgn(den)
        return Rot(t, sec, g * r(1.0 / sec), g * r(t / sec))
    cot = r(den / num)
    csc = o.hypot(cot, 1.0)
    g = _sgn(num)
    return Rot(fdiv(num, den, o.fmt), fdiv(csc, abs(cot), o.fmt), g * r(cot / csc), g * r(1.0 / csc))


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

_S2 = SignPerm.diag(1.0, -1.0)


def _tri_rotations(ts: TriSvd, r_swap: bool) -> tuple[Matrix2, Matrix2, SignPerm]:
    """Left/right rotations of R (before the sigma ordering) and the trailing S2."""
    if r_swap:
        return rotation(ts.psi.sin, ts.psi.cos), rotation(ts.phi.sin, ts.phi.cos), _S2
    return rotation(ts.phi.cos, ts.phi.sin), rotation(ts.psi.cos, ts.psi.sin), IDENTITY


def _triangular(R: Matrix2, t13: bool, o: Options) -> tuple[TriSvd, bool]:
    r11, r12, r22 = R.g11, R.g12, R.g22
    r_swap = r11 < r22
    if r_swap:
        r11, r22 = r22, r11
    return _tri_svd(r11, r12, r22, t13, o), r_swap


def svd2(G, fmt: Format | str = BINARY64, *, cr_hypot: bool = True, exact_minus: bool = False,
         kahan_det: bool = False, opts: Options | None = None) -> Svd2Result:
    """SVD of a real 2x2 matrix with finite elements.

    ``G`` may be a :class:`Matrix2` or anything ``[[g11, g12], [g21, g22]]``-shaped.
    """
    o = opts if opts is not None else Options(get_format(fmt), cr_hypot, exact_minus, kahan_det)
    fmt = o.fmt
    if not isinstance(G, Matrix2):
        G = Matrix2.from_rows(G)
    info = classify(G, fmt)
    if info.t in SIMPLE_TYPES:
        # exact without scaling
        U, V, a, b = _simple(G)
        tr = Trace(info.t, info.t, "simple")
        return Svd2Result(U.to_matrix(), V.to_matrix(), ep.from_scalar(a), ep.from_scalar(b), 0, fmt, tr)
    Gp, s, underflow = prescale(G, info, fmt)
    t1 = matrix_type(Gp)
    tr = dict(t=info.t, t_prime=t1, s=s, underflow=underflow)

    def done(U, V, s1: EPair, s2: EPair, **kw) -> Svd2Result:
        trace = Trace(**tr, **kw)
        return Svd2Result(U, V, ep.scale2(-s, s1), ep.scale2(-s, s2), s, fmt, trace)

    if t1 in SIMPLE_TYPES:
        U, V, a, b = _simple(Gp)
        return done(U.to_matrix(), V.to_matrix(), ep.from_scalar(a), ep.from_scalar(b), path="simple")
    if t1 in MONO_COL_TYPES or t1 in MONO_ROW_TYPES:
        U, V, a, rot = _mono(Gp, o)
        return done(U, V, ep.from_scalar(a), ep.ZERO, path="mono", tans=(("theta", rot.tan),))
    if t1 in TRI_TYPES:
        R, Uplus, Vplus = triangularize13(Gp)
        ts, r_swap = _triangular(R, t1 == 13, o)
        L, Rr, S2 = _tri_rotations(ts, r_swap)
        P = SWAP if ts.p_sigma else IDENTITY
        tail = sp_matmul(S2, P)
        U = sp_left(Uplus, sp_right(L, tail))
        V = sp_left(Vplus, sp_right(Rr, tail))
        return done(U, V, ts.sigma1, ts.sigma2, path="tri13", r_swap=r_swap, alg1=ts.alg1,
                    alg2=ts.alg2, p_sigma=ts.p_sigma, tans=(("phi", ts.phi.tan), ("psi", ts.psi.tan)))

    # full matrix
    u = _urv(Gp, o)
    L0 = sp_matmul(u.S1, u.PU)
    Rth = rotation(u.rot.cos, u.rot.sin)
    tans = (("theta", u.rot.tan),)
    if u.R is None:
        if u.kind == "deg_r12":
            Us, Vs, a, b = _simple(u.Rpp)
            Us, Vs = Us.to_matrix(), Vs.to_matrix()
            s1, s2 = ep.from_scalar(a), ep.from_scalar(b)
        else:
            Us, Vs, a, rot = _mono(u.Rpp, o)
            s1, s2 = ep.from_scalar(a), ep.ZERO
            tans += (("mono", rot.tan),)
        U = sp_left(L0, matmul(Rth, Us))
        V = sp_left(u.Vplus, Vs)
        return done(U, V, s1, s2, path="urv15", urv=u.kind, tans=tans)
    ts, r_swap = _triangular(u.R, False, o)
    minus = u.S22.s2 < 0.0
    if r_swap:
        alpha = compose_left(ts.psi.tan, u.rot.tan, minus, reciprocal=True, opts=o)
    else:
        alpha = compose_left(ts.phi.tan, u.rot.tan, minus, opts=o)
    _, Rr, S2 = _tri_rotations(ts, r_swap)
    P = SWAP if ts.p_sigma else IDENTITY
    tail = sp_matmul(S2, P)
    U = sp_left(sp_matmul(L0, u.S22), sp_right(rotation(alpha.cos, alpha.sin), tail))
    V = sp_left(u.Vplus, sp_right(Rr, tail))
    tans += (("phi", ts.phi.tan), ("psi", ts.psi.tan))
    return done(U, V, ts.sigma1, ts.sigma2, path="urv15", urv=u.kind, r_swap=r_swap, alg1=ts.alg1,
                alg2=ts.alg2, p_sigma=ts.p_sigma, tans=tans)
