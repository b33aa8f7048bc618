"""Port of LAPACK's xLASV2, the SVD of an upper triangular [[f, g], [0, h]].

The arithmetic sequence follows the reference Fortran line by line; every
operation is rounded in the working format and no operations are fused.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .fpcore import BINARY64, Format, get_format
from .matrix import Matrix2

__all__ = ["Lasv2Out", "lasv2_ref", "lasv2_factors"]


class Lasv2Out(NamedTuple):
    ssmin: float
    ssmax: float
    csl: float
    snl: float
    csr: float
    snr: float


def _sign(a: float, b: float) -> float:
    # Fortran SIGN(A, B)
    return math.copysign(abs(a), b)


def lasv2_ref(f: float, g: float, h: float, fmt: Format | str = BINARY64) -> Lasv2Out:
    fmt = get_format(fmt)
    r = fmt.round
    sqrt = math.sqrt
    eps = fmt.eps  # xLAMCH('EPS')

    ft = f
    fa = abs(ft)
    ht = h
    ha = abs(h)
    # pmax points to the largest element in magnitude
    pmax = 1
    swap = ha > fa
    if swap:
        pmax = 3
        ft, ht = ht, ft
        fa, ha = ha, fa
    gt = g
    ga = abs(gt)
    if ga == 0.0:
        # diagonal
        ssmin = ha
        ssmax = fa
        clt, crt, slt, srt = 1.0, 1.0, 0.0, 0.0
    else:
        gasmal = True
        if ga > fa:
            pmax = 2
            if r(fa / ga) < eps:
                # very large ga
                gasmal = False
                ssmax = ga
                if ha > 1.0:
                    ssmin = r(fa / r(ga / ha))
                else:
                    ssmin = r(r(fa / ga) * ha)
                clt = 1.0
                slt = r(ht / gt)
                srt = 1.0
                crt = r(ft / gt)
        if gasmal:
            d = r(fa - ha)
            if d == fa:
                l = 1.0
            else:
                l = r(d / fa)
            m = r(gt / ft)
            t = r(2.0 - l)
            mm = r(m * m)
            tt = r(t * t)
            s = r(sqrt(r(tt + mm)))
            if l == 0.0:
                rr = abs(m)
            else:
                rr = r(sqrt(r(r(l * l) + mm)))
            a = r(0.5 * r(s + rr))
            ssmin = r(ha / a)
            ssmax = r(fa * a)
            if mm == 0.0:
                # m is tiny
                if l == 0.0:
                    t = r(_sign(2.0, ft) * _sign(1.0, gt))
                else:
                    t = r(r(gt / _sign(d, ft)) + r(m / t))
            else:
                t = r(r(r(m / r(s + t)) + r(m / r(rr + l))) * r(1.0 + a))
            l = r(sqrt(r(r(t * t) + 4.0)))
            crt = r(2.0 / l)
            srt = r(t / l)
            clt = r(r(crt + r(srt * m)) / a)
            slt = r(r(r(ht / ft) * srt) / a)
    if swap:
        csl, snl, csr, snr = srt, crt, slt, clt
    else:
        csl, snl, csr, snr = clt, slt, crt, srt
    # correct the signs of ssmax and ssmin
    if pmax == 1:
        tsign = _sign(1.0, csr) * _sign(1.0, csl) * _sign(1.0, f)
    elif pmax == 2:
        tsign = _sign(1.0, snr) * _sign(1.0, csl) * _sign(1.0, g)
    else:
        tsign = _sign(1.0, snr) * _sign(1.0, snl) * _sign(1.0, h)
    ssmax = _sign(ssmax, tsign)
    ssmin = _sign(ssmin, tsign * _sign(1.0, f) * _sign(1.0, h))
    return Lasv2Out(ssmin, ssmax, csl, snl, csr, snr)


def lasv2_factors(out: Lasv2Out) -> tuple[Matrix2, Matrix2, float, float]:
    """(U, V, sigma1, sigma2) with G = U diag(sigma1, sigma2) V^T and sigma_i >= 0.

    The signs of ssmax/ssmin are moved into the columns of U.
    """
    s1 = -1.0 if math.copysign(1.0, out.ssmax) < 0 else 1.0
    s2 = -1.0 if math.copysign(1.0, out.ssmin) < 0 else 1.0
    U = Matrix2(s1 * out.csl, -s2 * out.snl, s1 * out.snl, s2 * out.csl)
    V = Matrix2(out.csr, -out.snr, out.snr, out.csr)
    return U, V, abs(out.ssmax), abs(out.ssmin)
