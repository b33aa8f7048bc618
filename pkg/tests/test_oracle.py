import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kogsvd import epair as ep
from kogsvd.epair import EPair
from kogsvd.fpcore import BINARY64
from kogsvd.matrix import Matrix2
from kogsvd.oracle import (
    Dyadic,
    ErrorStats,
    Factors,
    Metrics,
    kappa_str,
    metrics,
    singular_values_exact,
    svd2_ext,
)
from kogsvd.svd2 import svd2

EPS = BINARY64.eps
M = Matrix2
I = M(1.0, 0.0, 0.0, 1.0)
finite = st.floats(allow_nan=False, allow_infinity=False)
unit = st.floats(-1, 1)


def test_svd2_ext_examples():
    e = svd2_ext(M(2.0, 0.0, 0.0, 1.0))
    assert (e.sigma1, e.sigma2) == (2, 1)
    e = svd2_ext(M(2.0, 1.0, 1.0, 2.0))
    assert abs(e.sigma1 - 3) < mpmath.mpf(2) ** -240
    assert abs(e.sigma2 - 1) < mpmath.mpf(2) ** -240
    e = svd2_ext(M(4.0, 3.0, 0.0, 2.0))
    assert abs(e.sigma1 * e.sigma2 - 8) < mpmath.mpf(2) ** -240
    e = svd2_ext(M(0.0, 0.0, 0.0, 0.0))
    assert e.sigma1 == e.sigma2 == 0
    with pytest.raises(ValueError):
        svd2_ext(I, prec=64)


def test_characteristic_roots_brute_force():
    # sigma^2 are the roots of x^2 - tr(G^T G) x + det(G)^2 at 226 bits
    mp = mpmath.MPContext()
    mp.prec = 226
    a, b, c, d = (mp.mpf(x) for x in (2.0, 1.0, 1.0, 2.0))
    t = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = mp.sqrt(t * t - 4 * det * det)
    assert abs(mp.sqrt((t + disc) / 2) - 3) < mp.mpf(2) ** -220
    assert abs(mp.sqrt((t - disc) / 2) - 1) < mp.mpf(2) ** -220


def _close(x, y, rel):
    return abs(x - y) <= rel * abs(y)


@given(finite, finite, finite, finite)
def test_ext_and_closed_form_agree(a, b, c, d):
    G = M(a, b, c, d)
    e = svd2_ext(G)
    s1, s2 = (s.to_mpf(e.ctx) for s in singular_values_exact(G))
    assert _close(e.sigma1, s1, mpmath.mpf(2) ** -190)
    assert _close(e.sigma2, s2, mpmath.mpf(2) ** -150)


@given(unit, unit, unit, unit)
def test_ext_reconstructs(a, b, c, d):
    G = M(a, b, c, d)
    e = svd2_ext(G)
    mp = e.ctx
    U, V = e.U, e.V
    S = (e.sigma1, e.sigma2)
    err = mp.mpf(0)
    for i in range(2):
        for j in range(2):
            x = U[i][0] * S[0] * V[j][0] + U[i][1] * S[1] * V[j][1]
            err += (x - G[2 * i + j]) ** 2
    norm = mp.sqrt(sum(mp.mpf(g) ** 2 for g in G))
    if norm:
        assert mp.sqrt(err) / norm <= mp.mpf(2) ** -100
    for Q in (U, V):
        for i in range(2):
            for j in range(2):
                dot = Q[0][i] * Q[0][j] + Q[1][i] * Q[1][j]
                assert abs(dot - (i == j)) <= mp.mpf(2) ** -200


def tofrac(x) -> Fraction:
    sign, m, e, _ = x._mpf_
    return (-1) ** sign * Fraction(m) * Fraction(2) ** e if m else Fraction(0)


def test_ext_arithmetic_against_rationals():
    # the extended context rounds each operation once
    rng = random.Random(17)
    mp = mpmath.MPContext()
    mp.prec = 256
    ulp = Fraction(1, 2**255)
    for _ in range(100_000):
        x = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        y = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        X = mp.mpf(x.numerator) / x.denominator
        Y = mp.mpf(y.numerator) / y.denominator
        fx, fy = tofrac(X), tofrac(Y)
        for got, exact in ((X + Y, fx + fy), (X - Y, fx - fy), (X * Y, fx * fy), (X / Y, fx / fy)):
            assert abs(tofrac(got) - exact) <= ulp * abs(exact)
        r = tofrac(mp.sqrt(Y))
        assert abs(r * r - fy) <= 2 * ulp * fy


def test_singular_values_exact_examples():
    s1, s2 = singular_values_exact(M(3.0, 0.0, 0.0, 4.0))
    assert s1.to_fraction() == 4 and s2.to_fraction() == 3
    s1, s2 = singular_values_exact(M(0.0, 0.0, 0.0, 0.0))
    assert s1.m == s2.m == 0
    s1, s2 = singular_values_exact(M(1.0, 1.0, 1.0, 1.0))
    assert s1.to_fraction() == 2 and s2.m == 0
    assert Dyadic(3, -1).to_fraction() == Fraction(3, 2)


def test_metrics_exact_decomposition():
    G = M(0.0, 3.0, -2.0, 0.0)
    res = svd2(G)
    m = metrics(G, Factors(res.U, res.V, res.sigma1, res.sigma2))
    assert m.reG == m.reU == m.reV == m.reSigma1 == m.reSigma2 == 0.0
    assert m.kappa2 == EPair(0, 1.5)


def test_metrics_zero_sigma_convention():
    G = M(1.0, 0.0, 0.0, 0.0)
    m = metrics(G, Factors(I, I, ep.ONE, ep.ZERO))
    assert m.reSigma2 == 0.0
    assert m.kappa2 is None and kappa_str(m.kappa2) == "inf"
    m = metrics(G, Factors(I, I, ep.ONE, EPair(-60, 1.0)))
    assert m.reSigma2 == math.inf
    Z = M(0.0, 0.0, 0.0, 0.0)
    m = metrics(Z, Factors(I, I, ep.ZERO, ep.ZERO))
    assert m.reG == 0.0
    m = metrics(Z, Factors(I, I, ep.ONE, ep.ZERO))
    assert m.reG == math.inf


@pytest.mark.parametrize("delta", [2.0**-20, 2.0**-40, 1e-3])
def test_metrics_perturbed_u(delta):
    U = M(1.0, delta, 0.0, 1.0)
    m = metrics(I, Factors(U, I, ep.ONE, ep.ONE))
    # U^T U - I = [[0, delta], [delta, delta^2]]
    d = mpmath.mpf(delta)
    want = mpmath.sqrt(2 * d**2 + d**4)
    assert abs(m.reU - want) <= 2 * EPS * want
    assert m.reV == 0.0
    assert m.reSigma1 == m.reSigma2 == 0.0


def test_metrics_against_mpmath():
    rng = random.Random(8)
    mp = mpmath.MPContext()
    mp.prec = 300
    for _ in range(200):
        G = M(*(rng.uniform(-1, 1) for _ in range(4)))
        res = svd2(G)
        m = metrics(G, Factors(res.U, res.V, res.sigma1, res.sigma2))
        U = [mp.mpf(x) for x in res.U]
        s = [mp.ldexp(mp.mpf(x.f), x.e) for x in (res.sigma1, res.sigma2)]
        V = [mp.mpf(x) for x in res.V]
        num = mp.mpf(0)
        for i in range(2):
            for j in range(2):
                x = U[2 * i] * s[0] * V[2 * j] + U[2 * i + 1] * s[1] * V[2 * j + 1]
                num += (G[2 * i + j] - x) ** 2
        reG = mp.sqrt(num) / mp.sqrt(sum(mp.mpf(g) ** 2 for g in G))
        assert abs(m.reG - reG) <= 2 * EPS * reG
        e = svd2_ext(G)
        assert abs(m.reSigma1 - abs(s[0] - e.sigma1) / e.sigma1) <= 1e-30 + 2 * EPS * m.reSigma1


def test_kappa_str():
    assert kappa_str(EPair(0, 1.5)) == "1.5"
    assert kappa_str(EPair(4000, 1.0)).endswith("e+1204")


def test_error_stats():
    s = ErrorStats()
    assert s.row()[:5] == ["0.0"] * 5
    s.add(Metrics(1e-16, 2e-16, 0.0, 3e-16, 0.0, EPair(3, 1.0)))
    t = ErrorStats()
    t.add(Metrics(0.0, 1e-16, 5e-16, 0.0, 1e-16, EPair(9, 1.0)))
    t.add(Metrics(0.0, 0.0, 0.0, 0.0, 0.0, None))
    u = s.merge(t)
    assert (u.reG, u.reSigma1, u.reSigma2, u.reU, u.reV, u.count) == (1e-16, 2e-16, 5e-16, 3e-16, 1e-16, 3)
    assert u.row()[-1] == "inf"
    with pytest.raises(ValueError):
        s.add(Metrics(math.nan, 0.0, 0.0, 0.0, 0.0, None))
    with pytest.raises(ValueError):
        s.add(Metrics(math.inf, 0.0, 0.0, 0.0, 0.0, None))
