import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kogsvd.fpcore import (
    BINARY32,
    BINARY64,
    assemble,
    fdiv,
    fma,
    get_format,
    hypot_cr,
    hypot_naive,
    round_dyadic,
    round_quotient,
    sec_from_tan,
    split,
    tan_from_double_angle,
)
from refs import hypot_ref, random_float, round_fraction, to32

NU64 = BINARY64.nu
NU32 = BINARY32.nu
MU64 = BINARY64.mu

finite64 = st.floats(allow_nan=False, allow_infinity=False)
finite32 = st.floats(width=32, allow_nan=False, allow_infinity=False)


def test_format_constants():
    assert BINARY64.eps == 2.0**-53
    assert BINARY64.mu == 2.0**-1022
    assert BINARY64.nu == 1.7976931348623157e308
    assert BINARY64.mu_check == 5e-324
    assert BINARY32.eps == 2.0**-24
    assert BINARY32.mu == 2.0**-126
    assert BINARY32.nu == 3.4028234663852886e38
    assert BINARY32.mu_check == 2.0**-149
    assert get_format("single") is BINARY32
    assert get_format("double") is BINARY64
    with pytest.raises(ValueError):
        get_format("binary16")


def test_nu_absorbs_one():
    for fmt in (BINARY32, BINARY64):
        assert fmt.round(fmt.nu + 1.0) == fmt.nu
        assert hypot_cr(fmt.nu, 1.0, fmt) == fmt.nu
        assert sec_from_tan(fmt.nu, fmt) == fmt.nu


@pytest.mark.parametrize(
    "a,b,want",
    [(3.0, 4.0, 5.0), (0.0, 0.0, 0.0), (-3.0, 4.0, 5.0), (NU64, 1.0, NU64), (1.0, 1.0, 1.4142135623730951),
     (5e-324, 5e-324, 5e-324), (NU64, NU64, math.inf), (math.inf, math.nan, math.inf)],
)
def test_hypot_examples(a, b, want):
    assert hypot_cr(a, b) == want


def test_hypot_binary32_examples():
    assert hypot_cr(1.0, 1.0, BINARY32) == 1.4142135381698608
    assert hypot_cr(NU32, NU32, BINARY32) == math.inf
    assert hypot_cr(2.0**-149, 2.0**-149, BINARY32) == 2.0**-149


def test_hypot_random_against_mpfr():
    rng = random.Random(20240601)
    for _ in range(20000):
        a, b = random_float(rng), random_float(rng)
        assert hypot_cr(a, b) == hypot_ref(a, b), (a, b)
        # close exponents: the hard case for rounding
        c = random_float(rng, lo=-30, hi=30)
        d = math.ldexp(c, rng.randint(-30, 30)) * (1 + rng.random())
        assert hypot_cr(c, d) == hypot_ref(c, d), (c, d)
        x, y = random_float(rng, "binary32"), random_float(rng, "binary32")
        assert hypot_cr(x, y, BINARY32) == hypot_ref(x, y, "binary32"), (x, y)


@given(finite64, finite64)
def test_hypot_symmetry(a, b):
    h = hypot_cr(a, b)
    assert h == hypot_cr(b, a) == hypot_cr(abs(a), -abs(b))
    assert h >= max(abs(a), abs(b))


@given(finite64)
def test_hypot_with_zero_is_abs(a):
    assert hypot_cr(a, 0.0) == abs(a)
    assert hypot_cr(0.0, a) == abs(a)


@given(finite64, finite64, finite64)
def test_hypot_monotone(a, a2, b):
    a, a2 = sorted((abs(a), abs(a2)))
    assert hypot_cr(a, b) <= hypot_cr(a2, b)


def test_hypot_naive_is_close():
    rng = random.Random(7)
    for _ in range(2000):
        a, b = random_float(rng, lo=-500, hi=500), random_float(rng, lo=-500, hi=500)
        h = hypot_naive(a, b)
        assert abs(h - hypot_cr(a, b)) <= 4 * BINARY64.eps * h


@given(st.integers(-(1 << 80), 1 << 80), st.integers(-1200, 1100))
def test_round_dyadic_matches_fraction(m, k):
    q = Fraction(m) * Fraction(2) ** k
    assert round_dyadic(m, k, BINARY64) == round_fraction(q, "binary64")
    assert round_dyadic(m, k, BINARY32) == round_fraction(q, "binary32")


@given(st.integers(-(1 << 120), 1 << 120), st.integers(1, 1 << 90), st.integers(-1200, 1100))
def test_round_quotient_matches_fraction(n, d, k):
    q = Fraction(n, d) * Fraction(2) ** k
    assert round_quotient(n, d, k, BINARY64) == round_fraction(q, "binary64")
    assert round_quotient(n, d, k, BINARY32) == round_fraction(q, "binary32")


@given(finite64, finite64, finite64)
def test_fma_single_rounding(a, b, c):
    got = fma(a, b, c)
    want = round_fraction(Fraction(a) * Fraction(b) + Fraction(c), "binary64")
    if want == 0.0:
        assert got == 0.0
    else:
        assert got == want


@given(finite32, finite32, finite32)
def test_fma_binary32(a, b, c):
    got = fma(a, b, c, BINARY32)
    assert got == round_fraction(Fraction(a) * Fraction(b) + Fraction(c), "binary32")


def test_fma_known():
    # 1 + 2^-53 is lost by separate rounding but kept by fma
    x = 1.0 + 2.0**-52
    assert fma(x, x, -1.0) == 2.0**-51 + 2.0**-104
    assert fdiv(1.0, 0.0) == math.inf
    assert fdiv(-1.0, 0.0) == -math.inf
    assert math.isnan(fdiv(0.0, 0.0))


@given(finite32, finite32)
def test_binary32_round_is_correct(a, b):
    # double evaluation then one rounding to binary32 is innocuous for + - * /
    for got, exact in [(a + b, Fraction(a) + Fraction(b)), (a * b, Fraction(a) * Fraction(b))]:
        assert BINARY32.round(got) == round_fraction(exact, "binary32")
    if b != 0:
        assert BINARY32.round(a / b) == round_fraction(Fraction(a) / Fraction(b), "binary32")


def test_split_examples():
    assert split(1.5) == (0, 1.5)
    assert split(0.0) == (0, 0.0)
    assert math.copysign(1.0, split(-0.0)[1]) == -1.0
    assert split(math.inf) == (0, math.inf)
    assert split(MU64 / 2) == (-1023, 1.0)
    assert split(5e-324) == (-1074, 1.0)
    assert split(-6.0) == (2, -1.5)


def test_assemble_examples():
    assert assemble(0, 1.5) == 1.5
    assert assemble(1024, 1.0) == math.inf
    assert assemble(-1022 - 53, 1.0) == 0.0  # exactly half the smallest subnormal: ties to even
    assert assemble(-1022 - 52, 1.0) == 5e-324
    assert assemble(-1022 - 53, 1.5) == 5e-324
    assert assemble(128, 1.0, BINARY32) == math.inf
    assert assemble(-126 - 23, 1.0, BINARY32) == 2.0**-149
    assert assemble(10**6, -1.0) == -math.inf


@given(finite64)
def test_split_assemble_roundtrip(x):
    e, f = split(x)
    assert assemble(e, f) == x
    if x != 0:
        assert 1.0 <= abs(f) < 2.0


@given(st.integers(-1200, 1200), st.floats(1.0, 2.0, exclude_max=True))
def test_assemble_is_rounded_scalbn(e, f):
    assert assemble(e, f) == round_fraction(Fraction(f) * Fraction(2) ** e, "binary64")
    f32 = to32(f)
    if f32 < 2.0:
        assert assemble(e, f32, BINARY32) == round_fraction(Fraction(f32) * Fraction(2) ** e, "binary32")


@pytest.mark.parametrize(
    "t2,want", [(0.0, 0.0), (math.inf, 1.0), (-math.inf, -1.0), (4 / 3, 0.5), (NU64, 1.0), (-NU64, -1.0)]
)
def test_tan_from_double_angle_examples(t2, want):
    assert tan_from_double_angle(t2) == want


@given(st.floats(allow_nan=False))
def test_tan_from_double_angle_bounded(t2):
    for fmt in (BINARY64, BINARY32):
        x = fmt.round(t2) if math.isfinite(t2) else t2
        t = tan_from_double_angle(x, fmt)
        assert -1.0 <= t <= 1.0
        assert math.copysign(1.0, t) == math.copysign(1.0, x)


def test_sec_from_tan_examples():
    assert sec_from_tan(0.0) == 1.0
    assert sec_from_tan(0.75) == 1.25
    assert sec_from_tan(NU64) == NU64
