"""Truncated power series in u, the g/phi recurrences and the expression parser."""
from fractions import Fraction
from math import factorial

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from snyderkit.coeffs import ExactComplex
from snyderkit.parse import SeriesSemanticError, SeriesSyntaxError, parse_series
from snyderkit.series import (
    SeriesBundle,
    TransformSpec,
    TruncatedSeries,
    binomial_series,
    g1_from_F,
    g2_from_F,
    g3_from_F,
    phi2_from_phi1,
    phi_bundle,
    solve_F_for_phi1,
)


def gen_binomial(alpha: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for k in range(n):
        out *= (alpha - k) / (k + 1)
    return out


def fr_list(s: TruncatedSeries):
    out = []
    for c in s.coeffs:
        assert c.im == 0
        out.append(Fraction(int(c.re.numerator), int(c.re.denominator)))
    return out


SQRT_1_MINUS_U = [Fraction(1), Fraction(-1, 2), Fraction(-1, 8), Fraction(-1, 16),
                  Fraction(-5, 128), Fraction(-7, 256), Fraction(-21, 1024),
                  Fraction(-33, 2048), Fraction(-429, 32768)]
INV_SQRT_1_MINUS_U = [Fraction(1), Fraction(1, 2), Fraction(3, 8), Fraction(5, 16),
                      Fraction(35, 128), Fraction(63, 256), Fraction(231, 1024),
                      Fraction(429, 2048), Fraction(6435, 32768)]


def test_frozen_binomial_tables_match_oracle():
    # tables above frozen from the generalized binomial formula
    assert SQRT_1_MINUS_U == [gen_binomial(Fraction(1, 2), n) * (-1) ** n for n in range(9)]
    assert INV_SQRT_1_MINUS_U == [gen_binomial(Fraction(-1, 2), n) * (-1) ** n for n in range(9)]


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(-1, 2), Fraction(3), Fraction(-2, 3)])
def test_binomial_series(alpha):
    s = binomial_series(ExactComplex(mpq(alpha.numerator, alpha.denominator)), 7)
    assert fr_list(s) == [gen_binomial(alpha, n) for n in range(8)]


poly = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=5)


def series_of(cs, order=6):
    return TruncatedSeries([mpq(c.numerator, c.denominator) for c in cs], order)


@given(poly, poly, poly)
def test_ring_axioms(a, b, c):
    a, b, c = series_of(a), series_of(b), series_of(c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(poly)
def test_reciprocal_and_sqrt_round_trip(cs):
    s = series_of(cs)
    if s.coeffs[0]:
        assert s * s.reciprocal() == TruncatedSeries.constant(1, 6)
    sq = series_of([Fraction(1)] + cs[1:])
    assert (sq * sq).sqrt() == sq


def test_sqrt_rejects_non_square_constant():
    with pytest.raises(ValueError):
        TruncatedSeries([2, 1], 4).sqrt()
    with pytest.raises(ValueError):
        TruncatedSeries([0, 1], 4).sqrt()


def test_precision_tracking():
    s = TruncatedSeries([1, 2, 3], 4)
    assert s.derivative().order == 3
    assert s.times_u().order == 5
    with pytest.raises(ValueError):
        s.agrees(s.derivative(), 4)
    with pytest.raises(ValueError):
        TruncatedSeries.constant(1, 0).derivative()


def test_str_shows_truncation():
    assert str(TruncatedSeries([1, mpq(-1, 2)], 2)) == "1 - 1/2*u + O(u^3)"


# --- g and phi series

F_HALF = TruncatedSeries([0, mpq(-1, 2)], 10)


def test_example_F_minus_half_u():
    # reference: F = -u/2 gives phi1 = sqrt(1-u), phi2 = 0
    b = phi_bundle(TransformSpec(F_HALF), 8)
    assert fr_list(b.phi1) == SQRT_1_MINUS_U
    assert b.phi2.is_zero()
    assert b.phi3.is_zero()
    assert fr_list(b.g3) == INV_SQRT_1_MINUS_U


def test_zero_F_is_identity():
    b = phi_bundle(TransformSpec(TruncatedSeries.zero(6)), 4)
    assert b.phi1 == TruncatedSeries.constant(1, 4)
    assert b.phi2 == TruncatedSeries.constant(1, 4)
    assert b.g2.is_zero()


Fs = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=1, max_size=3).map(
    lambda cs: TruncatedSeries([0] + [mpq(c.numerator, c.denominator) for c in cs], 8)
)


@given(Fs)
def test_g_identities(F):
    K = 6
    g1, g3 = g1_from_F(F, K + 1), g3_from_F(F, K + 1)
    g2 = g2_from_F(F, K)
    assert (g1 * g3).agrees(TruncatedSeries.constant(1, K), K)
    d1 = g1.derivative()
    closed = (d1 * g1.with_order(K) * 2) / (g1.with_order(K) - d1.times_u().with_order(K) * 2)
    assert g2.agrees(closed, K)


@given(Fs)
def test_phi2_is_fixed_by_phi1(F):
    K = 6
    b = phi_bundle(TransformSpec(F), K)
    assert phi2_from_phi1(b.phi1).agrees(b.phi2, K - 1)


def test_first_coefficients_of_g1():
    # g1 = 1 + F1 u + ... ; the linear term of g1 is F's linear term
    F = TruncatedSeries([0, mpq(2, 3), 1], 6)
    assert g1_from_F(F, 3).coeffs[1] == ExactComplex(mpq(2, 3))


@given(Fs)
def test_solve_F_round_trip(F):
    K = 6
    g1 = g1_from_F(F, K)
    assert solve_F_for_phi1(g1, K) == F.with_order(K)


def test_g_series_require_known_F():
    with pytest.raises(ValueError):
        g2_from_F(TruncatedSeries([0, 1], 3), 3)
    with pytest.raises(ValueError):
        g1_from_F(TruncatedSeries([1, 1], 3), 3)
    with pytest.raises(ValueError):
        TransformSpec(TruncatedSeries([1], 3))


def test_bundle_json_names():
    b = phi_bundle(TransformSpec(F_HALF), 2)
    assert list(b.to_json()) == ["phi1", "phi2", "phi3", "g1", "g2", "g3"]
    assert b.to_json()["phi1"] == ["1", "-1/2", "-1/8"]
    assert isinstance(SeriesBundle(b.phi1, b.phi2, b.phi3).named(), list)


# --- parser


def test_parse_kernel():
    s = parse_series("1/(1+sqrt(1+u))", 3)
    assert fr_list(s) == [Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16), Fraction(-5, 128)]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("-u/2", [0, Fraction(-1, 2), 0]),
        ("u^2 - 3/4*u", [0, Fraction(-3, 4), 1]),
        ("(1+u)^2", [1, 2, 1]),
        ("  2 * ( u + 1 ) ", [2, 2, 0]),
        ("-(u)", [0, -1, 0]),
    ],
)
def test_parse_values(text, expected):
    assert fr_list(parse_series(text, 2)) == [Fraction(e) for e in expected]


@pytest.mark.parametrize(
    "text, exc, pos",
    [
        ("sqrt(u", SeriesSyntaxError, 7),
        ("u +", SeriesSyntaxError, 4),
        ("2 $ u", SeriesSyntaxError, 3),
        ("u^x", SeriesSyntaxError, 3),
        ("sqrt(u)", SeriesSemanticError, 6),
        ("1/u", SeriesSemanticError, 3),
        ("3/0", SeriesSemanticError, 3),
    ],
)
def test_parse_errors(text, exc, pos):
    with pytest.raises(exc) as info:
        parse_series(text, 4)
    assert info.value.position == pos


@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9), min_size=1, max_size=5))
def test_parse_round_trip(cs):
    text = " + ".join(f"({c.numerator}/{c.denominator})*u^{n}" for n, c in enumerate(cs))
    assert parse_series(text, 6) == series_of(cs)
