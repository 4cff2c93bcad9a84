from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvature_locus import surd
from curvature_locus.surd import Surd, FieldMismatch, make, sqrt_rational

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicands = st.sampled_from([2, 3, 5, 6, 7])


def test_sqrt_rational_collapses_squares():
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
    r = sqrt_rational(Fraction(1, 2))
    assert isinstance(r, Surd) and r.d == 2 and r.b == Fraction(1, 2)
    with pytest.raises(ValueError):
        sqrt_rational(-1)


def test_squarefree_split():
    assert surd.squarefree_split(72) == (6, 2)
    assert surd.squarefree_split(1) == (1, 1)


def test_product_of_conjugates_is_rational():
    a = make(1, 2, 3)
    prod = a * a.conjugate()
    assert prod == Fraction(1 - 12)
    assert not isinstance(prod, Surd)


def test_mixed_fields_refuse():
    with pytest.raises(FieldMismatch):
        make(0, 1, 2) + make(0, 1, 3)


def test_sign_of_near_cancellation():
    # 99/70 is a convergent of sqrt 2 from above
    assert surd.sign(make(Fraction(-99, 70), 1, 2)) == -1
    assert surd.sign(make(Fraction(-140, 99), 1, 2)) == 1


def test_format_and_parse_roundtrip():
    for text in ["sqrt(2)/2", "-sqrt(3)", "1/2+sqrt(2)/4", "3*sqrt(5)/7", "-2/3"]:
        assert surd.format_number(surd.parse_number(text)) == text


def test_parse_decimal_is_exact():
    assert surd.parse_number("0.25") == Fraction(1, 4)


@given(rationals, rationals, rationals, rationals, radicands)
def test_field_axioms(a, b, c, e, d):
    x, y = make(a, b, d), make(c, e, d)
    assert (x + y) - y == x
    assert x * y == y * x
    if y != 0:
        assert (x / y) * y == x


@given(rationals, rationals, radicands)
def test_sign_matches_float(a, b, d):
    x = make(a, b, d)
    f = float(a) + float(b) * d**0.5
    if abs(f) > 1e-9:
        assert surd.sign(x) == (1 if f > 0 else -1)


@given(rationals, rationals, radicands)
def test_sympy_roundtrip(a, b, d):
    x = make(a, b, d)
    assert surd.from_sympy(surd.to_sympy(x)) == x
