from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brokenlines.extreal import INF, NEG_INF, ExtReal, UndefinedSum, as_ext

rationals = st.fractions(max_denominator=50)


def test_basic_arithmetic():
    assert ExtReal(1) + ExtReal(2) == ExtReal(3)
    assert ExtReal(Fraction(1, 2)) + ExtReal(Fraction(1, 3)) == ExtReal(Fraction(5, 6))
    assert -ExtReal(Fraction(2, 7)) == ExtReal(Fraction(-2, 7))


def test_infinity_absorbs():
    assert INF + ExtReal(5) == INF
    assert ExtReal(5) + INF == INF
    assert NEG_INF + ExtReal(-3) == NEG_INF
    assert INF + INF == INF


def test_undefined_sum_rejected():
    with pytest.raises(UndefinedSum):
        INF + NEG_INF
    with pytest.raises(UndefinedSum):
        NEG_INF + INF


def test_total_order():
    assert NEG_INF < ExtReal(-(10**9)) < ExtReal(0) < ExtReal(10**9) < INF
    assert not INF < INF
    assert INF <= INF


@given(rationals, rationals)
def test_addition_matches_fractions(a, b):
    assert (ExtReal(a) + ExtReal(b)).finite == a + b


@given(rationals)
def test_json_roundtrip(a):
    for value in (ExtReal(a), INF, NEG_INF):
        assert ExtReal.from_json(value.to_json()) == value


def test_coercion():
    assert as_ext(3) == ExtReal(3)
    assert as_ext("5/2") == ExtReal(Fraction(5, 2))
    assert as_ext(INF) is INF
