import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from monoadd import (
    ALL_MODES,
    BINARY32,
    DivideByZero,
    FpFormat,
    InvalidOperand,
    RoundingMode,
    add2,
    div2,
    enumerate_finite,
    fma,
    mul2,
    same_value,
    sub2,
    to_value,
    value_of,
)

from _oracle import oracle_round
from test_rounding import as_oracle

RN = RoundingMode.RN
P3 = FpFormat(3, 3)
P3_VALUES = list(enumerate_finite(P3))


def fr(v):
    return value_of(v).to_fraction()


def test_add2_examples():
    p5 = FpFormat(5, 4)
    assert fr(add2(to_value("1.3125", p5), to_value(1, p5))) == Fraction("2.25")
    assert fr(add2(to_value(16777216, BINARY32), to_value(1, BINARY32))) == 16777216


@pytest.mark.parametrize("mode", ALL_MODES, ids=str)
def test_exact_cancellation_is_positive_zero(mode):
    for x in P3_VALUES:
        z = add2(x, -x, mode)
        assert z.is_zero() and z.sign > 0


def test_mul2_and_div2_examples():
    assert fr(mul2(to_value("1.5", P3), to_value("1.5", P3))) == 2
    p5 = FpFormat(5, 4)
    assert fr(div2(to_value(1, p5), to_value(3, p5))) == Fraction("0.328125")


@pytest.mark.parametrize("mode", ALL_MODES, ids=str)
def test_exhaustive_against_oracle(mode):
    for a, b in itertools.product(P3_VALUES, repeat=2):
        x, y = fr(a), fr(b)
        assert as_oracle(add2(a, b, mode)) == oracle_round(x + y, 3, 3, mode)
        assert as_oracle(mul2(a, b, mode)) == oracle_round(x * y, 3, 3, mode)
        if y != 0:
            assert as_oracle(div2(a, b, mode)) == oracle_round(x / y, 3, 3, mode)


def test_fma_single_rounding_witness():
    # found by exhaustive search over p=3 triples
    a, c = to_value("1.25", P3), to_value("0.125", P3)
    assert fr(fma(a, a, c)) == Fraction("1.75")
    assert fr(add2(mul2(a, a), c)) == Fraction("1.5")


def test_fma_matches_oracle_on_sample():
    vals = P3_VALUES[::3]
    for a, b, c in itertools.product(vals, repeat=3):
        assert as_oracle(fma(a, b, c)) == oracle_round(fr(a) * fr(b) + fr(c), 3, 3, "rn")


@pytest.mark.parametrize("mode", ALL_MODES, ids=str)
def test_two_term_addition_is_monotone(mode):
    # each row of the addition table is non-decreasing
    for a in P3_VALUES:
        row = [add2(a, b, mode) for b in P3_VALUES]
        assert all(x <= y for x, y in zip(row, row[1:]))


elems = st.sampled_from(P3_VALUES)


@given(elems, elems, st.sampled_from(ALL_MODES))
def test_commutativity(a, b, mode):
    assert same_value(add2(a, b, mode), add2(b, a, mode))
    assert same_value(mul2(a, b, mode), mul2(b, a, mode))
    assert same_value(sub2(a, b, mode), add2(a, -b, mode))


def test_non_associativity_witness():
    big, one = to_value(16777216, BINARY32), to_value(1, BINARY32)
    left = add2(add2(big, one), one)
    right = add2(big, add2(one, one))
    assert fr(left) == 16777216 and fr(right) == 16777218


def test_special_operands():
    inf, nan, one, zero = P3.inf(1), P3.nan(), to_value(1, P3), P3.zero()
    assert add2(inf, one) == inf
    with pytest.raises(InvalidOperand):
        add2(inf, -inf)
    with pytest.raises(InvalidOperand):
        add2(nan, one)
    with pytest.raises(InvalidOperand):
        mul2(zero, inf)
    with pytest.raises(DivideByZero):
        div2(one, zero)
    assert div2(zero, one).is_zero()
