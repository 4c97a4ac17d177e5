"""Correctly rounded two-operand operations built on exact integer arithmetic."""

from __future__ import annotations

from typing import Optional

from .errors import DivideByZero, InvalidOperand
from .formats import ExactValue, FpFormat, FpValue, Kind, value_of
from .rounding import RoundingMode, round_value


def _check(*operands: FpValue) -> None:
    for v in operands:
        if v.is_nan():
            raise InvalidOperand("NaN operand")


def _special_sum(signs: list[int], fmt: FpFormat) -> FpValue:
    if len(set(signs)) > 1:
        raise InvalidOperand("inf - inf is undefined")
    return fmt.inf(signs[0])


def add2(a: FpValue, b: FpValue, mode: RoundingMode = RoundingMode.RN, fmt: Optional[FpFormat] = None) -> FpValue:
    """``fl(a + b)``: exact sum rounded once into ``fmt`` (default ``a.fmt``)."""
    _check(a, b)
    fmt = fmt or a.fmt
    infs = [v.sign for v in (a, b) if v.kind is Kind.INF]
    if infs:
        return _special_sum(infs, fmt)
    return round_value(value_of(a) + value_of(b), fmt, mode)


def sub2(a: FpValue, b: FpValue, mode: RoundingMode = RoundingMode.RN, fmt: Optional[FpFormat] = None) -> FpValue:
    return add2(a, -b, mode, fmt)


def mul2(a: FpValue, b: FpValue, mode: RoundingMode = RoundingMode.RN, fmt: Optional[FpFormat] = None) -> FpValue:
    """``fl(a * b)`` with a single rounding of the exact product."""
    _check(a, b)
    fmt = fmt or a.fmt
    if a.kind is Kind.INF or b.kind is Kind.INF:
        if a.is_zero() or b.is_zero():
            raise InvalidOperand("0 * inf is undefined")
        return fmt.inf(a.sign * b.sign)
    return round_value(value_of(a) * value_of(b), fmt, mode)


def exact_quotient_stand_in(x: ExactValue, y: ExactValue, precision: int, emin: int) -> ExactValue:
    """Dyadic that rounds like ``x / y`` at ``precision`` bits.

    Long division is carried two bits past the finest quantum the result can
    be rounded at; a non-zero remainder becomes a sticky one below that.
    """
    negative = (x.num < 0) != (y.num < 0)
    num, den = abs(x.num), abs(y.num)
    scale = x.scale - y.scale
    # binade of num/den, then of the quotient
    binade = num.bit_length() - den.bit_length()
    if (num << max(0, -binade)) < (den << max(0, binade)):
        binade -= 1
    e = max(binade + scale, emin)
    q = e - precision - 1 - scale
    if q >= 0:
        whole, rem = divmod(num, den << q)
    else:
        whole, rem = divmod(num << -q, den)
    if rem:
        result = ExactValue(2 * whole + 1, q + scale - 1)
    else:
        result = ExactValue(whole, q + scale)
    return -result if negative else result


def div2(a: FpValue, b: FpValue, mode: RoundingMode = RoundingMode.RN, fmt: Optional[FpFormat] = None) -> FpValue:
    """Correctly rounded ``a / b`` for finite operands."""
    _check(a, b)
    fmt = fmt or a.fmt
    if not a.is_finite() or not b.is_finite():
        raise InvalidOperand("div2 takes finite operands only")
    if b.is_zero():
        raise DivideByZero(f"{a} / 0")
    x, y = value_of(a), value_of(b)
    if x.is_zero():
        return fmt.zero(a.sign * b.sign)
    return round_value(exact_quotient_stand_in(x, y, fmt.precision, fmt.emin), fmt, mode)


def fma(a: FpValue, b: FpValue, c: FpValue, mode: RoundingMode = RoundingMode.RN, fmt: Optional[FpFormat] = None) -> FpValue:
    """``fl(a * b + c)`` with one rounding."""
    _check(a, b, c)
    fmt = fmt or a.fmt
    if not (a.is_finite() and b.is_finite() and c.is_finite()):
        raise InvalidOperand("fma takes finite operands only")
    return round_value(value_of(a) * value_of(b) + value_of(c), fmt, mode)
