"""Rounding of exact values into a format under RN, RZ, RD and RU."""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import ParseError
from .formats import ExactValue, FpFormat, FpValue, Kind


class RoundingMode(enum.Enum):
    RN = "rn"  # nearest, ties to even
    RZ = "rz"
    RD = "rd"
    RU = "ru"

    def __str__(self) -> str:
        return self.value


ALL_MODES = (RoundingMode.RN, RoundingMode.RZ, RoundingMode.RD, RoundingMode.RU)


def parse_mode(text: str) -> RoundingMode:
    try:
        return RoundingMode(text.strip().lower())
    except ValueError:
        raise ParseError(f"unknown rounding mode {text!r}; expected rn, rz, rd or ru") from None


class Rounded(NamedTuple):
    value: FpValue
    inexact: bool
    precision_bits_consumed: int


def _round_up(mode: RoundingMode, negative: bool, m: int, rem: int, half: int) -> bool:
    if rem == 0:
        return False
    if mode is RoundingMode.RN:
        return rem > half or (rem == half and m & 1 == 1)
    if mode is RoundingMode.RU:
        return not negative
    if mode is RoundingMode.RD:
        return negative
    return False


def _overflow(fmt: FpFormat, sign: int, mode: RoundingMode) -> FpValue:
    if mode is RoundingMode.RN:
        return fmt.inf(sign)
    if mode is RoundingMode.RU:
        return fmt.inf(1) if sign > 0 else fmt.max_finite(-1)
    if mode is RoundingMode.RD:
        return fmt.inf(-1) if sign < 0 else fmt.max_finite(1)
    return fmt.max_finite(sign)


def round_with_flags(x: ExactValue, fmt: FpFormat, mode: RoundingMode) -> Rounded:
    """Round ``x`` into ``fmt``; also report inexactness and the bit count
    needed to hold ``x`` exactly at its own binade."""
    n = x.num
    if n == 0:
        return Rounded(fmt.zero(1), False, 0)
    negative = n < 0
    sign = -1 if negative else 1
    mag = -n if negative else n
    bits = mag.bit_length()
    p = fmt.precision
    binade = x.scale + bits - 1
    e = binade if binade > fmt.emin else fmt.emin
    shift = (e - p + 1) - x.scale
    if shift <= 0:
        m = mag << -shift
        inexact = False
    else:
        m = mag >> shift
        rem = mag & ((1 << shift) - 1)
        inexact = rem != 0
        if _round_up(mode, negative, m, rem, 1 << (shift - 1)):
            m += 1
            if m >> p:
                m >>= 1
                e += 1
    if e > fmt.emax:
        return Rounded(_overflow(fmt, sign, mode), True, bits)
    if m == 0:
        # underflow to zero keeps the sign of the exact value
        return Rounded(fmt.zero(sign), inexact, bits)
    kind = Kind.NORMAL if m >> (p - 1) else Kind.SUBNORMAL
    return Rounded(FpValue(fmt, kind, sign, m, e), inexact, bits)


def round_value(x: ExactValue, fmt: FpFormat, mode: RoundingMode = RoundingMode.RN) -> FpValue:
    """Representable value of ``fmt`` prescribed by ``mode`` for the exact ``x``."""
    return round_with_flags(x, fmt, mode).value


def sticky_dyadic(fr: Union[Fraction, int], fmt: FpFormat) -> ExactValue:
    """Dyadic stand-in for a rational that rounds identically into ``fmt``.

    A non-dyadic rational is truncated two bits below the finest quantum it can
    be rounded at and a sticky one is appended, so the stand-in lies strictly
    between the same two representable neighbours and can never be a tie.
    """
    fr = Fraction(fr)
    d = fr.denominator
    if not d & (d - 1):
        return ExactValue.from_fraction(fr)
    num = fr.numerator
    mag = abs(num)
    # floor(log2 |fr|) without host floats
    binade = mag.bit_length() - d.bit_length()
    if (mag << max(0, -binade)) < (d << max(0, binade)):
        binade -= 1
    e = max(binade, fmt.emin)
    q = e - fmt.precision - 1
    if q >= 0:
        whole = mag // (d << q)
    else:
        whole = (mag << -q) // d
    stand_in = ExactValue(2 * whole + 1, q - 1)
    return -stand_in if num < 0 else stand_in


def round_fraction(fr: Union[Fraction, int], fmt: FpFormat, mode: RoundingMode = RoundingMode.RN) -> FpValue:
    """Correctly round an arbitrary rational (e.g. a parsed decimal literal)."""
    return round_value(sticky_dyadic(fr, fmt), fmt, mode)
