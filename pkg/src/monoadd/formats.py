"""Parameterized binary floating-point formats and exact dyadic values.

A value in a format with precision ``p`` is ``(-1)^s * m * 2^(e-p+1)`` with an
integer significand ``0 <= m < 2^p`` and exponent ``emin <= e <= emax``, where
``emin = 1 - emax``.  Nothing in this module touches host floating point.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator, Optional, Tuple, Union

from .errors import DomainError, NonFiniteValue, ParseError


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


@total_ordering
@dataclass(frozen=True, slots=True, init=False)
class ExactValue:
    """Unbounded dyadic number ``num * 2**scale`` kept in canonical form.

    ``num`` is odd, or ``num == scale == 0`` for zero, so equal values have
    equal fields.
    """

    num: int
    scale: int

    def __init__(self, num: int = 0, scale: int = 0):
        if num == 0:
            scale = 0
        else:
            tz = _trailing_zeros(num)
            if tz:
                num >>= tz
                scale += tz
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "scale", scale)

    @classmethod
    def from_parts(cls, sign: int, magnitude: int, scale: int) -> "ExactValue":
        return cls(-magnitude if sign < 0 else magnitude, scale)

    @classmethod
    def from_fraction(cls, fr: Union[Fraction, int]) -> "ExactValue":
        fr = Fraction(fr)
        d = fr.denominator
        if d & (d - 1):
            raise DomainError(f"{fr} is not a dyadic rational")
        return cls(fr.numerator, -(d.bit_length() - 1))

    @property
    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)

    @property
    def magnitude(self) -> int:
        return abs(self.num)

    def is_zero(self) -> bool:
        return self.num == 0

    def binade(self) -> int:
        """Exponent of the leading bit, ``floor(log2(|x|))``."""
        if self.num == 0:
            raise DomainError("zero has no binade")
        return self.scale + abs(self.num).bit_length() - 1

    def significant_bits(self) -> int:
        """Number of bits from the leading one to the trailing one."""
        return abs(self.num).bit_length()

    def to_fraction(self) -> Fraction:
        if self.scale >= 0:
            return Fraction(self.num << self.scale)
        return Fraction(self.num, 1 << -self.scale)

    def __add__(self, other: "ExactValue") -> "ExactValue":
        if not isinstance(other, ExactValue):
            return NotImplemented
        if self.num == 0:
            return other
        if other.num == 0:
            return self
        s = min(self.scale, other.scale)
        return ExactValue((self.num << (self.scale - s)) + (other.num << (other.scale - s)), s)

    def __sub__(self, other: "ExactValue") -> "ExactValue":
        if not isinstance(other, ExactValue):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "ExactValue") -> "ExactValue":
        if not isinstance(other, ExactValue):
            return NotImplemented
        return ExactValue(self.num * other.num, self.scale + other.scale)

    def __neg__(self) -> "ExactValue":
        return ExactValue(-self.num, self.scale)

    def __abs__(self) -> "ExactValue":
        return ExactValue(abs(self.num), self.scale)

    def _cmp(self, other: "ExactValue") -> int:
        return (self - other).sign

    def __lt__(self, other: "ExactValue") -> bool:
        if not isinstance(other, ExactValue):
            return NotImplemented
        return self._cmp(other) < 0

    def __str__(self) -> str:
        return format_exact(self)

    def __repr__(self) -> str:
        return f"ExactValue({self.num}, {self.scale})"


ZERO = ExactValue(0)
ONE = ExactValue(1)


def pow2(k: int) -> ExactValue:
    return ExactValue(1, k)


def format_exact(x: ExactValue) -> str:
    """Exact decimal rendering; every dyadic has a terminating expansion."""
    if x.scale >= 0:
        return str(x.num << x.scale)
    k = -x.scale
    digits = abs(x.num) * 5**k
    s = str(digits).rjust(k + 1, "0")
    sign = "-" if x.num < 0 else ""
    return f"{sign}{s[:-k]}.{s[-k:]}"


@dataclass(frozen=True, slots=True)
class FpFormat:
    """Binary format with ``precision`` significand bits and exponent limit ``emax``."""

    precision: int
    emax: int

    def __post_init__(self):
        if self.precision < 2:
            raise DomainError(f"precision must be >= 2, got {self.precision}")
        if self.emax < 1:
            raise DomainError(f"emax must be >= 1, got {self.emax}")

    @property
    def emin(self) -> int:
        return 1 - self.emax

    @property
    def unit_roundoff(self) -> ExactValue:
        return pow2(-self.precision)

    def __str__(self) -> str:
        return f"p{self.precision}e{self.emax}"

    def with_precision(self, precision: int) -> "FpFormat":
        return FpFormat(precision, self.emax)

    # constructors for values in this format

    def zero(self, sign: int = 1) -> "FpValue":
        return FpValue(self, Kind.ZERO, sign, 0, self.emin)

    def inf(self, sign: int = 1) -> "FpValue":
        return FpValue(self, Kind.INF, sign, 0, self.emax)

    def nan(self) -> "FpValue":
        return FpValue(self, Kind.NAN, 1, 0, self.emax)

    def max_finite(self, sign: int = 1) -> "FpValue":
        return FpValue(self, Kind.NORMAL, sign, (1 << self.precision) - 1, self.emax)

    def min_subnormal(self, sign: int = 1) -> "FpValue":
        return FpValue(self, Kind.SUBNORMAL, sign, 1, self.emin)

    def finite(self, sign: int, m: int, e: int) -> "FpValue":
        """Build a finite value from a canonical (m, e) pair."""
        p = self.precision
        if m == 0:
            return self.zero(sign)
        if not self.emin <= e <= self.emax or not 0 < m < (1 << p):
            raise DomainError(f"({m}, {e}) out of range for {self}")
        if m >> (p - 1):
            return FpValue(self, Kind.NORMAL, sign, m, e)
        if e != self.emin:
            raise DomainError(f"non-canonical significand {m} at exponent {e}")
        return FpValue(self, Kind.SUBNORMAL, sign, m, e)


BINARY16 = FpFormat(11, 15)
BINARY32 = FpFormat(24, 127)
BINARY64 = FpFormat(53, 1023)

_FORMAT_RE = re.compile(r"^p(\d+)e(\d+)$", re.IGNORECASE)
_FORMAT_ALIASES = {"binary16": BINARY16, "binary32": BINARY32, "binary64": BINARY64}


def parse_format(text: str) -> FpFormat:
    """Parse ``p<P>e<EMAX>`` (e.g. ``p11e15``) or a binary16/32/64 alias."""
    key = text.strip().lower()
    if key in _FORMAT_ALIASES:
        return _FORMAT_ALIASES[key]
    match = _FORMAT_RE.match(key)
    if not match:
        raise ParseError(f"bad format literal {text!r}; expected p<P>e<EMAX>")
    try:
        return FpFormat(int(match.group(1)), int(match.group(2)))
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


class Kind(enum.Enum):
    ZERO = "zero"
    SUBNORMAL = "subnormal"
    NORMAL = "normal"
    INF = "inf"
    NAN = "nan"


@dataclass(frozen=True, slots=True)
class FpValue:
    """A datum of an :class:`FpFormat`.

    ``==`` is bit identity (so ``+0 != -0``); ordering compares real values and
    treats the two zeros as equal.  Use :func:`same_value` for value equality.
    """

    fmt: FpFormat
    kind: Kind
    sign: int
    m: int
    e: int

    def is_finite(self) -> bool:
        return self.kind not in (Kind.INF, Kind.NAN)

    def is_nan(self) -> bool:
        return self.kind is Kind.NAN

    def is_zero(self) -> bool:
        return self.kind is Kind.ZERO

    @property
    def exact(self) -> ExactValue:
        return value_of(self)

    def __neg__(self) -> "FpValue":
        if self.kind is Kind.NAN:
            return self
        return FpValue(self.fmt, self.kind, -self.sign, self.m, self.e)

    def _order_key(self) -> Tuple[int, ExactValue]:
        if self.kind is Kind.NAN:
            raise DomainError("NaN is unordered")
        if self.kind is Kind.INF:
            return (self.sign, ZERO)
        return (0, value_of(self))

    def __lt__(self, other: "FpValue") -> bool:
        if not isinstance(other, FpValue):
            return NotImplemented
        return self._order_key() < other._order_key()

    def __le__(self, other: "FpValue") -> bool:
        if not isinstance(other, FpValue):
            return NotImplemented
        return self._order_key() <= other._order_key()

    def __gt__(self, other: "FpValue") -> bool:
        if not isinstance(other, FpValue):
            return NotImplemented
        return self._order_key() > other._order_key()

    def __ge__(self, other: "FpValue") -> bool:
        if not isinstance(other, FpValue):
            return NotImplemented
        return self._order_key() >= other._order_key()

    def __str__(self) -> str:
        if self.kind is Kind.NAN:
            return "nan"
        if self.kind is Kind.INF:
            return "inf" if self.sign > 0 else "-inf"
        if self.kind is Kind.ZERO:
            return "0" if self.sign > 0 else "-0"
        return format_exact(value_of(self))


def same_value(a: FpValue, b: FpValue) -> bool:
    """Value equality: ``+0`` and ``-0`` compare equal, NaN equals nothing."""
    if a.is_nan() or b.is_nan():
        return False
    return a._order_key() == b._order_key()


def value_of(v: FpValue) -> ExactValue:
    """Exact real value ``(-1)^s * m * 2^(e-p+1)`` of a finite datum."""
    if v.kind is Kind.ZERO:
        return ZERO
    if v.kind in (Kind.INF, Kind.NAN):
        raise NonFiniteValue(f"{v} has no finite value")
    return ExactValue(v.sign * v.m, v.e - v.fmt.precision + 1)


def ulp(v: FpValue) -> ExactValue:
    """Gap ``2^(e-p+1)`` between ``v`` and the next value away from zero."""
    if not v.is_finite() or v.is_zero():
        raise DomainError(f"ulp undefined for {v}")
    return pow2(v.e - v.fmt.precision + 1)


def next_up(v: FpValue) -> FpValue:
    """Smallest representable value strictly greater than ``v``."""
    fmt = v.fmt
    p = fmt.precision
    if v.kind is Kind.NAN:
        return v
    if v.kind is Kind.INF:
        return v if v.sign > 0 else fmt.max_finite(-1)
    if v.kind is Kind.ZERO:
        return fmt.min_subnormal(1)
    m, e = v.m, v.e
    if v.sign > 0:
        m += 1
        if m == 1 << p:
            m, e = 1 << (p - 1), e + 1
            if e > fmt.emax:
                return fmt.inf(1)
        return fmt.finite(1, m, e)
    m -= 1
    if m == 0:
        return fmt.zero(-1)
    if m < 1 << (p - 1) and e > fmt.emin:
        m, e = (1 << p) - 1, e - 1
    return fmt.finite(-1, m, e)


def next_down(v: FpValue) -> FpValue:
    """Largest representable value strictly less than ``v``."""
    return -next_up(-v)


def count_finite(fmt: FpFormat) -> int:
    """Number of finite values, counting zero once."""
    p = fmt.precision
    positives = (1 << (p - 1)) - 1 + (fmt.emax - fmt.emin + 1) * (1 << (p - 1))
    return 2 * positives + 1


def enumerate_finite(
    fmt: FpFormat,
    lo: Optional[ExactValue] = None,
    hi: Optional[ExactValue] = None,
) -> Iterator[FpValue]:
    """Yield every finite value of ``fmt`` in ascending order.

    Zero is produced once (as ``+0``).  When ``lo``/``hi`` are given only values
    inside the closed interval ``[lo, hi]`` are produced.
    """
    from .rounding import RoundingMode, round_value

    if lo is None:
        v = fmt.max_finite(-1)
    else:
        v = round_value(lo, fmt, RoundingMode.RU)
    while v.is_finite():
        if hi is not None and value_of(v) > hi:
            return
        if v.is_zero():
            yield fmt.zero(1)
            v = fmt.min_subnormal(1)
        else:
            yield v
            v = next_up(v)
