"""Exact parsing of value literals.

Literals are read as exact rationals and only then rounded, with an explicit
mode, into a format.  Accepted spellings: integers, decimals with optional
exponent (``-1.25e-3``), fractions (``1/3``), hexadecimal significands
(``0x1.8p3``) and ``inf``/``-inf``/``nan``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import ParseError
from .formats import ExactValue, FpFormat, FpValue
from .rounding import RoundingMode, round_fraction, round_value

_HEX_RE = re.compile(r"^([+-]?)0x([0-9a-f]*)(?:\.([0-9a-f]*))?(?:p([+-]?\d+))?$", re.IGNORECASE)

Special = str  # "inf", "-inf" or "nan"


def parse_literal(text: str) -> Union[Fraction, Special]:
    s = text.strip().lower().replace("_", "")
    if s in ("inf", "+inf", "infinity", "+infinity"):
        return "inf"
    if s in ("-inf", "-infinity"):
        return "-inf"
    if s == "nan":
        return "nan"
    m = _HEX_RE.match(s)
    if m:
        sign, whole, frac, exp = m.groups()
        frac = frac or ""
        if not whole and not frac:
            raise ParseError(f"bad hex literal {text!r}")
        mant = int((whole or "0") + frac, 16)
        value = Fraction(mant) * Fraction(2) ** (int(exp or 0) - 4 * len(frac))
        return -value if sign == "-" else value
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse value literal {text!r}") from None


def to_value(x, fmt: FpFormat, mode: RoundingMode = RoundingMode.RN) -> FpValue:
    """Round a literal string, int, Fraction or ExactValue into ``fmt``."""
    if isinstance(x, FpValue):
        x = x.exact if x.is_finite() else str(x)
    if isinstance(x, str):
        x = parse_literal(x)
    if isinstance(x, ExactValue):
        return round_value(x, fmt, mode)
    if x == "inf":
        return fmt.inf(1)
    if x == "-inf":
        return fmt.inf(-1)
    if x == "nan":
        return fmt.nan()
    return round_fraction(Fraction(x), fmt, mode)


def values(xs, fmt: FpFormat, mode: RoundingMode = RoundingMode.RN) -> list:
    return [to_value(x, fmt, mode) for x in xs]
