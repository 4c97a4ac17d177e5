"""Bit-exact emulation of custom-precision floating point and multi-term adders."""

from .adders import (
    AdderModel,
    AdderTrace,
    AlignedParams,
    GrowthParams,
    Order,
    SequentialParams,
    ShiftOut,
    Variant,
    parse_adder,
    sum_aligned,
    sum_exact_single_round,
    sum_growth,
    sum_sequential,
)
from .errors import (
    DegenerateFormat,
    DivideByZero,
    DomainError,
    InvalidOperand,
    MonoaddError,
    NonFiniteValue,
    ParseError,
    PivotBreakdown,
    ShapeError,
)
from .formats import (
    BINARY16,
    BINARY32,
    BINARY64,
    ExactValue,
    FpFormat,
    FpValue,
    Kind,
    count_finite,
    enumerate_finite,
    next_down,
    next_up,
    parse_format,
    same_value,
    ulp,
    value_of,
)
from .literals import parse_literal, to_value, values
from .reductions import CPlacement, ProductHandling, ReductionConfig, dot, gemm, gemv
from .rounding import ALL_MODES, RoundingMode, parse_mode, round_fraction, round_value, round_with_flags
from .scalar import add2, div2, fma, mul2, sub2

__version__ = "0.1.0"
