"""Dot products and matrix products on top of the adder models."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .adders import AdderModel, Variant
from .errors import DomainError, ShapeError
from .formats import ONE, FpFormat, FpValue, value_of
from .rounding import RoundingMode, round_value
from .literals import to_value
from .scalar import mul2

Matrix = List[List[FpValue]]


class ProductHandling(enum.Enum):
    EXACT = "exact"
    ROUNDED = "rounded"


class CPlacement(enum.Enum):
    APPEND = "append"  # c is the last addend of one (n+1)-term addition
    PREPEND = "prepend"  # c is the first addend, as in ``acc = c; acc += a*b``
    SEPARATE = "separate"  # products are summed first, then added to c


@dataclass(frozen=True)
class ReductionConfig:
    input_format: FpFormat
    adder: AdderModel
    product_handling: ProductHandling = ProductHandling.EXACT
    product_mode: RoundingMode = RoundingMode.RN
    c_placement: CPlacement = CPlacement.APPEND

    def __post_init__(self):
        if self.product_handling is ProductHandling.EXACT and self.adder.variant is Variant.ALIGNED:
            width = self.adder.target.precision + self.adder.params.g
            if 2 * self.input_format.precision > width:
                raise DomainError(
                    f"exact {2 * self.input_format.precision}-bit products do not fit a "
                    f"{width}-bit aligned significand; raise g"
                )


def _products(a: Sequence[FpValue], b: Sequence[FpValue], config: ReductionConfig) -> list:
    if len(a) != len(b):
        raise ShapeError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        raise ShapeError("empty vectors")
    fmt = config.input_format
    for v in (*a, *b):
        if v.fmt != fmt:
            raise DomainError(f"operand in {v.fmt}, expected {fmt}")
    if config.product_handling is ProductHandling.EXACT:
        return [value_of(x) * value_of(y) for x, y in zip(a, b)]
    return [mul2(x, y, config.product_mode, config.adder.target) for x, y in zip(a, b)]


def dot(a: Sequence[FpValue], b: Sequence[FpValue], c: Optional[FpValue], config: ReductionConfig) -> FpValue:
    """``sum(a_i * b_i) + c`` reduced by the configured adder."""
    terms = _products(a, b, config)
    adder = config.adder
    if c is None:
        return adder.sum(terms)
    if config.c_placement is CPlacement.PREPEND:
        return adder.sum([c, *terms])
    if config.c_placement is CPlacement.SEPARATE:
        partial = adder.sum(terms)
        return adder.sum([partial, c])
    return adder.sum([*terms, c])


def _shape(m: Matrix) -> tuple:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ShapeError("ragged matrix")
    return rows, cols


def gemv(A: Matrix, x: Sequence[FpValue], config: ReductionConfig, y: Optional[Sequence[FpValue]] = None) -> List[FpValue]:
    rows, cols = _shape(A)
    if cols != len(x):
        raise ShapeError(f"A is {rows}x{cols} but x has {len(x)} entries")
    if y is not None and len(y) != rows:
        raise ShapeError(f"y has {len(y)} entries, expected {rows}")
    return [dot(A[i], x, None if y is None else y[i], config) for i in range(rows)]


def gemm(A: Matrix, B: Matrix, C: Optional[Matrix], config: ReductionConfig) -> Matrix:
    """``D = A B + C`` with every entry an independent :func:`dot`."""
    m, k = _shape(A)
    k2, n = _shape(B)
    if k != k2:
        raise ShapeError(f"cannot multiply {m}x{k} by {k2}x{n}")
    if C is not None and _shape(C) != (m, n):
        raise ShapeError(f"C must be {m}x{n}")
    columns = [[B[r][j] for r in range(k)] for j in range(n)]
    return [
        [dot(A[i], columns[j], None if C is None else C[i][j], config) for j in range(n)]
        for i in range(m)
    ]


def to_matrix(rows: Sequence[Sequence], fmt: FpFormat, mode: RoundingMode = RoundingMode.RN) -> Matrix:
    """Round a nested sequence of ints/Fractions/ExactValues into ``fmt``."""
    return [[to_value(x, fmt, mode) for x in row] for row in rows]


def identity(n: int, fmt: FpFormat) -> Matrix:
    one = round_value(ONE, fmt)
    return [[one if i == j else fmt.zero() for j in range(n)] for i in range(n)]
