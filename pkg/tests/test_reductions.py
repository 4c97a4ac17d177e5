import pytest

from monoadd import (
    BINARY16,
    BINARY32,
    AdderModel,
    AlignedParams,
    CPlacement,
    DomainError,
    FpFormat,
    ProductHandling,
    ReductionConfig,
    RoundingMode,
    SequentialParams,
    ShapeError,
    ShiftOut,
    Variant,
    dot,
    gemm,
    gemv,
    same_value,
    sum_exact_single_round,
    value_of,
    values,
)
from monoadd.reductions import identity, to_matrix

RN, RZ = RoundingMode.RN, RoundingMode.RZ
A100_ADDER = AdderModel(Variant.ALIGNED, BINARY32, RZ, AlignedParams(1, None, ShiftOut.TRUNCATE, RZ))
A100 = ReductionConfig(BINARY16, A100_ADDER)


def fr(v):
    return value_of(v).to_fraction()


def test_dot_a100():
    ones = values([1] * 8, BINARY16)
    assert fr(dot(ones, ones, values([33554430], BINARY32)[0], A100)) == 33554436
    assert fr(dot(ones, ones, values([33554432], BINARY32)[0], A100)) == 33554432


def test_gemm_a100():
    A = to_matrix([[1] * 8] * 8, BINARY16)
    B = to_matrix([[1] * 4] * 8, BINARY16)
    C = to_matrix([[33554430, 33554432, 0, 0]] * 8, BINARY32)
    D = gemm(A, B, C, A100)
    assert [fr(v) for v in D[0]] == [33554436, 33554432, 8, 8]
    assert len(D) == 8


def test_class1_dot_with_ones_is_single_rounding():
    config = ReductionConfig(BINARY32, AdderModel(Variant.EXACT_SINGLE_ROUND, BINARY32))
    a = values(["1.5", "16777216", "0.25", "3"], BINARY32)
    ones = values([1] * 4, BINARY32)
    c = values(["0.75"], BINARY32)[0]
    assert same_value(dot(a, ones, c, config), sum_exact_single_round(a + [c], BINARY32, RN))


def test_identity_gemm_reproduces_b():
    fmt = FpFormat(5, 4)
    config = ReductionConfig(fmt, AdderModel(Variant.SEQUENTIAL, fmt))
    B = to_matrix([["0.5", "-3"], ["7", "0.0625"], ["1", "2"]], fmt)
    D = gemm(identity(3, fmt), B, None, config)
    assert all(same_value(d, b) for rd, rb in zip(D, B) for d, b in zip(rd, rb))


def test_c_placement_changes_class3_result():
    fmt = BINARY32
    a = values([1] * 7, fmt)
    c = values([16777216], fmt)[0]
    adder = AdderModel(Variant.SEQUENTIAL, fmt, RN, SequentialParams())
    first = ReductionConfig(fmt, adder, c_placement=CPlacement.PREPEND)
    last = ReductionConfig(fmt, adder, c_placement=CPlacement.APPEND)
    assert fr(dot(a, a, c, first)) == 16777216
    assert fr(dot(a, a, c, last)) == 16777224
    sep = ReductionConfig(fmt, adder, c_placement=CPlacement.SEPARATE)
    assert fr(dot(a, a, c, sep)) == 16777224


def test_rounded_products():
    fmt = FpFormat(3, 3)
    config = ReductionConfig(fmt, AdderModel(Variant.EXACT_SINGLE_ROUND, fmt), ProductHandling.ROUNDED)
    a = values(["1.25"], fmt)
    c = values(["0.125"], fmt)[0]
    assert fr(dot(a, a, c, config)) == 1.5
    exact = ReductionConfig(fmt, AdderModel(Variant.EXACT_SINGLE_ROUND, fmt))
    assert fr(dot(a, a, c, exact)) == 1.75


def test_gemv():
    fmt = BINARY32
    config = ReductionConfig(fmt, AdderModel(Variant.EXACT_SINGLE_ROUND, fmt))
    A = to_matrix([[1, 2], [3, 4]], fmt)
    y = gemv(A, values([1, 1], fmt), config, values([10, 20], fmt))
    assert [fr(v) for v in y] == [13, 27]


def test_shape_and_domain_errors():
    fmt = BINARY32
    config = ReductionConfig(fmt, AdderModel(Variant.EXACT_SINGLE_ROUND, fmt))
    with pytest.raises(ShapeError):
        dot(values([1, 2], fmt), values([1], fmt), None, config)
    with pytest.raises(ShapeError):
        dot([], [], None, config)
    with pytest.raises(ShapeError):
        gemm(to_matrix([[1, 2]], fmt), to_matrix([[1, 2]], fmt), None, config)
    with pytest.raises(ShapeError):
        gemm(to_matrix([[1, 2], [3]], fmt), to_matrix([[1], [2]], fmt), None, config)
    with pytest.raises(DomainError):
        dot(values([1], BINARY16), values([1], BINARY16), None, config)
    with pytest.raises(DomainError):
        # 22-bit products cannot sit in a 12-bit aligned significand
        ReductionConfig(BINARY16, AdderModel(Variant.ALIGNED, BINARY16, RN, AlignedParams(g=1)))
