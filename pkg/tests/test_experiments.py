from fractions import Fraction

import pytest

from monoadd import BINARY16, BINARY32, FpFormat, PivotBreakdown, RoundingMode, same_value, value_of, values
from monoadd import experiments as ex
from monoadd.formats import ExactValue

RN, RZ, RD, RU = RoundingMode.RN, RoundingMode.RZ, RoundingMode.RD, RoundingMode.RU
P3 = FpFormat(3, 3)


def fr(v):
    return value_of(v).to_fraction()


def test_splitmix64_reference_stream():
    rng = ex.SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(3)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
    ]


def test_rng_helpers():
    rng = ex.SplitMix64(1)
    assert all(0 <= rng.below(7) < 7 for _ in range(200))
    items = list(range(20))
    rng.shuffle(items)
    assert sorted(items) == list(range(20))
    vals = ex.random_values(ex.SplitMix64(2), 200, BINARY16, Fraction(0), Fraction(1, 1000))
    assert all(0 < fr(v) < Fraction(1, 1000) for v in vals)
    again = ex.random_values(ex.SplitMix64(2), 200, BINARY16, Fraction(0), Fraction(1, 1000))
    assert vals == again


def test_theorem5_p3():
    w = ex.counterexample_theorem5(P3)
    assert (fr(w.a), fr(w.b), fr(w.c), fr(w.eps)) == (Fraction(7, 8), 1, Fraction(5, 4), Fraction(1, 8))
    assert fr(w.sum_at_b) == 1 and fr(w.sum_at_a) == Fraction(5, 4)
    assert w.violated and w.violated_nofinal


def test_theorem5_binary32_at_2_24():
    w = ex.counterexample_theorem5(BINARY32, power=24)
    assert fr(w.b) == 2**24 and fr(w.eps) == 1
    assert fr(w.sum_at_a) == 2**24 + 2 and w.violated


def test_theorem5_negative_mirror_under_ru():
    w = ex.counterexample_theorem5(P3, RU)
    assert fr(w.b) == -1 and fr(w.sum_at_a) == Fraction(-5, 4)
    assert w.violated


def test_theorem5_without_room_is_degenerate():
    with pytest.raises(ex.DegenerateFormat):
        ex.counterexample_theorem5(P3, power=P3.emax + 1)


def test_theorem4_both_branches():
    w = ex.counterexample_theorem4(P3)
    assert fr(w.sum_at_a_nofinal) == Fraction(9, 8) > fr(w.sum_at_b_nofinal)
    assert w.violated_nofinal and not w.violated


def test_sweep_records_and_reverification():
    res = ex.monotonicity_sweep(P3, 8)
    assert fr(res.records[0].x1) == Fraction(1, 4)
    assert fr(res.records[-1].x1) == 14
    models = ex.default_sweep_models(P3)
    for model, label in zip(models, res.labels):
        assert res.violations[label]
        for pair in res.violations[label]:
            assert ex.reverify_violation(res, label, pair, model)
    assert res.violations["ieee754"] == []
    assert ex.plateaus(res.column("ieee754"))


def test_sweep_dat_headers():
    res = ex.monotonicity_sweep(P3, 4)
    text = ex.write_sweep_dat(res)
    assert text.splitlines()[0].split()[:5] == ["x1", "sum", "sum-ieee754", "sum-error", "sum-ieee754-error"]
    assert len(ex.sweep_jsonl(res, ex.default_sweep_models(P3)).splitlines()) == len(res.records)


def test_relative_error_zero_reference_and_overflow():
    z = ex.relative_error(P3.zero(), values(["0.25"], P3)[0])
    assert z.absolute and z.value == Fraction(1, 4)
    assert str(ex.relative_error(values([1], P3)[0], P3.inf(1))) == "inf"


def test_coordinate_monotonicity_finds_p3_violation():
    grid = [v for v in ex.enumerate_finite(P3) if fr(v) >= 0 and fr(v) <= 2]
    fill = values(["0.25"], P3)[0]
    viol = ex.coordinate_monotonicity(ex.growth_model(P3), grid, fill, 4)
    assert viol and fr(viol[0].x_lo) == Fraction(7, 4) and fr(viol[0].x_hi) == 2
    assert not ex.coordinate_monotonicity(ex.class3_model(P3), grid, fill, 4)


def test_blocked_sum_single_chunk_and_recursion():
    xs = values(["0.125"] * 10, P3)
    model = ex.growth_model(P3, order=ex.Order.AS_GIVEN)
    s, widest = ex.blocked_sum(xs, 4, model)
    assert s.fmt == P3 and widest >= 3
    assert same_value(ex.blocked_sum(xs[:1], 4, model)[0], xs[0])


def test_summation_small_run():
    res = ex.random_summation_experiment(ex.RngSpec(500), lengths=[16, 64], block_widths=[4, 64])
    assert [r.length for r in res.rows] == [16, 64]
    assert res.dat(4).splitlines()[0] == "length fp16-inc-ord fp16-dec-ord fp16-multi-term-add"
    assert 11 <= res.max_precision <= 11 + 6


def test_associativity_trivial_cases():
    one = ex.associativity_test(ex.RngSpec(500), n=1, permutations=5)
    assert one.range_class3.is_zero() and one.range_aligned.is_zero()
    small = ex.associativity_test(ex.RngSpec(500), n=64, permutations=200)
    assert small.range_aligned.is_zero()


def test_sqrt_and_interval_demos():
    rows = {(r.ordering, r.model): r for r in ex.sqrt_demo()}
    assert fr(rows[("small-first", "classIII")].radicand) == 4
    assert fr(rows[("small-first", "binary64")].radicand) == 2
    assert all(fr(rows[(o, "classIV-growth")].radicand) == -4 for o in ex.SQRT_ORDERINGS)
    rep = ex.interval_demo()
    assert [fr(v) for v in rep.a] == [16777216, 16777230]
    assert [fr(v) for v in rep.b] == [16777220, 16777222]
    assert rep.anomaly and rep.narrower


def test_count_examples():
    cfg = ex.CountConfig(BINARY32)
    a = values([5], BINARY32)
    assert ex.count_eigenvalues(a, [], values([4], BINARY32)[0], cfg) == 0
    assert ex.count_eigenvalues(a, [], values([6], BINARY32)[0], cfg) == 1
    d = values([1, 2, 3], BINARY32)
    b = values([0, 0], BINARY32)
    assert ex.count_eigenvalues(d, b, values(["2.5"], BINARY32)[0], cfg) == 2
    grown = ex.CountConfig(BINARY32, RN, ex.growth_model(BINARY32, final_round=False))
    assert ex.count_eigenvalues(d, b, values(["2.5"], BINARY32)[0], grown) == 2
    scan = ex.count_scan(d, b, values([0, "1.5", "2.5", 4], BINARY32), cfg)
    assert scan.counts == [0, 1, 2, 3] and scan.negative_intervals == []
    with pytest.raises(PivotBreakdown):
        ex.count_eigenvalues(a, [], values([5], BINARY32)[0], cfg)


def test_tridiagonal_count_matches_eigenvalues():
    # [[2, 1], [1, 2]] has eigenvalues 1 and 3
    cfg = ex.CountConfig(BINARY32)
    d, b = values([2, 2], BINARY32), values([1], BINARY32)
    counts = [ex.count_eigenvalues(d, b, values([x], BINARY32)[0], cfg) for x in ("0.5", "2.5", "3.5")]
    assert counts == [0, 1, 2]


def test_p4_growth_violations_need_a_wider_range():
    # on [0, 2] x {0.25}^3 the p=4 growth adder is monotone: the witness needs
    # x1 = 3.75 -> 4, outside that grid
    fmt = FpFormat(4, 3)
    grid = list(ex.enumerate_finite(fmt, lo=ExactValue(0), hi=ExactValue(2)))
    fill = values(["0.25"], fmt)[0]
    for mode in (RN, RZ, RD):
        assert not ex.coordinate_monotonicity(ex.growth_model(fmt, mode), grid, fill, 4)
        sweep = ex.monotonicity_sweep(fmt, 4, mode=mode)
        i, j = sweep.violations[sweep.labels[0]][0]
        assert (fr(sweep.records[i].x1), fr(sweep.records[j].x1)) == (Fraction(15, 4), 4)


def test_p4_growth_violation_with_mixed_fill():
    fmt = FpFormat(4, 3)
    model = ex.growth_model(fmt)
    rest = values(["0", "0.09375", "0.3125"], fmt)
    lo = model.sum(values(["1.875"], fmt) + rest)
    hi = model.sum(values(["2"], fmt) + rest)
    assert (fr(lo), fr(hi)) == (Fraction(5, 2), Fraction(9, 4))
