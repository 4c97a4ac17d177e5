"""Counterexamples, sweeps and demos for the multi-term adder models."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .adders import (
    AdderModel,
    AlignedParams,
    GrowthParams,
    Order,
    SequentialParams,
    ShiftOut,
    Variant,
    sum_exact_single_round,
)
from .errors import DegenerateFormat, PivotBreakdown
from .formats import (
    BINARY16,
    BINARY32,
    BINARY64,
    ExactValue,
    FpFormat,
    FpValue,
    enumerate_finite,
    format_exact,
    next_down,
    next_up,
    pow2,
    same_value,
    value_of,
)
from .literals import to_value, values
from .rounding import RoundingMode, round_fraction, round_value
from .scalar import add2, div2, mul2

RN, RZ, RD, RU = RoundingMode.RN, RoundingMode.RZ, RoundingMode.RD, RoundingMode.RU

REFERENCE_FORMAT = BINARY64

# --------------------------------------------------------------------------
# random numbers

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator; identical stream on every platform."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def unit_open(self) -> Fraction:
        """Exact uniform draw from the open interval (0, 1) on a 2^-54 grid."""
        return Fraction(2 * (self.next_u64() >> 11) + 1, 1 << 54)

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n)."""
        limit = (1 << 64) - (1 << 64) % n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class RngSpec:
    seed: int
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1, 1000)
    algorithm: str = "splitmix64"

    def generator(self) -> SplitMix64:
        if self.algorithm != "splitmix64":
            raise ValueError(f"unsupported generator {self.algorithm!r}")
        return SplitMix64(self.seed)

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm, "seed": self.seed, "range": [str(self.lo), str(self.hi)]}


def random_values(rng: SplitMix64, count: int, fmt: FpFormat, lo: Fraction, hi: Fraction) -> List[FpValue]:
    """``count`` values of ``fmt`` strictly inside ``(lo, hi)``, rounded to nearest."""
    out = []
    width = hi - lo
    while len(out) < count:
        v = round_fraction(lo + rng.unit_open() * width, fmt, RN)
        x = value_of(v).to_fraction()
        if lo < x < hi:
            out.append(v)
    return out


# --------------------------------------------------------------------------
# error measures


@dataclass(frozen=True)
class ErrorMeasure:
    value: Optional[Fraction]  # None when the computed sum is infinite
    absolute: bool = False  # reference was zero: absolute error reported

    def __float__(self) -> float:
        return float("inf") if self.value is None else float(self.value)

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        return f"{float(self.value):.17g}"


def relative_error(reference: FpValue, computed: FpValue) -> ErrorMeasure:
    """``|s - s_hat| / |s|``, or ``|s_hat|`` with a flag when ``s == 0``."""
    if not computed.is_finite() or not reference.is_finite():
        return ErrorMeasure(None)
    s = value_of(reference).to_fraction()
    diff = abs(s - value_of(computed).to_fraction())
    if s == 0:
        return ErrorMeasure(diff, absolute=True)
    return ErrorMeasure(diff / abs(s))


def reference_sum(xs: Sequence) -> FpValue:
    """Exact sum rounded once to the emulated binary64 format."""
    return sum_exact_single_round(xs, REFERENCE_FORMAT, RN)


# --------------------------------------------------------------------------
# counterexamples


def growth_model(fmt: FpFormat, mode: RoundingMode = RN, final_round: bool = True, order: Order = Order.DECREASING) -> AdderModel:
    return AdderModel(Variant.GROWTH, fmt, mode, GrowthParams(final_round=final_round, order=order))


def class3_model(fmt: FpFormat, mode: RoundingMode = RN, order: Order = Order.AS_GIVEN) -> AdderModel:
    return AdderModel(Variant.SEQUENTIAL, fmt, mode, SequentialParams(order))


def class1_model(fmt: FpFormat, mode: RoundingMode = RN) -> AdderModel:
    return AdderModel(Variant.EXACT_SINGLE_ROUND, fmt, mode)


@dataclass
class Witness:
    fmt: FpFormat
    mode: RoundingMode
    a: FpValue
    b: FpValue
    c: FpValue
    eps: FpValue
    n_terms: int
    sum_at_b: FpValue
    sum_at_a: FpValue
    sum_at_b_nofinal: FpValue
    sum_at_a_nofinal: FpValue

    @property
    def violated(self) -> bool:
        """True when moving the first addend from ``b`` down to ``a`` raised the sum."""
        if self.a < self.b:
            return self.sum_at_a > self.sum_at_b
        return self.sum_at_a < self.sum_at_b

    @property
    def violated_nofinal(self) -> bool:
        if self.a < self.b:
            return self.sum_at_a_nofinal > self.sum_at_b_nofinal
        return self.sum_at_a_nofinal < self.sum_at_b_nofinal

    def to_dict(self) -> dict:
        return {
            "format": str(self.fmt),
            "mode": str(self.mode),
            "terms": self.n_terms,
            "a": str(self.a),
            "b": str(self.b),
            "c": str(self.c),
            "eps": str(self.eps),
            "sum_at_b": str(self.sum_at_b),
            "sum_at_a": str(self.sum_at_a),
            "sum_at_b_nofinal": str(self.sum_at_b_nofinal),
            "sum_at_a_nofinal": str(self.sum_at_a_nofinal),
            "violated": self.violated,
            "violated_nofinal": self.violated_nofinal,
        }


def _witness_triple(fmt: FpFormat, power: Optional[int]) -> Tuple[FpValue, FpValue, FpValue, FpValue]:
    """``(a, b, c, eps)`` with ``b`` a power of two, ``a``/``c`` its neighbours and
    ``eps = (c - b) / 2`` representable."""
    candidates = [power] if power is not None else [0, *range(1, fmt.emax + 1), *range(-1, fmt.emin, -1)]
    for k in candidates:
        if not fmt.emin < k <= fmt.emax:
            continue
        b = round_value(pow2(k), fmt)
        a, c = next_down(b), next_up(b)
        if not c.is_finite():
            continue
        gap = value_of(c) - value_of(b)
        half_gap = ExactValue(gap.num, gap.scale - 1)
        eps = round_value(half_gap, fmt)
        if value_of(eps) != half_gap or value_of(a) + half_gap != value_of(b):
            continue
        return a, b, c, eps
    raise DegenerateFormat(f"{fmt} has no power of two with the required neighbours")


def counterexample_theorem5(
    fmt: FpFormat,
    mode: RoundingMode = RN,
    negative: Optional[bool] = None,
    power: Optional[int] = None,
    n_terms: int = 4,
) -> Witness:
    """Instantiate the four-term construction ``[x, eps, eps, eps]``.

    With ``x = b`` every step stays at precision ``p`` and the sum is ``b``;
    with ``x = a`` the first addition lands on the power of two ``b``, the
    precision grows, and the remaining ``eps`` accumulate to ``c``.  Under RU
    the mirrored negative construction is used.
    """
    if negative is None:
        negative = mode is RU
    a, b, c, eps = _witness_triple(fmt, power)
    if negative:
        a, b, c, eps = -a, -b, -c, -eps
    tail = [eps] * (n_terms - 1)
    model = growth_model(fmt, mode)
    raw = growth_model(fmt, mode, final_round=False)
    w = Witness(
        fmt, mode, a, b, c, eps, n_terms,
        sum_at_b=model.sum([b, *tail]),
        sum_at_a=model.sum([a, *tail]),
        sum_at_b_nofinal=raw.sum([b, *tail]),
        sum_at_a_nofinal=raw.sum([a, *tail]),
    )
    if n_terms == 4 and not theorem5_holds(w):
        raise DegenerateFormat(f"construction did not produce a violation in {fmt} under {mode}")
    return w


def theorem5_holds(w: Witness) -> bool:
    """The exact shape of the construction: sums ``b`` and ``c``, both with
    and without the final rounding."""
    return (
        same_value(w.sum_at_b, w.b)
        and same_value(w.sum_at_a, w.c)
        and same_value(w.sum_at_b_nofinal, w.b)
        and same_value(w.sum_at_a_nofinal, w.c)
    )


def counterexample_theorem4(fmt: FpFormat, mode: RoundingMode = RN, power: Optional[int] = None) -> Witness:
    """Three-term version: non-monotone without, monotone with final rounding."""
    return counterexample_theorem5(fmt, mode, power=power, n_terms=3)


# --------------------------------------------------------------------------
# monotonicity sweeps


@dataclass
class SweepRecord:
    x1: FpValue
    sums: Dict[str, FpValue]
    sum_ieee754: FpValue
    reference: FpValue
    errors: Dict[str, ErrorMeasure]
    ieee754_error: ErrorMeasure


@dataclass
class SweepResult:
    fmt: FpFormat
    n_terms: int
    fill: FpValue
    labels: List[str]
    records: List[SweepRecord]
    violations: Dict[str, List[Tuple[int, int]]]

    def column(self, label: str) -> List[FpValue]:
        if label == "ieee754":
            return [r.sum_ieee754 for r in self.records]
        return [r.sums[label] for r in self.records]


def decreasing_pairs(seq: Sequence[FpValue]) -> List[Tuple[int, int]]:
    """Indices ``(i, i+1)`` where the sequence strictly decreases."""
    return [(i, i + 1) for i in range(len(seq) - 1) if seq[i + 1] < seq[i]]


def default_sweep_models(fmt: FpFormat, mode: RoundingMode = RN) -> List[AdderModel]:
    return [growth_model(fmt, mode), growth_model(fmt, mode, final_round=False)]


def monotonicity_sweep(
    fmt: FpFormat,
    n_terms: int,
    models: Optional[Sequence[AdderModel]] = None,
    fill: Fraction = Fraction(1, 4),
    x1_from: Optional[Fraction] = None,
    mode: RoundingMode = RN,
) -> SweepResult:
    """Sum ``[x1, fill, ..., fill]`` for every representable ``x1`` upward.

    ``x1`` starts at ``fill`` unless ``x1_from`` says otherwise and walks
    through consecutive values up to the largest finite one.  The IEEE loop
    (Class III, in order) and an emulated-binary64 reference are always
    computed.
    """
    models = list(models) if models is not None else default_sweep_models(fmt, mode)
    fill_v = to_value(fill, fmt)
    start = to_value(fill if x1_from is None else x1_from, fmt, RU)
    ieee = class3_model(fmt, mode)
    labels = [m.label for m in models]
    records = []
    for x1 in enumerate_finite(fmt, lo=value_of(start)):
        xs = [x1] + [fill_v] * (n_terms - 1)
        ref = reference_sum(xs)
        sums = {m.label: m.sum(xs) for m in models}
        s3 = ieee.sum(xs)
        records.append(
            SweepRecord(
                x1, sums, s3, ref,
                {k: relative_error(ref, v) for k, v in sums.items()},
                relative_error(ref, s3),
            )
        )
    violations = {}
    for label in [*labels, "ieee754"]:
        col = [r.sum_ieee754 for r in records] if label == "ieee754" else [r.sums[label] for r in records]
        violations[label] = decreasing_pairs(col)
    return SweepResult(fmt, n_terms, fill_v, labels, records, violations)


def reverify_violation(result: SweepResult, label: str, pair: Tuple[int, int], model: AdderModel) -> bool:
    """Recompute both flagged vectors and confirm the decrease bit-exactly."""
    i, j = pair
    fill = [result.fill] * (result.n_terms - 1)
    lo = model.sum([result.records[i].x1, *fill])
    hi = model.sum([result.records[j].x1, *fill])
    return lo == result.records[i].sums[label] and hi == result.records[j].sums[label] and hi < lo


@dataclass
class CoordinateViolation:
    position: int
    x_lo: FpValue
    x_hi: FpValue
    sum_lo: FpValue
    sum_hi: FpValue


def coordinate_monotonicity(
    model: AdderModel,
    grid: Sequence[FpValue],
    fill: FpValue,
    n_terms: int = 4,
) -> List[CoordinateViolation]:
    """Vary each coordinate over ``grid`` (others fixed at ``fill``) and list
    every adjacent pair where raising that coordinate lowered the sum."""
    grid = sorted(grid)
    out = []
    for pos in range(n_terms):
        prev_x, prev_s = None, None
        for x in grid:
            xs = [fill] * n_terms
            xs[pos] = x
            s = model.sum(xs)
            if prev_s is not None and s < prev_s:
                out.append(CoordinateViolation(pos, prev_x, x, prev_s, s))
            prev_x, prev_s = x, s
    return out


def plateaus(seq: Sequence[FpValue], min_length: int = 3) -> List[Tuple[int, int]]:
    """Maximal runs ``[start, end]`` of equal consecutive values of length >= ``min_length``."""
    out = []
    start = 0
    for i in range(1, len(seq) + 1):
        if i == len(seq) or not same_value(seq[i], seq[start]):
            if i - start >= min_length:
                out.append((start, i - 1))
            start = i
    return out


def write_sweep_dat(result: SweepResult, growth_label: Optional[str] = None, raw_label: Optional[str] = None) -> str:
    """Whitespace-separated table with the plot column names."""
    growth_label = growth_label or result.labels[0]
    header = ["x1", "sum", "sum-ieee754", "sum-error", "sum-ieee754-error"]
    if raw_label:
        header += ["sum-nofinal", "sum-nofinal-error"]
    header.append("reference")
    lines = [" ".join(header)]
    for r in result.records:
        row = [str(r.x1), str(r.sums[growth_label]), str(r.sum_ieee754), str(r.errors[growth_label]), str(r.ieee754_error)]
        if raw_label:
            row += [str(r.sums[raw_label]), str(r.errors[raw_label])]
        row.append(str(r.reference))
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def sweep_jsonl(result: SweepResult, models: Sequence[AdderModel]) -> str:
    """One JSON object per record, including the adder traces."""
    lines = []
    fill = [result.fill] * (result.n_terms - 1)
    for r in result.records:
        traces = {}
        for m in models:
            _, trace = m.reduce([r.x1, *fill])
            traces[m.label] = {
                "precision": [s.precision for s in trace.steps],
                "carry_out": [s.carry_out for s in trace.steps],
                "bits_discarded": [s.bits_discarded for s in trace.steps],
                "final_changed": trace.final_changed,
            }
        lines.append(json.dumps({
            "x1": str(r.x1),
            "sums": {k: str(v) for k, v in r.sums.items()},
            "sum_ieee754": str(r.sum_ieee754),
            "reference": str(r.reference),
            "errors": {k: str(v) for k, v in r.errors.items()},
            "ieee754_error": str(r.ieee754_error),
            "reference_zero": any(e.absolute for e in r.errors.values()),
            "traces": traces,
        }, sort_keys=True))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# random summation (ordering and blocked multi-term adders)


def blocked_sum(xs: Sequence[FpValue], width: int, model: AdderModel) -> Tuple[FpValue, int]:
    """Reduce ``xs`` in chunks of ``width`` and feed the chunk sums back to
    the same adder until one value remains.  Returns the sum and the widest
    working precision seen in any trace."""
    level = list(xs)
    widest = model.target.precision
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level), width):
            s, trace = model.reduce(level[i:i + width])
            widest = max(widest, trace.max_precision)
            nxt.append(s)
        level = nxt
    return level[0], widest


@dataclass
class SummationRow:
    length: int
    inc: ErrorMeasure
    dec: ErrorMeasure
    blocked: Dict[int, ErrorMeasure]
    blocked_precision: Dict[int, int]


@dataclass
class SummationResult:
    rng: RngSpec
    fmt: FpFormat
    widths: Tuple[int, ...]
    rows: List[SummationRow]
    recombination: str = "fixed-width chunks; chunk sums re-fed to the same adder until one value remains"

    @property
    def max_precision(self) -> int:
        return max(max(r.blocked_precision.values()) for r in self.rows)

    def dat(self, width: int) -> str:
        lines = ["length fp16-inc-ord fp16-dec-ord fp16-multi-term-add"]
        for r in self.rows:
            lines.append(f"{r.length} {r.inc} {r.dec} {r.blocked[width]}")
        return "\n".join(lines) + "\n"


DEFAULT_LENGTHS = tuple(1 << k for k in range(4, 15))


def random_summation_experiment(
    rng: RngSpec,
    lengths: Sequence[int] = DEFAULT_LENGTHS,
    block_widths: Sequence[int] = (4, 64, 512, 1024),
    fmt: FpFormat = BINARY16,
) -> SummationResult:
    """Relative error of increasing-order and decreasing-order recursive
    summation and of blocked growth-model adders, against binary64.

    One stream of ``max(lengths)`` values is drawn; each length uses a prefix.
    """
    pool = random_values(rng.generator(), max(lengths), fmt, rng.lo, rng.hi)
    inc = class3_model(fmt, RN, Order.INCREASING)
    dec = class3_model(fmt, RN, Order.DECREASING)
    rows = []
    for n in lengths:
        xs = pool[:n]
        ref = reference_sum(xs)
        blocked, widest = {}, {}
        for w in block_widths:
            model = AdderModel(Variant.GROWTH, fmt, RN, GrowthParams(final_round=True, order=Order.AS_GIVEN))
            s, widest[w] = blocked_sum(xs, w, model)
            blocked[w] = relative_error(ref, s)
        rows.append(SummationRow(n, relative_error(ref, inc.sum(xs)), relative_error(ref, dec.sum(xs)), blocked, widest))
    return SummationResult(rng, fmt, tuple(block_widths), rows)


# --------------------------------------------------------------------------
# associativity


@dataclass
class AssociativityResult:
    n: int
    permutations: int
    range_class3: ExactValue
    range_aligned: ExactValue
    range_growth: ExactValue
    range_growth_asgiven: ExactValue
    binades: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "permutations": self.permutations,
            "range_classIII": format_exact(self.range_class3),
            "range_classIV_aligned": format_exact(self.range_aligned),
            "range_classIV_growth": format_exact(self.range_growth),
            "range_classIV_growth_asgiven": format_exact(self.range_growth_asgiven),
            "input_binades": self.binades,
        }


def _spread(results: Iterable[FpValue]) -> ExactValue:
    vals = [value_of(v) for v in results]
    return max(vals) - min(vals)


def associativity_test(
    rng: RngSpec,
    n: int = 64,
    permutations: int = 10**4,
    fmt: FpFormat = BINARY16,
    aligned: AlignedParams = AlignedParams(g=3, shift_out=ShiftOut.TRUNCATE, final_mode=RN),
) -> AssociativityResult:
    """Spread (max - min) of sums over random permutations of one vector."""
    gen = rng.generator()
    xs = random_values(gen, n, fmt, rng.lo, rng.hi)
    models = {
        "class3": class3_model(fmt),
        "aligned": AdderModel(Variant.ALIGNED, fmt, aligned.final_mode, aligned),
        "growth": growth_model(fmt),
        "growth_asgiven": growth_model(fmt, order=Order.AS_GIVEN),
    }
    outs = {k: [] for k in models}
    perm = list(xs)
    for _ in range(permutations):
        gen.shuffle(perm)
        for k, m in models.items():
            outs[k].append(m.sum(perm))
    binades = len({value_of(x).binade() for x in xs if not x.is_zero()})
    return AssociativityResult(
        n, permutations,
        _spread(outs["class3"]), _spread(outs["aligned"]),
        _spread(outs["growth"]), _spread(outs["growth_asgiven"]),
        binades,
    )


# --------------------------------------------------------------------------
# application demos

SQRT_ORDERINGS = {
    "small-first": ([1] * 7 + [16777216], [1] * 7 + [16777214]),
    "large-first": ([16777216] + [1] * 7, [16777214] + [1] * 7),
    "mixed": ([16777216] + [1] * 7, [1] * 7 + [16777214]),
}


@dataclass
class RadicandRow:
    ordering: str
    model: str
    sum_a: FpValue
    sum_b: FpValue
    radicand: FpValue

    @property
    def negative(self) -> bool:
        return self.radicand < self.radicand.fmt.zero()


def sqrt_demo(fmt: FpFormat = BINARY32) -> List[RadicandRow]:
    """``sum(a) - sum(b)`` under the IEEE loop, the 8-term growth adder and
    an emulated binary64 reference, for each of the three orderings."""
    rows = []
    models = [
        ("classIII", class3_model(fmt), fmt),
        ("classIV-growth", growth_model(fmt), fmt),
        ("binary64", class1_model(REFERENCE_FORMAT), REFERENCE_FORMAT),
    ]
    for name, (a_lit, b_lit) in SQRT_ORDERINGS.items():
        a, b = values(a_lit, fmt), values(b_lit, fmt)
        for label, model, out_fmt in models:
            sa, sb = model.sum(a), model.sum(b)
            rad = add2(sa, -sb, RN, out_fmt)
            rows.append(RadicandRow(name, label, sa, sb, rad))
    return rows


@dataclass
class IntervalReport:
    a: Tuple[FpValue, FpValue]
    b: Tuple[FpValue, FpValue]

    @property
    def anomaly(self) -> bool:
        """Lower end rose although one addend decreased."""
        return self.b[0] > self.a[0]

    @property
    def narrower(self) -> bool:
        wa = value_of(self.a[1]) - value_of(self.a[0])
        wb = value_of(self.b[1]) - value_of(self.b[0])
        return wb < wa


def interval_demo(fmt: FpFormat = BINARY32) -> IntervalReport:
    """Interval sums via RD (lower) and RU (upper) with the 8-term growth adder."""
    a = values([16777216] + [1] * 7, fmt)
    b = values([16777214] + [1] * 7, fmt)
    lo, hi = growth_model(fmt, RD), growth_model(fmt, RU)
    return IntervalReport((lo.sum(a), hi.sum(a)), (lo.sum(b), hi.sum(b)))


# --------------------------------------------------------------------------
# eigenvalue count of a symmetric tridiagonal matrix


@dataclass(frozen=True)
class CountConfig:
    """Arithmetic for the count kernel.

    Without an ``adder`` the update ``a_i - x - b^2/d`` is two IEEE
    subtractions; with one it is a single three-term addition.
    """

    fmt: FpFormat
    mode: RoundingMode = RN
    adder: Optional[AdderModel] = None


def count_eigenvalues(diag: Sequence[FpValue], offdiag: Sequence[FpValue], x: FpValue, config: CountConfig) -> int:
    """Number of eigenvalues of ``T`` smaller than ``x`` (Sturm count)."""
    if len(diag) < 1 or len(offdiag) != len(diag) - 1:
        raise ValueError("need n diagonal and n-1 off-diagonal entries")
    fmt, mode = config.fmt, config.mode
    count = 0
    d = round_value(ExactValue(1), fmt)
    for i, a in enumerate(diag):
        if i == 0:
            q = fmt.zero()
        else:
            q = div2(mul2(offdiag[i - 1], offdiag[i - 1], mode, fmt), d, mode, fmt)
        if config.adder is None:
            d = add2(add2(a, -x, mode, fmt), -q, mode, fmt)
        else:
            d = config.adder.sum([a, -x, -q])
        if d.is_zero():
            raise PivotBreakdown(f"zero pivot at step {i + 1} for x = {x}")
        if d < d.fmt.zero():
            count += 1
    return count


@dataclass
class CountScan:
    xs: List[FpValue]
    counts: List[int]

    @property
    def negative_intervals(self) -> List[Tuple[FpValue, FpValue, int]]:
        """``(x_a, x_b, count(x_b) - count(x_a))`` wherever the difference is negative."""
        out = []
        for i in range(len(self.xs) - 1):
            delta = self.counts[i + 1] - self.counts[i]
            if delta < 0:
                out.append((self.xs[i], self.xs[i + 1], delta))
        return out


def count_scan(diag, offdiag, xs: Sequence[FpValue], config: CountConfig) -> CountScan:
    xs = sorted(xs)
    return CountScan(list(xs), [count_eigenvalues(diag, offdiag, x, config) for x in xs])
