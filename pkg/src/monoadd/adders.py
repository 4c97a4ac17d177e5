"""Multi-term adder models.

Four behaviours are modelled behind :class:`AdderModel`:

* ``class1`` -- exact accumulation and one rounding (long accumulators and
  fused designs that round once);
* ``class3`` -- a chain of correctly rounded two-term additions, i.e. the
  software loop;
* ``class4growth`` -- additions without right-shift normalization, modelled
  as a working precision that grows by one bit whenever a partial sum reaches
  the next power of two above its larger operand;
* ``class4aligned`` -- the hardware pipeline: align every significand to the
  largest exponent, add in fixed point, normalize and round once.

Every model accepts finite :class:`FpValue` terms or exact products
(:class:`ExactValue`), so dot products can feed unrounded products in.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

from .errors import DomainError, InvalidOperand, ParseError
from .formats import ExactValue, FpFormat, FpValue, Kind, value_of
from .rounding import RoundingMode, parse_mode, round_value, round_with_flags

Term = Union[FpValue, ExactValue]


class Variant(enum.Enum):
    EXACT_SINGLE_ROUND = "class1"
    SEQUENTIAL = "class3"
    GROWTH = "class4growth"
    ALIGNED = "class4aligned"


class Order(enum.Enum):
    AS_GIVEN = "asgiven"
    INCREASING = "inc"
    DECREASING = "dec"


class ShiftOut(enum.Enum):
    TRUNCATE = "trunc"
    ROUND_NEAREST = "rn"
    STICKY = "sticky"


@dataclass(frozen=True)
class SequentialParams:
    order: Order = Order.AS_GIVEN


@dataclass(frozen=True)
class GrowthParams:
    """Parameters of the precision-growth model.

    ``initial_precision`` defaults to the target precision and ``max_precision``
    to ``initial + ceil(log2 n)``.  ``order`` is the evaluation order of the
    fold; the default processes the largest magnitude first, which is what an
    adder aligned to its largest addend does and makes the result independent
    of input order except among addends of equal magnitude.
    """

    initial_precision: Optional[int] = None
    max_precision: Optional[int] = None
    final_round: bool = True
    order: Order = Order.DECREASING


@dataclass(frozen=True)
class AlignedParams:
    g: int = 0
    carry_bits: Optional[int] = None
    shift_out: ShiftOut = ShiftOut.TRUNCATE
    final_mode: RoundingMode = RoundingMode.RN

    def __post_init__(self):
        if self.g < 0:
            raise DomainError("extra alignment bits must be >= 0")


@dataclass(frozen=True)
class TraceStep:
    precision: int  # bits in use after this addition
    carry_out: bool
    bits_discarded: int


@dataclass(frozen=True)
class AdderTrace:
    steps: Tuple[TraceStep, ...] = ()
    final_changed: bool = False
    alignment_discards: Tuple[int, ...] = ()  # per input term, aligned model only

    @property
    def max_precision(self) -> int:
        return max((s.precision for s in self.steps), default=0)

    @property
    def carry_events(self) -> int:
        return sum(s.carry_out for s in self.steps)


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


def _exact_terms(xs: Sequence[Term]) -> Tuple[list, Optional[int]]:
    """Exact values of the terms, plus the sign of an infinite term if any."""
    if len(xs) == 0:
        raise DomainError("at least one term is required")
    terms = []
    inf_signs = set()
    for x in xs:
        if isinstance(x, ExactValue):
            terms.append(x)
        elif x.kind is Kind.NAN:
            raise InvalidOperand("NaN term")
        elif x.kind is Kind.INF:
            inf_signs.add(x.sign)
        else:
            terms.append(value_of(x))
    if len(inf_signs) > 1:
        raise InvalidOperand("infinities of both signs")
    return terms, (inf_signs.pop() if inf_signs else None)


def _ordered(terms: list, order: Order) -> list:
    if order is Order.INCREASING:
        return sorted(terms, key=abs)
    if order is Order.DECREASING:
        return sorted(terms, key=abs, reverse=True)  # sort is stable under reverse
    return list(terms)


def sum_exact_single_round(xs: Sequence[Term], target: FpFormat, mode: RoundingMode = RoundingMode.RN) -> FpValue:
    """Exact sum, rounded once.  Independent of the order of ``xs``."""
    return _class1(xs, target, mode)[0]


def _class1(xs, target, mode):
    terms, inf = _exact_terms(xs)
    if inf is not None:
        return target.inf(inf), AdderTrace()
    total = terms[0]
    steps = []
    for t in terms[1:]:
        total = total + t
        steps.append(TraceStep(total.significant_bits(), False, 0))
    r = round_with_flags(total, target, mode)
    return r.value, AdderTrace(tuple(steps), r.inexact)


def sum_sequential(
    xs: Sequence[Term],
    params: SequentialParams,
    target: FpFormat,
    mode: RoundingMode = RoundingMode.RN,
) -> FpValue:
    """Left fold of correctly rounded two-term additions in the chosen order."""
    return _class3(xs, params, target, mode)[0]


def _class3(xs, params, target, mode):
    terms, inf = _exact_terms(xs)
    if inf is not None:
        return target.inf(inf), AdderTrace()
    terms = _ordered(terms, params.order)
    p = target.precision
    s = round_value(terms[0], target, mode)
    steps = []
    for t in terms[1:]:
        if not s.is_finite():
            break
        prev = value_of(s)
        r = round_with_flags(prev + t, target, mode)
        s = r.value
        carry = s.is_finite() and not s.is_zero() and prev.num != 0 and value_of(s).binade() > prev.binade()
        steps.append(TraceStep(p, carry, max(0, r.precision_bits_consumed - p) if r.inexact else 0))
    return s, AdderTrace(tuple(steps))


def sum_growth(
    xs: Sequence[Term],
    params: GrowthParams,
    target: FpFormat,
    mode: RoundingMode = RoundingMode.RN,
) -> Tuple[FpValue, AdderTrace]:
    """Fold of the precision-growth addition.

    Each step orders its operands so that ``|a| >= |b|`` (swapping only when
    strictly smaller), rounds ``a + b`` at the current working precision, or at
    one more bit (kept for later steps) when ``|a + b| >= 2^(1 + floor(log2|a|))``.
    Without ``final_round`` the result is returned in the working format.
    """
    terms, inf = _exact_terms(xs)
    if inf is not None:
        return target.inf(inf), AdderTrace()
    terms = _ordered(terms, params.order)
    w = params.initial_precision or target.precision
    cap = params.max_precision or w + ceil_log2(len(terms))
    s = round_value(terms[0], target.with_precision(w), mode)
    steps = []
    for t in terms[1:]:
        if not s.is_finite():
            break
        a, b = value_of(s), t
        if abs(a) < abs(b):
            a, b = b, a
        exact = a + b
        grow = a.num != 0 and exact.num != 0 and exact.binade() > a.binade()
        if grow and w < cap:
            w += 1
        r = round_with_flags(exact, target.with_precision(w), mode)
        s = r.value
        steps.append(TraceStep(w, grow, max(0, r.precision_bits_consumed - w) if r.inexact else 0))
    trace = AdderTrace(tuple(steps))
    if not params.final_round or not s.is_finite():
        return s, trace
    r = round_with_flags(value_of(s), target, mode)
    return r.value, AdderTrace(trace.steps, r.inexact)


def _round_half_even_shift(mag: int, shift: int) -> int:
    k = mag >> shift
    rem = mag & ((1 << shift) - 1)
    half = 1 << (shift - 1)
    if rem > half or (rem == half and k & 1):
        k += 1
    return k


def sum_aligned(
    xs: Sequence[Term],
    params: AlignedParams,
    target: FpFormat,
) -> Tuple[FpValue, AdderTrace]:
    """Align to the largest exponent, add in fixed point, round once.

    The accumulator keeps ``g`` fraction bits below the target's last
    significand bit at the largest exponent; bits shifted out below that are
    truncated, rounded per operand, or OR-ed into one sticky bit.
    """
    terms, inf = _exact_terms(xs)
    if inf is not None:
        return target.inf(inf), AdderTrace()
    n = len(terms)
    carry_bits = params.carry_bits if params.carry_bits is not None else ceil_log2(n)
    if carry_bits < ceil_log2(n):
        raise DomainError(f"{carry_bits} carry bits cannot hold a sum of {n} terms")
    p, g = target.precision, params.g
    nonzero = [t for t in terms if t.num]
    if not nonzero:
        return target.zero(1), AdderTrace(tuple(TraceStep(0, False, 0) for _ in terms[1:]), False, (0,) * n)
    e_max = max(max(t.binade() for t in nonzero), target.emin)
    lsb = e_max - (p - 1) - g
    width = 1 + carry_bits + (p - 1) + g

    aligned = []
    discards = []
    lost = ExactValue(0)
    for t in terms:
        mag, sc = abs(t.num), t.scale - lsb
        if mag == 0 or sc >= 0:
            k, dropped = mag << max(sc, 0), 0
        else:
            shift = -sc
            dropped = min(shift, mag.bit_length())
            if params.shift_out is ShiftOut.ROUND_NEAREST:
                k = _round_half_even_shift(mag, shift)
            else:
                k = mag >> shift
        k = -k if t.num < 0 else k
        lost = lost + (t - ExactValue(k, lsb))
        aligned.append(k)
        discards.append(dropped)

    acc = aligned[0]
    steps = []
    for k, dropped in zip(aligned[1:], discards[1:]):
        acc += k
        assert abs(acc).bit_length() <= width, "accumulator overflow"
        steps.append(TraceStep(abs(acc).bit_length(), abs(acc).bit_length() > p + g, dropped))

    if params.shift_out is ShiftOut.STICKY and any(discards):
        sign = 1 if acc > 0 or (acc == 0 and lost.num > 0) else -1
        total = ExactValue(2 * acc + sign, lsb - 1)
    else:
        total = ExactValue(acc, lsb)
    r = round_with_flags(total, target, params.final_mode)
    return r.value, AdderTrace(tuple(steps), r.inexact, tuple(discards))


@dataclass(frozen=True)
class AdderModel:
    """A configured multi-term adder.  ``reduce`` is pure and deterministic."""

    variant: Variant
    target: FpFormat
    mode: RoundingMode = RoundingMode.RN
    params: Union[None, SequentialParams, GrowthParams, AlignedParams] = field(default=None)

    def __post_init__(self):
        if self.params is None:
            defaults = {
                Variant.SEQUENTIAL: SequentialParams(),
                Variant.GROWTH: GrowthParams(),
                Variant.ALIGNED: AlignedParams(final_mode=self.mode),
            }
            object.__setattr__(self, "params", defaults.get(self.variant))

    def reduce(self, xs: Sequence[Term]) -> Tuple[FpValue, AdderTrace]:
        if self.variant is Variant.EXACT_SINGLE_ROUND:
            return _class1(xs, self.target, self.mode)
        if self.variant is Variant.SEQUENTIAL:
            return _class3(xs, self.params, self.target, self.mode)
        if self.variant is Variant.GROWTH:
            return sum_growth(xs, self.params, self.target, self.mode)
        return sum_aligned(xs, self.params, self.target)

    def sum(self, xs: Sequence[Term]) -> FpValue:
        return self.reduce(xs)[0]

    @property
    def rounding(self) -> RoundingMode:
        """Mode of the last rounding this model performs."""
        if self.variant is Variant.ALIGNED:
            return self.params.final_mode
        return self.mode

    def with_mode(self, mode: RoundingMode) -> "AdderModel":
        params = self.params
        if self.variant is Variant.ALIGNED:
            params = AlignedParams(params.g, params.carry_bits, params.shift_out, mode)
        return AdderModel(self.variant, self.target, mode, params)

    @property
    def label(self) -> str:
        v, prm = self.variant, self.params
        if v is Variant.EXACT_SINGLE_ROUND:
            return f"class1/{self.mode}"
        if v is Variant.SEQUENTIAL:
            return f"class3:{prm.order.value}/{self.mode}"
        if v is Variant.GROWTH:
            opts = [prm.order.value]
            if not prm.final_round:
                opts.append("nofinal")
            if prm.max_precision:
                opts.append(f"cap={prm.max_precision}")
            return f"class4growth:{','.join(opts)}/{self.mode}"
        return f"class4aligned:g={prm.g},shift={prm.shift_out.value},final={prm.final_mode}"

    def __str__(self) -> str:
        return self.label


_OPT_SPLIT = re.compile(r"[,:]")


def parse_adder(text: str, target: FpFormat, mode: RoundingMode = RoundingMode.RN) -> AdderModel:
    """Parse an adder config string.

    Accepted forms: ``class1``, ``class3[:asgiven|inc|dec]``,
    ``class4growth[:nofinal][:asgiven|inc|dec][:cap=N]`` and
    ``class4aligned[:g=G,shift=trunc|rn|sticky,final=rn|rz|rd|ru,carry=C]``.
    """
    head, _, rest = text.strip().lower().partition(":")
    opts = [o for o in _OPT_SPLIT.split(rest) if o] if rest else []
    try:
        if head == "class1":
            if opts:
                raise ParseError(f"class1 takes no options: {text!r}")
            return AdderModel(Variant.EXACT_SINGLE_ROUND, target, mode)
        if head == "class3":
            order = Order(opts[0]) if opts else Order.AS_GIVEN
            if len(opts) > 1:
                raise ParseError(f"too many options: {text!r}")
            return AdderModel(Variant.SEQUENTIAL, target, mode, SequentialParams(order))
        if head == "class4growth":
            final, order, cap = True, Order.DECREASING, None
            for o in opts:
                if o == "nofinal":
                    final = False
                elif o == "final":
                    final = True
                elif o.startswith("cap="):
                    cap = int(o[4:])
                else:
                    order = Order(o)
            return AdderModel(Variant.GROWTH, target, mode, GrowthParams(None, cap, final, order))
        if head == "class4aligned":
            kw = {"g": "0", "shift": "trunc", "final": str(mode), "carry": None}
            for o in opts:
                key, eq, val = o.partition("=")
                if not eq or key not in kw:
                    raise ParseError(f"bad aligned option {o!r}")
                kw[key] = val
            params = AlignedParams(
                g=int(kw["g"]),
                carry_bits=None if kw["carry"] is None else int(kw["carry"]),
                shift_out=ShiftOut(kw["shift"]),
                final_mode=parse_mode(kw["final"]),
            )
            return AdderModel(Variant.ALIGNED, target, mode, params)
    except (ValueError, DomainError) as exc:
        raise ParseError(f"bad adder config {text!r}: {exc}") from exc
    raise ParseError(f"unknown adder {text!r}; expected class1, class3, class4growth or class4aligned")
