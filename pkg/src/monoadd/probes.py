"""Probe GEMMs that tell the adder classes apart, and a matching classifier.

A probe sits at a power of two ``P`` of the accumulation format.  Its two
output entries share ``n`` small products ``ulp(next_down(P)) / 2^j`` and
differ only in the accumulator term: ``c0 = next_down(P)`` and ``c1 = P``.
Round-once adders never let the larger ``c`` give the smaller result; an
aligned accumulator with ``g`` extra bits drops the small products once
``j > g`` relative to the larger exponent, which is how ``g`` is recovered.
Negative mirrors separate the directed rounding modes.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .adders import (
    AdderModel,
    AlignedParams,
    GrowthParams,
    Order,
    SequentialParams,
    ShiftOut,
    Variant,
)
from .errors import ParseError
from .formats import BINARY16, BINARY32, FpFormat, FpValue, next_down, pow2, same_value
from .literals import parse_literal, to_value
from .reductions import CPlacement, Matrix, ReductionConfig, gemm
from .rounding import ALL_MODES, round_value


@dataclass
class Probe:
    probe_id: str
    power: int
    shift: int
    sign: int
    A: Matrix
    B: Matrix
    C: Matrix
    predictions: Dict[str, Tuple[FpValue, FpValue]] = field(default_factory=dict)


@dataclass(frozen=True)
class Candidate:
    """One hypothesis about a device: an adder plus where ``c`` enters."""

    family: str
    config: ReductionConfig

    @property
    def label(self) -> str:
        adder = self.config.adder
        suffix = "" if self.config.c_placement is CPlacement.APPEND else f"+c:{self.config.c_placement.value}"
        return adder.label + suffix


def candidate_models(input_format: FpFormat, acc_format: FpFormat, max_g: int = 3) -> List[Candidate]:
    out = []
    for mode in ALL_MODES:
        adder = AdderModel(Variant.EXACT_SINGLE_ROUND, acc_format, mode)
        out.append(Candidate("ClassI/II", ReductionConfig(input_format, adder)))
    for mode in ALL_MODES:
        # the software loop: acc = c; acc = fl(acc + a*b) ...
        adder = AdderModel(Variant.SEQUENTIAL, acc_format, mode, SequentialParams(Order.AS_GIVEN))
        out.append(Candidate("ClassIII", ReductionConfig(input_format, adder, c_placement=CPlacement.PREPEND)))
    for mode in ALL_MODES:
        for final in (True, False):
            adder = AdderModel(Variant.GROWTH, acc_format, mode, GrowthParams(final_round=final))
            out.append(Candidate("ClassIV(growth)", ReductionConfig(input_format, adder)))
    for g in range(max_g + 1):
        if 2 * input_format.precision > acc_format.precision + g:
            continue
        for shift in ShiftOut:
            for mode in ALL_MODES:
                adder = AdderModel(Variant.ALIGNED, acc_format, mode, AlignedParams(g, None, shift, mode))
                out.append(Candidate("ClassIV(aligned)", ReductionConfig(input_format, adder)))
    return out


def _split_power(x: int, fmt: FpFormat) -> Optional[Tuple[FpValue, FpValue]]:
    """Two values of ``fmt`` whose product is exactly ``2^x``."""
    hi, lo = -((-x) // 2), x // 2
    a, b = round_value(pow2(hi), fmt), round_value(pow2(lo), fmt)
    if not (a.is_finite() and b.is_finite()) or a.is_zero() or b.is_zero():
        return None
    if a.exact != pow2(hi) or b.exact != pow2(lo):
        return None
    return a, b


def feasible_powers(input_format: FpFormat, acc_format: FpFormat, max_shift: int) -> List[int]:
    p = acc_format.precision
    out = []
    for k in range(acc_format.emin + 1, acc_format.emax + 1):
        if all(_split_power(k - p - j, input_format) for j in range(0, max_shift + 1)):
            out.append(k)
    return out


def default_powers(input_format: FpFormat, acc_format: FpFormat, max_shift: int) -> List[int]:
    ks = feasible_powers(input_format, acc_format, max_shift)
    if not ks:
        return []
    picks = {ks[0], ks[-1], ks[len(ks) // 2], acc_format.precision + 1, 1}
    return sorted(k for k in picks if k in ks)


def generate_probe_suite(
    input_format: FpFormat = BINARY16,
    acc_format: FpFormat = BINARY32,
    n_terms: int = 8,
    powers: Optional[Sequence[int]] = None,
    shifts: Sequence[int] = (0, 1, 2, 3, 4),
    signs: Sequence[int] = (1, -1),
    candidates: Optional[List[Candidate]] = None,
) -> List[Probe]:
    """Probe instances with the output each candidate model predicts."""
    if powers is None:
        powers = default_powers(input_format, acc_format, max(shifts))
    if candidates is None:
        candidates = candidate_models(input_format, acc_format)
    p = acc_format.precision
    probes = []
    for k in powers:
        P = round_value(pow2(k), acc_format)
        below = next_down(P)
        for j in shifts:
            pair = _split_power(k - p - j, input_format)
            if pair is None:
                raise ParseError(f"2^{k - p - j} is not a product of two {input_format} values")
            a, b = pair
            for sign in signs:
                A = [[a if sign > 0 else -a] * n_terms]
                B = [[b, b] for _ in range(n_terms)]
                C = [[below if sign > 0 else -below, P if sign > 0 else -P]]
                probe = Probe(f"k{k}_j{j}_{'p' if sign > 0 else 'n'}", k, j, sign, A, B, C)
                for cand in candidates:
                    D = gemm(A, B, C, cand.config)
                    probe.predictions[cand.label] = (D[0][0], D[0][1])
                probes.append(probe)
    return probes


def predict(probe: Probe, config: ReductionConfig) -> Tuple[FpValue, FpValue]:
    D = gemm(probe.A, probe.B, probe.C, config)
    return D[0][0], D[0][1]


@dataclass
class Verdict:
    verdict: str  # "ClassI/II", "ClassIII", "ClassIV(aligned)", "ClassIV(growth)" or "Inconclusive"
    matching: List[str]
    g: Optional[int] = None
    g_candidates: Tuple[int, ...] = ()
    final_rounding: Tuple[str, ...] = ()
    shift_out: Tuple[str, ...] = ()
    reason: str = ""

    def summary(self) -> str:
        if self.verdict == "ClassIV(aligned)":
            return f"ClassIV(aligned, g={self.g}, final={'/'.join(self.final_rounding)})"
        if self.verdict == "Inconclusive":
            return f"Inconclusive ({self.reason})"
        return self.verdict


Observations = Mapping[Tuple[str, int, int], FpValue]


def classify_device(observations: Observations, probes: Sequence[Probe], candidates: Optional[List[Candidate]] = None) -> Verdict:
    """Match observed probe outputs against every candidate's predictions."""
    by_id = {pr.probe_id: pr for pr in probes}
    for pid, row, col in observations:
        if pid not in by_id:
            raise ParseError(f"observation for unknown probe {pid!r}")
        if row != 0 or col not in (0, 1):
            raise ParseError(f"probe {pid} has no output entry ({row}, {col})")
    powers = {by_id[pid].power for pid, _, _ in observations}
    if len(powers) < 2:
        return Verdict("Inconclusive", [], reason="observations must cover at least two powers of two")
    labels = list(probes[0].predictions)
    if candidates is not None:
        labels = [c.label for c in candidates]
    family_of = {c.label: c for c in (candidates or candidate_models(_fmt_in(probes), _fmt_acc(probes)))}
    matching = []
    for label in labels:
        ok = True
        for (pid, _, col), observed in observations.items():
            predicted = by_id[pid].predictions[label][col]
            if not _agree(predicted, observed):
                ok = False
                break
        if ok:
            matching.append(label)
    families = {family_of[m].family for m in matching}
    if not matching:
        return Verdict("Inconclusive", [], reason="no model reproduces every observation")
    if len(families) > 1:
        return Verdict("Inconclusive", matching, reason="models from several classes fit: " + ", ".join(sorted(families)))
    family = families.pop()
    verdict = Verdict(family, matching)
    if family == "ClassIV(aligned)":
        params = [family_of[m].config.adder.params for m in matching]
        gs = tuple(sorted({prm.g for prm in params}))
        verdict.g_candidates = gs
        verdict.g = gs[0]
        verdict.final_rounding = tuple(sorted({str(prm.final_mode) for prm in params}))
        verdict.shift_out = tuple(sorted({prm.shift_out.value for prm in params}))
    else:
        verdict.final_rounding = tuple(sorted({str(family_of[m].config.adder.mode) for m in matching}))
    return verdict


def _agree(predicted: FpValue, observed: FpValue) -> bool:
    if predicted.is_nan() or observed.is_nan():
        return predicted.is_nan() and observed.is_nan()
    return same_value(predicted, observed)


def _fmt_in(probes: Sequence[Probe]) -> FpFormat:
    return probes[0].A[0][0].fmt


def _fmt_acc(probes: Sequence[Probe]) -> FpFormat:
    return probes[0].C[0][0].fmt


def observations_from(probes: Sequence[Probe], label: str) -> Dict[Tuple[str, int, int], FpValue]:
    """Observations a device behaving exactly like candidate ``label`` would report."""
    out = {}
    for pr in probes:
        d0, d1 = pr.predictions[label]
        out[(pr.probe_id, 0, 0)] = d0
        out[(pr.probe_id, 0, 1)] = d1
    return out


# CSV exchange: probe_id,row,col,value


def write_suite_csv(probes: Sequence[Probe]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["probe_id", "row", "col", "value"])
    for pr in probes:
        for name, mat in (("A", pr.A), ("B", pr.B), ("C", pr.C)):
            for i, row in enumerate(mat):
                for j, v in enumerate(row):
                    w.writerow([f"{pr.probe_id}/{name}", i, j, str(v)])
    return buf.getvalue()


def write_observations_csv(observations: Observations) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["probe_id", "row", "col", "value"])
    for (pid, row, col), v in observations.items():
        w.writerow([pid, row, col, str(v)])
    return buf.getvalue()


def read_observations_csv(text: str, acc_format: FpFormat) -> Dict[Tuple[str, int, int], FpValue]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["probe_id", "row", "col", "value"]:
        raise ParseError("observation CSV must have header probe_id,row,col,value")
    out = {}
    for lineno, rec in enumerate(reader, start=2):
        try:
            key = (rec["probe_id"].strip(), int(rec["row"]), int(rec["col"]))
            lit = parse_literal(rec["value"])
        except (ValueError, AttributeError, ParseError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        value = to_value(lit, acc_format)
        if isinstance(lit, Fraction) and (not value.is_finite() or value.exact.to_fraction() != lit):
            raise ParseError(f"line {lineno}: {rec['value']} is not representable in {acc_format}")
        out[key] = value
    return out


def predictions_table(probes: Iterable[Probe]) -> Dict[str, Dict[str, List[str]]]:
    return {pr.probe_id: {label: [str(d0), str(d1)] for label, (d0, d1) in pr.predictions.items()} for pr in probes}
