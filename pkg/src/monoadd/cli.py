"""Command-line front end: ``monoadd <subcommand> ...``.

Exit status is 0 on success, 1 on bad input and 2 when a requested property
check fails.  With ``--out DIR`` (or ``MONOADD_OUT``) every emitted file is
written atomically and listed, with its sha256, in ``DIR/manifest.json``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import experiments as ex
from . import probes as pb
from .adders import AdderModel, parse_adder
from .errors import DegenerateFormat, MonoaddError, ParseError
from .formats import FpFormat, FpValue, parse_format, value_of
from .literals import parse_literal, to_value
from .reductions import CPlacement, ProductHandling, ReductionConfig, dot, gemm
from .rounding import RoundingMode, parse_mode

log = logging.getLogger("monoadd")

OUT_ENV = "MONOADD_OUT"
EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class CheckFailed(Exception):
    """A property the user asked to verify does not hold."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# output plumbing


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class RunManifest:
    subcommand: str
    argv: List[str]
    format: Optional[str] = None
    adders: List[str] = field(default_factory=list)
    rng: Optional[dict] = None
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"


class Output:
    """Collects emitted files; without an output directory nothing is written."""

    def __init__(self, out_dir: Optional[str], manifest: RunManifest):
        self.dir = Path(out_dir) if out_dir else None
        self.manifest = manifest

    def emit(self, name: str, text: str) -> Optional[Path]:
        if self.dir is None:
            return None
        data = text.encode()
        path = self.dir / name
        atomic_write(path, data)
        self.manifest.outputs[name] = hashlib.sha256(data).hexdigest()
        return path

    def read(self, path: str) -> str:
        """Read an input file (``-`` for stdin) and record its checksum."""
        if path == "-":
            text = sys.stdin.read()
        else:
            try:
                text = Path(path).read_text()
            except OSError as exc:
                raise ParseError(f"cannot read {path}: {exc.strerror}") from None
        self.manifest.inputs[path] = hashlib.sha256(text.encode()).hexdigest()
        return text

    def close(self) -> None:
        if self.dir is not None:
            atomic_write(self.dir / "manifest.json", self.manifest.to_json().encode())


def _print(args, human: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


# --------------------------------------------------------------------------
# input helpers


def _literal_values(texts: Sequence[str], fmt: FpFormat, mode: RoundingMode) -> List[FpValue]:
    out = []
    for t in texts:
        lit = parse_literal(t)
        v = to_value(lit, fmt, mode)
        if isinstance(lit, Fraction) and (not v.is_finite() or value_of(v).to_fraction() != lit):
            log.warning("input %s rounded to %s (%s) in %s", t, v, mode, fmt)
        out.append(v)
    return out


def _split_list(texts: Optional[Sequence[str]]) -> List[str]:
    out = []
    for t in texts or []:
        out.extend(s for s in t.replace(",", " ").split() if s)
    return out


def read_matrix_csv(text: str, fmt: Optional[FpFormat], mode: RoundingMode) -> List[List[FpValue]]:
    """Matrix CSV of exact literals; a ``# format pPeE`` line names the format."""
    declared = None
    rows = []
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            key, _, val = s[1:].strip().partition(" ")
            if key == "format":
                declared = parse_format(val.strip())
            continue
        rows.append(next(csv.reader([s])))
    fmt = fmt or declared
    if fmt is None:
        raise ParseError("matrix CSV has no '# format' line and no --format was given")
    if declared is not None and declared != fmt:
        raise ParseError(f"matrix declares {declared} but {fmt} was requested")
    return [_literal_values([c.strip() for c in row], fmt, mode) for row in rows]


def write_matrix_csv(m: List[List[FpValue]], fmt: FpFormat) -> str:
    buf = io.StringIO()
    buf.write(f"# format {fmt}\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in m:
        w.writerow([str(v) for v in row])
    return buf.getvalue()


def _adder(args, fmt: FpFormat, default: str = "class1") -> AdderModel:
    return parse_adder(args.adder or default, fmt, args.mode)


# --------------------------------------------------------------------------
# subcommands


def cmd_sum(args, out: Output) -> int:
    fmt = args.format
    model = _adder(args, fmt)
    out.manifest.adders = [model.label]
    xs = _literal_values(_split_list(args.values), fmt, args.input_mode)
    value, trace = model.reduce(xs)
    payload = {
        "format": str(fmt),
        "adder": model.label,
        "inputs": [str(x) for x in xs],
        "sum": str(value),
        "max_precision": trace.max_precision,
        "carry_events": trace.carry_events,
    }
    if args.trace:
        payload["trace"] = [s.__dict__ for s in trace.steps]
    _print(args, str(value), payload)
    return EXIT_OK


def _reduction_config(args, fmt: FpFormat) -> ReductionConfig:
    model = _adder(args, fmt)
    return ReductionConfig(
        args.input_format or fmt,
        model,
        ProductHandling(args.products),
        args.mode,
        CPlacement(args.c_placement),
    )


def cmd_dot(args, out: Output) -> int:
    fmt = args.format
    config = _reduction_config(args, fmt)
    out.manifest.adders = [config.adder.label]
    in_fmt = config.input_format
    a = _literal_values(_split_list(args.a), in_fmt, args.input_mode)
    b = _literal_values(_split_list(args.b), in_fmt, args.input_mode)
    c = _literal_values([args.c], fmt, args.input_mode)[0] if args.c is not None else None
    d = dot(a, b, c, config)
    _print(args, str(d), {"format": str(fmt), "adder": config.adder.label, "dot": str(d)})
    return EXIT_OK


def cmd_gemm(args, out: Output) -> int:
    fmt = args.format
    config = _reduction_config(args, fmt)
    out.manifest.adders = [config.adder.label]
    A = read_matrix_csv(out.read(args.A), config.input_format, args.input_mode)
    B = read_matrix_csv(out.read(args.B), config.input_format, args.input_mode)
    C = read_matrix_csv(out.read(args.C), fmt, args.input_mode) if args.C else None
    D = gemm(A, B, C, config)
    text = write_matrix_csv(D, fmt)
    out.emit("D.csv", text)
    _print(args, text.rstrip("\n"), {"format": str(fmt), "adder": config.adder.label, "D": [[str(v) for v in r] for r in D]})
    return EXIT_OK


def _sweep_models(args, fmt: FpFormat) -> List[AdderModel]:
    if args.adder:
        return [parse_adder(a, fmt, args.mode) for a in args.adder]
    return ex.default_sweep_models(fmt, args.mode)


def cmd_sweep(args, out: Output) -> int:
    fmt = args.format
    models = _sweep_models(args, fmt)
    out.manifest.adders = [m.label for m in models]
    x1_from = parse_literal(args.x1_from) if args.x1_from else None
    res = ex.monotonicity_sweep(fmt, args.terms, models, Fraction(parse_literal(args.fill)), x1_from, args.mode)
    stem = f"sweep-{fmt}-n{args.terms}"
    raw = next((m.label for m in models if "nofinal" in m.label), None)
    out.emit(stem + ".dat", ex.write_sweep_dat(res, models[0].label, raw))
    out.emit(stem + ".jsonl", ex.sweep_jsonl(res, models))
    counts = {k: len(v) for k, v in res.violations.items()}
    human = [f"{len(res.records)} values of x1, violation pairs:"]
    human += [f"  {k}: {n}" for k, n in counts.items()]
    _print(args, "\n".join(human), {
        "format": str(fmt),
        "terms": args.terms,
        "records": len(res.records),
        "violations": {k: [[str(res.records[i].x1), str(res.records[j].x1)] for i, j in v] for k, v in res.violations.items()},
    })
    if args.expect_violation and not any(counts[m.label] for m in models):
        raise CheckFailed("no model produced a decreasing pair")
    return EXIT_OK


FIG3_FORMATS = ("p3e3", "p4e3", "p5e4")


def cmd_fig3(args, out: Output) -> int:
    summary = {}
    checks = []
    for spec in args.formats or FIG3_FORMATS:
        fmt = parse_format(spec)
        for n in args.terms or (8, 16):
            models = ex.default_sweep_models(fmt, args.mode)
            res = ex.monotonicity_sweep(fmt, n, models, mode=args.mode)
            out.emit(f"fig3-{fmt}-n{n}.dat", ex.write_sweep_dat(res, models[0].label, models[1].label))
            summary[f"{fmt}/n={n}"] = {k: len(v) for k, v in res.violations.items()}
            if fmt == parse_format("p3e3") and n == 8:
                checks.append(fig3_properties(res))
    human = "\n".join(f"{k}: {v}" for k, v in summary.items())
    _print(args, human, {"violations": summary})
    if args.check:
        fmt = parse_format("p3e3")
        v8 = ex.monotonicity_sweep(fmt, 8, mode=args.mode)
        v16 = ex.monotonicity_sweep(fmt, 16, mode=args.mode)
        problems = fig3_properties(v8)
        label = v8.labels[0]
        if len(v16.violations[label]) < len(v8.violations[label]):
            problems.append("n=16 has fewer violation pairs than n=8")
        if problems:
            raise CheckFailed("; ".join(problems))
    return EXIT_OK


def fig3_properties(res: ex.SweepResult) -> List[str]:
    """Stagnation plateau in the IEEE curve with the growth curve rising on it."""
    problems = []
    ieee = res.column("ieee754")
    growth = res.column(res.labels[0])
    runs = ex.plateaus(ieee, 3)
    if not runs:
        problems.append("no stagnation plateau in the IEEE curve")
    elif not any(growth[i + 1] > growth[i] for s, e in runs for i in range(s, e)):
        problems.append("growth curve never rises on an IEEE plateau")
    return problems


def cmd_fig2(args, out: Output) -> int:
    rng = ex.RngSpec(args.seed)
    out.manifest.rng = rng.to_dict()
    lengths = [int(x) for x in _split_list(args.lengths)] or list(ex.DEFAULT_LENGTHS)
    widths = [int(x) for x in _split_list(args.widths)] or [4, 64, 512, 1024]
    res = ex.random_summation_experiment(rng, lengths, widths)
    for w in widths:
        out.emit(f"fig2-w{w}.dat", res.dat(w))
    payload = {
        "rng": rng.to_dict(),
        "recombination": res.recombination,
        "max_precision": res.max_precision,
        "rows": [
            {
                "length": r.length,
                "inc": str(r.inc),
                "dec": str(r.dec),
                "blocked": {str(w): str(e) for w, e in r.blocked.items()},
                "precision": {str(w): p for w, p in r.blocked_precision.items()},
            }
            for r in res.rows
        ],
    }
    head = "length inc dec " + " ".join(f"w{w}" for w in widths)
    lines = [head] + [f"{r.length} {r.inc} {r.dec} " + " ".join(str(r.blocked[w]) for w in widths) for r in res.rows]
    lines.append(f"max working precision {res.max_precision}")
    _print(args, "\n".join(lines), payload)
    if args.check:
        last = res.rows[-1]
        problems = []
        if float(last.dec) < float(last.inc):
            problems.append("decreasing order beat increasing order at the longest length")
        if 1024 in last.blocked and float(last.blocked[1024]) > float(last.inc):
            problems.append("1024-term adder less accurate than increasing order")
        if not 12 <= res.max_precision <= 21:
            problems.append(f"max working precision {res.max_precision} outside [12, 21]")
        if problems:
            raise CheckFailed("; ".join(problems))
    return EXIT_OK


ASSOC_SEED = 500


def cmd_assoc(args, out: Output) -> int:
    rng = ex.RngSpec(args.seed)
    out.manifest.rng = rng.to_dict()
    res = ex.associativity_test(rng, args.n, args.permutations)
    d = res.to_dict()
    _print(args, "\n".join(f"{k}: {v}" for k, v in d.items()), d)
    if args.check:
        if not res.range_aligned.is_zero():
            raise CheckFailed("aligned adder changed under permutation")
        if res.range_class3.is_zero():
            raise CheckFailed("no permutation changed the IEEE sum for this seed")
    return EXIT_OK


def cmd_sqrt_demo(args, out: Output) -> int:
    rows = ex.sqrt_demo()
    lines = [f"{r.ordering:12s} {r.model:15s} sum(a)={r.sum_a} sum(b)={r.sum_b} radicand={r.radicand}" for r in rows]
    payload = [
        {"ordering": r.ordering, "model": r.model, "sum_a": str(r.sum_a), "sum_b": str(r.sum_b),
         "radicand": str(r.radicand), "negative": r.negative}
        for r in rows
    ]
    _print(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_interval_demo(args, out: Output) -> int:
    rep = ex.interval_demo()
    a = [str(v) for v in rep.a]
    b = [str(v) for v in rep.b]
    human = f"a: [{a[0]}, {a[1]}]\nb: [{b[0]}, {b[1]}]\nlower end rose: {rep.anomaly}"
    _print(args, human, {"a": a, "b": b, "anomaly": rep.anomaly, "narrower": rep.narrower})
    if args.check and not rep.anomaly:
        raise CheckFailed("lower end did not rise")
    return EXIT_OK


def cmd_count(args, out: Output) -> int:
    fmt = args.format
    adder = parse_adder(args.adder, fmt, args.mode) if args.adder else None
    config = ex.CountConfig(fmt, args.mode, adder)
    diag = _literal_values(_split_list(args.diag), fmt, args.input_mode)
    off = _literal_values(_split_list(args.offdiag), fmt, args.input_mode)
    xs = _literal_values(_split_list(args.x), fmt, args.input_mode)
    if len(off) != len(diag) - 1:
        raise ParseError(f"need {len(diag) - 1} off-diagonal entries, got {len(off)}")
    scan = ex.count_scan(diag, off, xs, config)
    neg = scan.negative_intervals
    lines = [f"count({x}) = {c}" for x, c in zip(scan.xs, scan.counts)]
    lines += [f"negative count on [{a}, {b}]: {d}" for a, b, d in neg]
    _print(args, "\n".join(lines), {
        "counts": [[str(x), c] for x, c in zip(scan.xs, scan.counts)],
        "negative_intervals": [[str(a), str(b), d] for a, b, d in neg],
    })
    if args.expect_monotone and neg:
        raise CheckFailed("count decreased as x increased")
    return EXIT_OK


def _probe_setup(args):
    in_fmt = args.input_format or parse_format("binary16")
    acc = args.format
    suite = pb.generate_probe_suite(in_fmt, acc, args.terms)
    return in_fmt, acc, suite


def cmd_probe_gen(args, out: Output) -> int:
    _, acc, suite = _probe_setup(args)
    text = pb.write_suite_csv(suite)
    out.emit("probes.csv", text)
    out.emit("predictions.json", json.dumps(pb.predictions_table(suite), indent=1, sort_keys=True) + "\n")
    if args.json:
        _print(args, "", {"probes": [p.probe_id for p in suite], "predictions": pb.predictions_table(suite)})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_probe_classify(args, out: Output) -> int:
    _, acc, suite = _probe_setup(args)
    obs = pb.read_observations_csv(out.read(args.observations), acc)
    v = pb.classify_device(obs, suite)
    _print(args, v.summary(), {
        "verdict": v.verdict,
        "summary": v.summary(),
        "g": v.g,
        "g_candidates": list(v.g_candidates),
        "final_rounding": list(v.final_rounding),
        "shift_out": list(v.shift_out),
        "matching": v.matching,
        "reason": v.reason,
    })
    if args.expect and v.verdict != args.expect:
        raise CheckFailed(f"expected {args.expect}, got {v.summary()}")
    return EXIT_OK


def cmd_counterexample(args, out: Output) -> int:
    fmt = args.format
    if args.terms == 3:
        w = ex.counterexample_theorem4(fmt, args.mode)
        ok = w.violated_nofinal and not w.violated
    else:
        w = ex.counterexample_theorem5(fmt, args.mode)
        ok = ex.theorem5_holds(w) and w.violated
    d = w.to_dict()
    human = "\n".join([
        f"format {fmt}, {args.mode}, {w.n_terms} terms",
        f"a = {w.a}  b = {w.b}  c = {w.c}  eps = {w.eps}",
        f"x = b: sum {w.sum_at_b} (no final rounding {w.sum_at_b_nofinal})",
        f"x = a: sum {w.sum_at_a} (no final rounding {w.sum_at_a_nofinal})",
    ])
    _print(args, human, d)
    if not ok:
        raise CheckFailed("the construction did not behave as predicted")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _fmt_arg(text: str) -> FpFormat:
    try:
        return parse_format(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _mode_arg(text: str) -> RoundingMode:
    try:
        return parse_mode(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--mode", type=_mode_arg, default=RoundingMode.RN, help="rounding mode: rn, rz, rd, ru")
    common.add_argument("--input-mode", type=_mode_arg, default=RoundingMode.RN,
                        help="mode used to round literal inputs into their format")
    common.add_argument("--out", default=os.environ.get(OUT_ENV), help=f"output directory (default ${OUT_ENV})")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs are sequential")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="monoadd", description="Emulate multi-term floating-point adders bit-exactly.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, fmt="binary32"):
        sp = sub.add_parser(name, parents=[common], help=help, description=help)
        sp.add_argument("--format", type=_fmt_arg, default=parse_format(fmt), help=f"pPeE or binary16/32/64 (default {fmt})")
        sp.set_defaults(func=func)
        return sp

    sp = add("sum", cmd_sum, "sum values with one adder model")
    sp.add_argument("--adder", help="class1 | class3[:order] | class4growth[:...] | class4aligned[:...]")
    sp.add_argument("--trace", action="store_true", help="include per-step trace in --json output")
    sp.add_argument("values", nargs="+")

    for name, func, help in (("dot", cmd_dot, "dot product a.b + c"), ("gemm", cmd_gemm, "matrix product D = AB + C")):
        sp = add(name, func, help)
        sp.add_argument("--adder")
        sp.add_argument("--input-format", type=_fmt_arg, help="format of A/B (default --format)")
        sp.add_argument("--products", choices=[h.value for h in ProductHandling], default="exact")
        sp.add_argument("--c-placement", choices=[c.value for c in CPlacement], default="append")
        if name == "dot":
            sp.add_argument("--a", nargs="+", required=True)
            sp.add_argument("--b", nargs="+", required=True)
            sp.add_argument("--c")
        else:
            sp.add_argument("--A", required=True, help="CSV file or - for stdin")
            sp.add_argument("--B", required=True)
            sp.add_argument("--C")

    sp = add("sweep", cmd_sweep, "monotonicity sweep over the first addend", fmt="p3e3")
    sp.add_argument("--terms", type=int, default=8)
    sp.add_argument("--fill", default="0.25")
    sp.add_argument("--x1-from", help="first x1 (default: the fill value)")
    sp.add_argument("--adder", action="append", help="repeatable; default growth with and without final rounding")
    sp.add_argument("--expect-violation", action="store_true", help="exit 2 unless some model decreases")

    sp = add("fig3", cmd_fig3, "monotonicity sweeps in small formats", fmt="p3e3")
    sp.add_argument("--formats", nargs="+")
    sp.add_argument("--terms", type=int, nargs="+")
    sp.add_argument("--check", action="store_true")

    sp = add("fig2", cmd_fig2, "random summation: ordering and blocked multi-term adders", fmt="binary16")
    sp.add_argument("--seed", type=int, default=ASSOC_SEED)
    sp.add_argument("--lengths", nargs="+")
    sp.add_argument("--widths", nargs="+")
    sp.add_argument("--check", action="store_true")

    sp = add("assoc", cmd_assoc, "sum spread over random permutations", fmt="binary16")
    sp.add_argument("--seed", type=int, default=ASSOC_SEED)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--permutations", type=int, default=10**4)
    sp.add_argument("--check", action="store_true")

    add("sqrt-demo", cmd_sqrt_demo, "radicand of a difference of two 8-term sums")
    sp = add("interval-demo", cmd_interval_demo, "interval sums with directed rounding")
    sp.add_argument("--check", action="store_true")

    sp = add("count", cmd_count, "eigenvalue count of a symmetric tridiagonal matrix")
    sp.add_argument("--diag", nargs="+", required=True)
    sp.add_argument("--offdiag", nargs="*", default=[])
    sp.add_argument("--x", nargs="+", required=True)
    sp.add_argument("--adder", help="three-term adder for the pivot update (default: two IEEE subtractions)")
    sp.add_argument("--expect-monotone", action="store_true")

    for name, func, help in (("probe-gen", cmd_probe_gen, "write the probe GEMM suite"),
                             ("probe-classify", cmd_probe_classify, "classify device observations")):
        sp = add(name, func, help)
        sp.add_argument("--input-format", type=_fmt_arg, help="device input format (default binary16)")
        sp.add_argument("--terms", type=int, default=8)
        if name == "probe-classify":
            sp.add_argument("--observations", required=True, help="CSV probe_id,row,col,value or - for stdin")
            sp.add_argument("--expect", help="exit 2 unless the verdict is this class")

    sp = add("counterexample", cmd_counterexample, "construct a monotonicity counterexample", fmt="p3e3")
    sp.add_argument("--terms", type=int, choices=(3, 4), default=4)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    log.propagate = False
    manifest = RunManifest(args.command, argv, str(args.format))
    out = Output(args.out, manifest)
    try:
        code = args.func(args, out)
        out.close()
        return code
    except CheckFailed as exc:
        out.close()
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except DegenerateFormat as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except MonoaddError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
