"""Command-line surface.

Subcommands: score, batch, validate-paper, sweep, perturb, breakeven,
entropy, ahp.  Machine-readable output goes to stdout, diagnostics to
stderr.  Exit codes: 0 success, 1 validation/acceptance failure, 2 usage
error, 3 data/schema error.

dispatch() runs a full invocation in-process and returns an ExitReport,
which is what the tests exercise; main() is the thin console entry point.
"""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass
from pathlib import Path

from .ahp import ahp_weights, profile_from_ahp
from .dataset import (
    CaseRecord,
    ComponentCaseRecord,
    bundled_paper_dataset,
    load_cases,
    parse_pairwise_matrix_csv,
    parse_single_case,
    parse_weight_profile,
)
from .entropy import DiscreteDistribution, normalized_entropy, shannon_entropy
from .errors import (
    ConsistencyError,
    SchemaError,
    UsageError,
    ValidationError,
    ValueModelError,
)
from .harness import validate_paper_tables
from .model import Verdict, WeightProfile, classify_verdict, composite_value
from .reports import (
    AhpReport,
    BatchReport,
    BatchRow,
    EntropyDelta,
    emit_report,
)
from .sensitivity import (
    WEIGHT_ORDER,
    breakeven_probability,
    component_weight_sweep,
    perturb_risk_factor,
    weight_sweep,
)

__all__ = ["ExitReport", "dispatch", "main"]


@dataclass(frozen=True)
class ExitReport:
    """Outcome of one CLI invocation: code plus both streams."""

    exit_code: int
    stdout: str
    stderr: str


class _CliUsage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so dispatch owns the exit."""

    def error(self, message):
        raise _CliUsage(f"{self.format_usage()}{self.prog}: error: {message}")


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _load_weights(args) -> WeightProfile | None:
    if getattr(args, "weights", None) is None:
        return None
    return parse_weight_profile(_read(args.weights))


def _load_dataset(path: str):
    fmt = "json" if path.endswith(".json") else "csv"
    return load_cases(_read(path), fmt)


def _parse_distribution(literal: str) -> DiscreteDistribution:
    try:
        probs = tuple(float(tok) for tok in literal.split(","))
    except ValueError:
        raise UsageError(
            f"distribution literal must be comma-separated numbers, "
            f"got {literal!r}") from None
    return DiscreteDistribution(probs)


def _parse_weight_range(literal: str) -> tuple[str, tuple[float, float, int]]:
    try:
        name, spec = literal.split("=", 1)
        lo, hi, steps = spec.split(":")
        return name, (float(lo), float(hi), int(steps))
    except ValueError:
        raise UsageError(
            f"weight range must look like name=lo:hi:steps, got {literal!r}"
        ) from None


# ---------------------------------------------------------------------------
# Subcommand handlers: return (stdout bytes, exit code)

def _cmd_score(args):
    case = parse_single_case(_read(args.case))
    if isinstance(case, ComponentCaseRecord):
        raise UsageError(
            "component-grade case carries no factor fields to decompose; "
            "use `batch` for component tables")
    weights = _load_weights(args) or WeightProfile.default()
    breakdown = composite_value(case.factors, case.risks, weights)
    return emit_report(breakdown, args.format), 0


def _cmd_batch(args):
    dataset = _load_dataset(args.cases)
    weights = _load_weights(args) or WeightProfile.default()
    rows = []
    for case in dataset.cases:
        if isinstance(case, CaseRecord):
            b = composite_value(case.factors, case.risks, weights)
            rows.append(BatchRow(id=case.id, positive_sum=b.positive_sum,
                                 risk_magnitude=b.risk_magnitude,
                                 composite_value=b.composite_value,
                                 verdict=b.verdict))
        else:
            value = case.positive_sum - weights.lam * case.risk_f
            rows.append(BatchRow(id=case.id, positive_sum=case.positive_sum,
                                 risk_magnitude=case.risk_f,
                                 composite_value=value,
                                 verdict=classify_verdict(value)))
    values = [r.composite_value for r in rows]
    mean = sum(values) / len(values) if values else 0.0
    counts = tuple(
        (v.value, sum(1 for r in rows if r.verdict is v))
        for v in (Verdict.PROCEED, Verdict.REVIEW, Verdict.REJECT))
    report = BatchReport(rows=tuple(rows), mean_value=mean,
                         verdict_counts=counts)
    return emit_report(report, args.format), 0


def _cmd_validate_paper(args):
    dataset = (_load_dataset(args.cases) if args.cases is not None
               else bundled_paper_dataset())
    weights = _load_weights(args)
    report = validate_paper_tables(dataset, weights=weights,
                                   tolerance=args.tolerance)
    ok = report.all_passed and report.sign_separation
    return emit_report(report, args.format), (0 if ok else 1)


def _cmd_sweep(args):
    case = parse_single_case(_read(args.case))
    ranges = {}
    for literal in args.weight:
        name, spec = _parse_weight_range(literal)
        if name in ranges:
            raise UsageError(f"weight {name!r} given twice")
        ranges[name] = spec
    if isinstance(case, ComponentCaseRecord):
        extra = [n for n in ranges if n != "lambda"]
        if extra:
            raise UsageError(
                "component-grade cases publish only aggregate sums; only "
                f"the risk weight (lambda) can be swept, got {extra}")
        if "lambda" not in ranges:
            raise UsageError("component sweep needs a lambda range")
        grid = component_weight_sweep(case.positive_sum, case.risk_f,
                                      ranges["lambda"])
    else:
        grid = weight_sweep(case.factors, case.risks, ranges,
                            base=_load_weights(args))
    return emit_report(grid, args.format), 0


def _cmd_perturb(args):
    case = parse_single_case(_read(args.case))
    if isinstance(case, ComponentCaseRecord):
        raise UsageError("perturbation needs factor-grade risk fields")
    try:
        multipliers = [float(tok) for tok in args.multipliers.split(",")]
    except ValueError:
        raise UsageError(f"multipliers must be comma-separated numbers, "
                         f"got {args.multipliers!r}") from None
    weights = _load_weights(args) or WeightProfile.default()
    series = perturb_risk_factor(case.factors, case.risks, weights,
                                 args.factor, multipliers)
    return emit_report(series, args.format), 0


def _cmd_breakeven(args):
    case = parse_single_case(_read(args.case))
    if isinstance(case, ComponentCaseRecord):
        raise UsageError("break-even needs factor-grade risk fields")
    weights = _load_weights(args) or WeightProfile.default()
    result = breakeven_probability(case.factors, case.risks, weights)
    return emit_report(result, args.format), 0


def _cmd_entropy(args):
    before = _parse_distribution(args.before)
    after = _parse_distribution(args.after)
    if args.normalized:
        h_before = normalized_entropy(before)
        h_after = normalized_entropy(after)
        mode = "normalized"
    else:
        h_before = shannon_entropy(before)
        h_after = shannon_entropy(after)
        mode = "bits"
    report = EntropyDelta(mode=mode, h_before=h_before, h_after=h_after,
                          delta=h_before - h_after)
    return emit_report(report, args.format), 0


def _cmd_ahp(args):
    matrix = parse_pairwise_matrix_csv(_read(args.matrix))
    result = ahp_weights(matrix)
    profile = None
    if matrix.order == 5:
        profile = profile_from_ahp(
            result, allow_inconsistent=args.override_consistency)
    elif not result.acceptable and not args.override_consistency:
        raise ConsistencyError(result.consistency_ratio)
    payload = emit_report(AhpReport(result=result, profile=profile),
                          args.format)
    return payload, 0


# ---------------------------------------------------------------------------
# Parser

def build_parser() -> _Parser:
    parser = _Parser(prog="aivalue",
                     description="Composite value scoring for AI products")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def add_format(p, choices=("text", "json"), default="text"):
        p.add_argument("--format", choices=choices, default=default)

    def add_weights(p):
        p.add_argument("--weights", metavar="FILE",
                       help="weights JSON file (defaults to the reference "
                            "profile 1/0.5/0.3/0.2/1)")

    p = sub.add_parser("score", help="score a single case file")
    p.add_argument("--case", required=True, metavar="FILE")
    add_weights(p)
    add_format(p)
    p.set_defaults(handler=_cmd_score)

    p = sub.add_parser("batch", help="score every case in a dataset")
    p.add_argument("--cases", required=True, metavar="FILE")
    add_weights(p)
    add_format(p, choices=("text", "json", "csv"))
    p.set_defaults(handler=_cmd_batch)

    p = sub.add_parser("validate-paper",
                       help="recompute the bundled reference table")
    p.add_argument("--tolerance", type=float, default=0.005)
    p.add_argument("--cases", metavar="FILE",
                   help="override the bundled dataset (component-grade)")
    add_weights(p)
    add_format(p, choices=("text", "json", "csv"))
    p.set_defaults(handler=_cmd_validate_paper)

    p = sub.add_parser("sweep", help="sweep weights over a grid")
    p.add_argument("--case", required=True, metavar="FILE")
    p.add_argument("--weight", action="append", required=True,
                   metavar="NAME=LO:HI:STEPS",
                   help=f"repeatable; names: {', '.join(WEIGHT_ORDER)}")
    add_weights(p)
    add_format(p, choices=("csv", "json", "text"), default="csv")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("perturb", help="scale one risk field")
    p.add_argument("--case", required=True, metavar="FILE")
    p.add_argument("--factor", required=True,
                   choices=("error_probability", "error_impact",
                            "correction_cost_ratio"))
    p.add_argument("--multipliers", required=True, metavar="K1,K2,...")
    add_weights(p)
    add_format(p, choices=("text", "json", "csv"))
    p.set_defaults(handler=_cmd_perturb)

    p = sub.add_parser("breakeven",
                       help="error probability where value crosses zero")
    p.add_argument("--case", required=True, metavar="FILE")
    add_weights(p)
    add_format(p)
    p.set_defaults(handler=_cmd_breakeven)

    p = sub.add_parser("entropy", help="entropy reduction between two "
                                       "distributions")
    p.add_argument("--before", required=True, metavar="P1,P2,...")
    p.add_argument("--after", required=True, metavar="P1,P2,...")
    p.add_argument("--normalized", action="store_true",
                   help="divide each entropy by its log2(n)")
    add_format(p)
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("ahp", help="weights from a pairwise matrix (CSV)")
    p.add_argument("--matrix", required=True, metavar="FILE")
    p.add_argument("--override-consistency", action="store_true",
                   help="use the weights even when CR >= 0.10")
    add_format(p)
    p.set_defaults(handler=_cmd_ahp)

    return parser


def dispatch(argv) -> ExitReport:
    """Run one invocation in-process and capture its outcome."""
    parser = build_parser()
    captured_out = io.StringIO()
    captured_err = io.StringIO()
    try:
        with redirect_stdout(captured_out), redirect_stderr(captured_err):
            args = parser.parse_args(list(argv))
    except SystemExit as exc:  # --help prints and exits 0
        code = exc.code if isinstance(exc.code, int) else 0
        return ExitReport(code, captured_out.getvalue(),
                          captured_err.getvalue())
    except _CliUsage as exc:
        return ExitReport(2, captured_out.getvalue(), f"{exc}\n")

    try:
        payload, code = args.handler(args)
        return ExitReport(code, payload.decode("utf-8"), "")
    except (SchemaError, OSError) as exc:
        return ExitReport(3, "", f"aivalue: data error: {exc}\n")
    except ConsistencyError as exc:
        return ExitReport(1, "", f"aivalue: {exc}\n")
    except (UsageError, ValidationError, _CliUsage) as exc:
        return ExitReport(2, "", f"aivalue: usage error: {exc}\n")
    except ValueModelError as exc:
        return ExitReport(2, "", f"aivalue: {exc}\n")


def main(argv=None) -> int:
    report = dispatch(sys.argv[1:] if argv is None else argv)
    if report.stdout:
        sys.stdout.write(report.stdout)
    if report.stderr:
        sys.stderr.write(report.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
