"""Report emission: text tables, round-trippable JSON, flat CSV.

Output is deterministic: identical inputs produce byte-identical streams.
Text and CSV format numbers at 6 significant digits; JSON carries full
precision and tags every payload with a "kind" discriminator so
parse_report can rebuild the original object.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .ahp import AhpResult
from .dataset import weight_profile_to_dict
from .errors import FormatError, SchemaError
from .harness import (
    CaseCheck,
    H1Result,
    H2Result,
    H3Result,
    HypothesisReport,
    InconsistencyNote,
    ValidationReport,
)
from .model import CONTRIBUTION_ORDER, ValueBreakdown, Verdict, WeightProfile
from .sensitivity import (
    BreakevenResult,
    PerturbationRow,
    PerturbationSeries,
    ScanPoint,
    SweepGrid,
)
from .stats import (
    CorrelationResult,
    CurveFitComparison,
    GroupFit,
    ModerationReport,
    PreferredModel,
)

__all__ = [
    "BatchReport",
    "BatchRow",
    "EntropyDelta",
    "AhpReport",
    "ThresholdScanReport",
    "format_sig",
    "emit_report",
    "parse_report",
]


def format_sig(x: float) -> str:
    """Fixed 6-significant-digit rendering for text and csv output."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6g}"


# ---------------------------------------------------------------------------
# CLI-facing report carriers

@dataclass(frozen=True)
class BatchRow:
    id: str
    positive_sum: float
    risk_magnitude: float
    composite_value: float
    verdict: Verdict


@dataclass(frozen=True)
class BatchReport:
    rows: tuple[BatchRow, ...]
    mean_value: float
    verdict_counts: tuple[tuple[str, int], ...]  # fixed verdict order


@dataclass(frozen=True)
class EntropyDelta:
    mode: str
    h_before: float
    h_after: float
    delta: float


@dataclass(frozen=True)
class AhpReport:
    result: AhpResult
    profile: WeightProfile | None  # present when the matrix has 5 dimensions


@dataclass(frozen=True)
class ThresholdScanReport:
    points: tuple[ScanPoint, ...]


# ---------------------------------------------------------------------------
# JSON payloads (kind-tagged, full precision)

def _correlation_dict(c: CorrelationResult) -> dict:
    return {"r": c.r, "n": c.n, "t_stat": c.t_stat, "p_value": c.p_value}


def _correlation_from(d: dict) -> CorrelationResult:
    return CorrelationResult(r=d["r"], n=d["n"], t_stat=d["t_stat"],
                             p_value=d["p_value"])


def _curvefit_dict(c: CurveFitComparison) -> dict:
    return {
        "r2_linear": c.r2_linear,
        "r2_quadratic": c.r2_quadratic,
        "adj_r2_linear": c.adj_r2_linear,
        "adj_r2_quadratic": c.adj_r2_quadratic,
        "f_stat_quadratic_term": c.f_stat_quadratic_term,
        "p_value_quadratic_term": c.p_value_quadratic_term,
        "preferred": c.preferred.value,
    }


def _curvefit_from(d: dict) -> CurveFitComparison:
    return CurveFitComparison(
        r2_linear=d["r2_linear"], r2_quadratic=d["r2_quadratic"],
        adj_r2_linear=d["adj_r2_linear"],
        adj_r2_quadratic=d["adj_r2_quadratic"],
        f_stat_quadratic_term=d["f_stat_quadratic_term"],
        p_value_quadratic_term=d["p_value_quadratic_term"],
        preferred=PreferredModel(d["preferred"]))


def _moderation_dict(m: ModerationReport) -> dict:
    def group(g: GroupFit) -> dict:
        return {"n": g.n, "standardized_beta": g.standardized_beta,
                "p_value": g.p_value}
    return {
        "moderator_name": m.moderator_name,
        "threshold": m.threshold,
        "low_group": group(m.low_group),
        "high_group": group(m.high_group),
        "attenuation": m.attenuation,
    }


def _moderation_from(d: dict) -> ModerationReport:
    def group(g: dict) -> GroupFit:
        return GroupFit(n=g["n"], standardized_beta=g["standardized_beta"],
                        p_value=g["p_value"])
    return ModerationReport(
        moderator_name=d["moderator_name"], threshold=d["threshold"],
        low_group=group(d["low_group"]), high_group=group(d["high_group"]),
        attenuation=d["attenuation"])


def _hypothesis_dict(rep: HypothesisReport) -> dict:
    return {
        "kind": "hypothesis_report",
        "n": rep.n,
        "significance": rep.significance,
        "h1": {
            "factor_correlations": [
                {"factor": name, **_correlation_dict(c)}
                for name, c in rep.h1.factor_correlations],
            "single_factor_adj_r2": [
                {"factor": name, "adjusted_r_squared": value}
                for name, value in rep.h1.single_factor_adj_r2],
            "joint_adjusted_r2": rep.h1.joint_adjusted_r2,
            "interaction_beta": rep.h1.interaction_beta,
            "interaction_p": rep.h1.interaction_p,
            "supported": rep.h1.supported,
        },
        "h2": {
            "curve_fit": _curvefit_dict(rep.h2.curve_fit),
            "perturbation_multiplier": rep.h2.perturbation_multiplier,
            "perturbation_expected_pct": rep.h2.perturbation_expected_pct,
            "perturbation_observed_pct": rep.h2.perturbation_observed_pct,
            "perturbation_exact": rep.h2.perturbation_exact,
            "supported": rep.h2.supported,
        },
        "h3": {
            "moderation": _moderation_dict(rep.h3.moderation),
            "attenuation_cutoff": rep.h3.attenuation_cutoff,
            "group_difference_p": rep.h3.group_difference_p,
            "supported": rep.h3.supported,
        },
    }


def _hypothesis_from(d: dict) -> HypothesisReport:
    h1 = d["h1"]
    h2 = d["h2"]
    h3 = d["h3"]
    return HypothesisReport(
        n=d["n"],
        significance=d["significance"],
        h1=H1Result(
            factor_correlations=tuple(
                (e["factor"], _correlation_from(e))
                for e in h1["factor_correlations"]),
            single_factor_adj_r2=tuple(
                (e["factor"], e["adjusted_r_squared"])
                for e in h1["single_factor_adj_r2"]),
            joint_adjusted_r2=h1["joint_adjusted_r2"],
            interaction_beta=h1["interaction_beta"],
            interaction_p=h1["interaction_p"],
            supported=h1["supported"]),
        h2=H2Result(
            curve_fit=_curvefit_from(h2["curve_fit"]),
            perturbation_multiplier=h2["perturbation_multiplier"],
            perturbation_expected_pct=h2["perturbation_expected_pct"],
            perturbation_observed_pct=h2["perturbation_observed_pct"],
            perturbation_exact=h2["perturbation_exact"],
            supported=h2["supported"]),
        h3=H3Result(
            moderation=_moderation_from(h3["moderation"]),
            attenuation_cutoff=h3["attenuation_cutoff"],
            group_difference_p=h3["group_difference_p"],
            supported=h3["supported"]),
    )


def _to_payload(report) -> dict:
    if isinstance(report, ValueBreakdown):
        return {
            "kind": "value_breakdown",
            "positive_sum": report.positive_sum,
            "risk_magnitude": report.risk_magnitude,
            "composite_value": report.composite_value,
            "contributions": {k: report.contributions[k]
                              for k in CONTRIBUTION_ORDER},
            "verdict": report.verdict.value,
        }
    if isinstance(report, ValidationReport):
        payload: dict = {
            "kind": "validation_report",
            "source": report.source,
            "tolerance": report.tolerance,
            "weights_provenance": report.weights_provenance,
            "per_case_checks": [
                {"id": c.id, "stored_value": c.stored_value,
                 "recomputed_value": c.recomputed_value, "delta": c.delta,
                 "passed": c.passed}
                for c in report.per_case_checks],
            "all_passed": report.all_passed,
            "sign_separation": report.sign_separation,
            "correlation_block": (
                None if report.correlation_block is None
                else _correlation_dict(report.correlation_block)),
            "hypothesis_block": (
                None if report.hypothesis_block is None
                else _hypothesis_dict(report.hypothesis_block)),
            "hypothesis_note": report.hypothesis_note,
            "source_inconsistencies": [
                {"note_id": n.note_id, "topic": n.topic, "detail": n.detail}
                for n in report.source_inconsistencies],
        }
        return payload
    if isinstance(report, HypothesisReport):
        return _hypothesis_dict(report)
    if isinstance(report, SweepGrid):
        return {
            "kind": "sweep_grid",
            "weight_names": list(report.weight_names),
            "axes": [list(ax) for ax in report.axes],
            "swept": list(report.swept),
            "values": [float(v) for v in report.values.reshape(-1)],
            "v_min": report.v_min,
            "v_max": report.v_max,
            "sign_flip_boundaries": [list(b)
                                     for b in report.sign_flip_boundaries],
        }
    if isinstance(report, PerturbationSeries):
        return {
            "kind": "perturbation_series",
            "factor_name": report.factor_name,
            "base_value": report.base_value,
            "base_risk_f": report.base_risk_f,
            "base_composite": report.base_composite,
            "multipliers": list(report.multipliers),
            "rows": [
                {"factor_value": r.factor_value, "risk_f": r.risk_f,
                 "value_v": r.value_v, "pct_change_f": r.pct_change_f,
                 "pct_change_v": r.pct_change_v}
                for r in report.rows],
        }
    if isinstance(report, BreakevenResult):
        return {
            "kind": "breakeven_result",
            "p_star": report.p_star,
            "saturated": report.saturated,
            "residual": report.residual,
        }
    if isinstance(report, BatchReport):
        return {
            "kind": "batch_report",
            "rows": [
                {"id": r.id, "positive_sum": r.positive_sum,
                 "risk_magnitude": r.risk_magnitude,
                 "composite_value": r.composite_value,
                 "verdict": r.verdict.value}
                for r in report.rows],
            "mean_value": report.mean_value,
            "verdict_counts": [[name, count]
                               for name, count in report.verdict_counts],
        }
    if isinstance(report, EntropyDelta):
        return {
            "kind": "entropy_delta",
            "mode": report.mode,
            "h_before": report.h_before,
            "h_after": report.h_after,
            "delta": report.delta,
        }
    if isinstance(report, AhpReport):
        return {
            "kind": "ahp_report",
            "weights": list(report.result.weights),
            "lambda_max": report.result.lambda_max,
            "consistency_index": report.result.consistency_index,
            "consistency_ratio": report.result.consistency_ratio,
            "acceptable": report.result.acceptable,
            "profile": (None if report.profile is None
                        else weight_profile_to_dict(report.profile)),
        }
    if isinstance(report, ThresholdScanReport):
        return {
            "kind": "threshold_scan",
            "points": [
                {"error_probability": p.error_probability, "value": p.value,
                 "verdict": p.verdict.value}
                for p in report.points],
        }
    raise FormatError(f"cannot serialize {type(report).__name__}")


def _payload_to_report(d: dict):
    kind = d.get("kind")
    if kind == "value_breakdown":
        return ValueBreakdown(
            positive_sum=d["positive_sum"],
            risk_magnitude=d["risk_magnitude"],
            composite_value=d["composite_value"],
            contributions=dict(d["contributions"]),
            verdict=Verdict(d["verdict"]))
    if kind == "validation_report":
        return ValidationReport(
            source=d["source"],
            tolerance=d["tolerance"],
            weights_provenance=d["weights_provenance"],
            per_case_checks=tuple(
                CaseCheck(id=c["id"], stored_value=c["stored_value"],
                          recomputed_value=c["recomputed_value"],
                          delta=c["delta"], passed=c["passed"])
                for c in d["per_case_checks"]),
            sign_separation=d["sign_separation"],
            correlation_block=(
                None if d["correlation_block"] is None
                else _correlation_from(d["correlation_block"])),
            hypothesis_block=(
                None if d["hypothesis_block"] is None
                else _hypothesis_from(d["hypothesis_block"])),
            hypothesis_note=d["hypothesis_note"],
            source_inconsistencies=tuple(
                InconsistencyNote(note_id=n["note_id"], topic=n["topic"],
                                  detail=n["detail"])
                for n in d["source_inconsistencies"]))
    if kind == "hypothesis_report":
        return _hypothesis_from(d)
    if kind == "sweep_grid":
        axes = tuple(tuple(ax) for ax in d["axes"])
        sizes = tuple(len(ax) for ax in axes)
        values = np.array(d["values"], dtype=np.float64).reshape(sizes)
        values.setflags(write=False)
        return SweepGrid(
            weight_names=tuple(d["weight_names"]),
            axes=axes,
            swept=tuple(d["swept"]),
            values=values,
            v_min=d["v_min"],
            v_max=d["v_max"],
            sign_flip_boundaries=tuple(tuple(b)
                                       for b in d["sign_flip_boundaries"]))
    if kind == "perturbation_series":
        return PerturbationSeries(
            factor_name=d["factor_name"],
            base_value=d["base_value"],
            base_risk_f=d["base_risk_f"],
            base_composite=d["base_composite"],
            multipliers=tuple(d["multipliers"]),
            rows=tuple(
                PerturbationRow(factor_value=r["factor_value"],
                                risk_f=r["risk_f"], value_v=r["value_v"],
                                pct_change_f=r["pct_change_f"],
                                pct_change_v=r["pct_change_v"])
                for r in d["rows"]))
    if kind == "breakeven_result":
        return BreakevenResult(p_star=d["p_star"], saturated=d["saturated"],
                               residual=d["residual"])
    if kind == "batch_report":
        return BatchReport(
            rows=tuple(
                BatchRow(id=r["id"], positive_sum=r["positive_sum"],
                         risk_magnitude=r["risk_magnitude"],
                         composite_value=r["composite_value"],
                         verdict=Verdict(r["verdict"]))
                for r in d["rows"]),
            mean_value=d["mean_value"],
            verdict_counts=tuple((name, count)
                                 for name, count in d["verdict_counts"]))
    if kind == "entropy_delta":
        return EntropyDelta(mode=d["mode"], h_before=d["h_before"],
                            h_after=d["h_after"], delta=d["delta"])
    if kind == "ahp_report":
        result = AhpResult(
            weights=tuple(d["weights"]),
            lambda_max=d["lambda_max"],
            consistency_index=d["consistency_index"],
            consistency_ratio=d["consistency_ratio"],
            acceptable=d["acceptable"])
        profile = None
        if d["profile"] is not None:
            p = d["profile"]
            profile = WeightProfile(alpha=p["alpha"], beta=p["beta"],
                                    gamma=p["gamma"], delta=p["delta"],
                                    lam=p["lambda"],
                                    provenance=p["provenance"])
        return AhpReport(result=result, profile=profile)
    if kind == "threshold_scan":
        return ThresholdScanReport(points=tuple(
            ScanPoint(error_probability=p["error_probability"],
                      value=p["value"], verdict=Verdict(p["verdict"]))
            for p in d["points"]))
    raise SchemaError(f"unknown report kind {kind!r}")


def parse_report(data):
    """Rebuild a report object from its JSON emission."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise SchemaError("report payload must be a JSON object")
    return _payload_to_report(payload)


# ---------------------------------------------------------------------------
# Text rendering

def _table(headers: list[str], rows: list[list[str]], indent: str = "  ") -> list[str]:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [indent + "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append(indent + "  ".join(c.ljust(w)
                                        for c, w in zip(row, widths)).rstrip())
    return lines


def _text_validation(rep: ValidationReport) -> str:
    lines = [f"validation report: {rep.source}",
             f"tolerance: {format_sig(rep.tolerance)}"
             f"  (weights: {rep.weights_provenance})"]
    rows = [[c.id, format_sig(c.stored_value), format_sig(c.recomputed_value),
             format_sig(c.delta), "pass" if c.passed else "FAIL"]
            for c in rep.per_case_checks]
    lines += _table(["id", "stored", "recomputed", "delta", "status"], rows)
    n = len(rep.per_case_checks)
    n_pass = sum(c.passed for c in rep.per_case_checks)
    lines.append(f"identity checks: {n_pass}/{n} pass")
    lines.append("sign separation (success > 0 > failure): "
                 + ("yes" if rep.sign_separation else "NO"))
    if rep.correlation_block is not None:
        c = rep.correlation_block
        lines.append(f"value vs market success: r={format_sig(c.r)} "
                     f"t={format_sig(c.t_stat)} p={format_sig(c.p_value)} "
                     f"(n={c.n})")
    lines.append(f"hypothesis suite: {rep.hypothesis_note}")
    lines.append("known source inconsistencies:")
    for note in rep.source_inconsistencies:
        lines.append(f"  [{note.note_id}] {note.topic}: {note.detail}")
    return "\n".join(lines) + "\n"


def _text_hypothesis(rep: HypothesisReport) -> str:
    lines = [f"hypothesis suite (n={rep.n}, "
             f"significance={format_sig(rep.significance)})"]
    h1 = rep.h1
    lines.append("h1 synergy of positive factors: "
                 + ("supported" if h1.supported else "not supported"))
    rows = [[name, format_sig(c.r), format_sig(c.p_value), format_sig(r2)]
            for (name, c), (_, r2) in zip(h1.factor_correlations,
                                          h1.single_factor_adj_r2)]
    lines += _table(["factor", "r", "p", "adj_r2_single"], rows)
    lines.append(f"  joint adj R2: {format_sig(h1.joint_adjusted_r2)}  "
                 f"interaction beta: {format_sig(h1.interaction_beta)} "
                 f"(p={format_sig(h1.interaction_p)})")
    h2 = rep.h2
    lines.append("h2 non-linear risk damage: "
                 + ("supported" if h2.supported else "not supported"))
    cf = h2.curve_fit
    lines.append(f"  R2 linear {format_sig(cf.r2_linear)} vs quadratic "
                 f"{format_sig(cf.r2_quadratic)}; quadratic term "
                 f"F={format_sig(cf.f_stat_quadratic_term)} "
                 f"p={format_sig(cf.p_value_quadratic_term)} "
                 f"-> prefer {cf.preferred.value}")
    lines.append(f"  probability x{format_sig(h2.perturbation_multiplier)} "
                 f"scales risk by {format_sig(1.0 + h2.perturbation_observed_pct)} "
                 f"(exact quadratic: "
                 f"{'yes' if h2.perturbation_exact else 'no'})")
    h3 = rep.h3
    lines.append("h3 risk moderation of positives: "
                 + ("supported" if h3.supported else "not supported"))
    m = h3.moderation
    lines.append(f"  beta low {format_sig(m.low_group.standardized_beta)} "
                 f"(n={m.low_group.n}, p={format_sig(m.low_group.p_value)}) "
                 f"vs high {format_sig(m.high_group.standardized_beta)} "
                 f"(n={m.high_group.n}, p={format_sig(m.high_group.p_value)})")
    lines.append(f"  attenuation {format_sig(m.attenuation)} "
                 f"(cutoff {format_sig(h3.attenuation_cutoff)}), group "
                 f"difference p={format_sig(h3.group_difference_p)}")
    return "\n".join(lines) + "\n"


def _text_breakdown(rep: ValueBreakdown) -> str:
    lines = [f"positive sum:    {format_sig(rep.positive_sum)}",
             f"risk magnitude:  {format_sig(rep.risk_magnitude)}",
             f"composite value: {format_sig(rep.composite_value)}",
             f"verdict:         {rep.verdict.value}",
             "contributions:"]
    rows = [[name, format_sig(rep.contributions[name])]
            for name in CONTRIBUTION_ORDER]
    lines += _table(["term", "contribution"], rows)
    return "\n".join(lines) + "\n"


def _text_sweep(rep: SweepGrid) -> str:
    swept = ", ".join(rep.swept) if rep.swept else "none"
    lines = [f"weight sweep over: {swept}",
             f"cells: {rep.cell_count}",
             f"value range: [{format_sig(rep.v_min)}, "
             f"{format_sig(rep.v_max)}]",
             f"sign flips: {len(rep.sign_flip_boundaries)}"]
    for b in rep.sign_flip_boundaries[:20]:
        assignment = ", ".join(
            f"{n}={format_sig(v)}" for n, v in zip(rep.weight_names, b))
        lines.append(f"  crossing at {assignment}")
    if len(rep.sign_flip_boundaries) > 20:
        lines.append(f"  ... {len(rep.sign_flip_boundaries) - 20} more")
    return "\n".join(lines) + "\n"


def _text_perturbation(rep: PerturbationSeries) -> str:
    lines = [f"perturbation of {rep.factor_name} "
             f"(base {format_sig(rep.base_value)}, "
             f"base risk {format_sig(rep.base_risk_f)}, "
             f"base value {format_sig(rep.base_composite)})"]
    rows = [[format_sig(k), format_sig(r.factor_value), format_sig(r.risk_f),
             format_sig(r.value_v), format_sig(r.pct_change_f),
             format_sig(r.pct_change_v)]
            for k, r in zip(rep.multipliers, rep.rows)]
    lines += _table(["multiplier", "value", "risk_f", "composite",
                     "pct_change_f", "pct_change_v"], rows)
    return "\n".join(lines) + "\n"


def _text_breakeven(rep: BreakevenResult) -> str:
    if rep.saturated:
        return ("break-even: saturated (positives outweigh any feasible "
                "error probability)\n")
    return (f"break-even error probability: {format_sig(rep.p_star)}\n"
            f"residual |V(p*)|: {format_sig(rep.residual)}\n")


def _text_batch(rep: BatchReport) -> str:
    rows = [[r.id, format_sig(r.positive_sum), format_sig(r.risk_magnitude),
             format_sig(r.composite_value), r.verdict.value]
            for r in rep.rows]
    lines = _table(["id", "positive", "risk_f", "value", "verdict"], rows,
                   indent="")
    lines.append(f"cases: {len(rep.rows)}  "
                 f"mean value: {format_sig(rep.mean_value)}  "
                 + "  ".join(f"{name}: {count}"
                             for name, count in rep.verdict_counts))
    return "\n".join(lines) + "\n"


def _text_entropy(rep: EntropyDelta) -> str:
    unit = "bits" if rep.mode == "bits" else "fraction of max"
    return (f"entropy before: {format_sig(rep.h_before)} {unit}\n"
            f"entropy after:  {format_sig(rep.h_after)} {unit}\n"
            f"entropy reduction: {format_sig(rep.delta)} {unit}\n")


def _text_ahp(rep: AhpReport) -> str:
    r = rep.result
    lines = ["pairwise-comparison weights: "
             + ", ".join(format_sig(w) for w in r.weights),
             f"lambda_max: {format_sig(r.lambda_max)}  "
             f"CI: {format_sig(r.consistency_index)}  "
             f"CR: {format_sig(r.consistency_ratio)}  "
             + ("acceptable" if r.acceptable else "NOT acceptable (CR >= 0.10)")]
    if rep.profile is not None:
        p = rep.profile
        lines.append(
            "scoring profile: "
            f"alpha={format_sig(p.alpha)} beta={format_sig(p.beta)} "
            f"gamma={format_sig(p.gamma)} delta={format_sig(p.delta)} "
            f"lambda={format_sig(p.lam)}")
    return "\n".join(lines) + "\n"


def _text_scan(rep: ThresholdScanReport) -> str:
    rows = [[format_sig(p.error_probability), format_sig(p.value),
             p.verdict.value] for p in rep.points]
    return "\n".join(_table(["error_probability", "value", "verdict"], rows,
                            indent="")) + "\n"


_TEXT_RENDERERS = {
    ValidationReport: _text_validation,
    HypothesisReport: _text_hypothesis,
    ValueBreakdown: _text_breakdown,
    SweepGrid: _text_sweep,
    PerturbationSeries: _text_perturbation,
    BreakevenResult: _text_breakeven,
    BatchReport: _text_batch,
    EntropyDelta: _text_entropy,
    AhpReport: _text_ahp,
    ThresholdScanReport: _text_scan,
}


# ---------------------------------------------------------------------------
# CSV rendering

def _csv_stream(headers: list[str], rows: list[list[str]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return out.getvalue()


def _csv_report(report) -> str:
    if isinstance(report, SweepGrid):
        rows = [[format_sig(v) for v in assignment] + [format_sig(value)]
                for assignment, value in report.cells()]
        return _csv_stream(list(report.weight_names) + ["value"], rows)
    if isinstance(report, PerturbationSeries):
        rows = [[format_sig(k), format_sig(r.factor_value),
                 format_sig(r.risk_f), format_sig(r.value_v),
                 format_sig(r.pct_change_f), format_sig(r.pct_change_v)]
                for k, r in zip(report.multipliers, report.rows)]
        return _csv_stream(["multiplier", "factor_value", "risk_f", "value_v",
                            "pct_change_f", "pct_change_v"], rows)
    if isinstance(report, ValidationReport):
        rows = [[c.id, format_sig(c.stored_value),
                 format_sig(c.recomputed_value), format_sig(c.delta),
                 "pass" if c.passed else "fail"]
                for c in report.per_case_checks]
        return _csv_stream(["id", "stored_value", "recomputed_value", "delta",
                            "status"], rows)
    if isinstance(report, BatchReport):
        rows = [[r.id, format_sig(r.positive_sum),
                 format_sig(r.risk_magnitude), format_sig(r.composite_value),
                 r.verdict.value] for r in report.rows]
        return _csv_stream(["id", "positive_sum", "risk_magnitude",
                            "composite_value", "verdict"], rows)
    if isinstance(report, ThresholdScanReport):
        rows = [[format_sig(p.error_probability), format_sig(p.value),
                 p.verdict.value] for p in report.points]
        return _csv_stream(["error_probability", "value", "verdict"], rows)
    raise FormatError(
        f"{type(report).__name__} has no flat row form; use text or json")


# ---------------------------------------------------------------------------
# Entry point

def emit_report(report, format: str) -> bytes:
    """Serialize a report as 'text', 'json' or 'csv' bytes."""
    if format == "json":
        return (json.dumps(_to_payload(report), indent=2) + "\n").encode("utf-8")
    if format == "text":
        renderer = _TEXT_RENDERERS.get(type(report))
        if renderer is None:
            raise FormatError(f"cannot render {type(report).__name__} as text")
        return renderer(report).encode("utf-8")
    if format == "csv":
        return _csv_report(report).encode("utf-8")
    raise FormatError(f"unknown report format {format!r}; "
                      "expected 'text', 'json' or 'csv'")
