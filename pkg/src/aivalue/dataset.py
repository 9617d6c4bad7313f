"""Dataset schemas, CSV/JSON ingestion and the bundled reference cases.

Two record grades exist because the bundled study publishes different
levels of detail:

* factor-level rows carry the raw model inputs (four positive factors,
  three risk fields) and can be scored from scratch;
* component-level rows carry only the published aggregates (positive sum,
  risk term, composite value), which is all the reference table prints,
  so they support identity checking and risk-weight sweeps but not
  factor-level recomputation.

Fraction-valued columns may arrive in percent form by suffixing the
header with `_pct`; the value is divided by 100 at ingestion.  Numbers
are emitted with repr precision so emit -> load round-trips are exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum

from .errors import SchemaError, ValidationError
from .model import PositiveFactors, RiskFactors, WeightProfile

__all__ = [
    "CaseLabel",
    "CaseRecord",
    "ComponentCaseRecord",
    "VariableAggregate",
    "AggregateBlock",
    "Dataset",
    "FACTOR_COLUMNS",
    "COMPONENT_COLUMNS",
    "load_cases",
    "emit_dataset",
    "parse_single_case",
    "parse_weight_profile",
    "weight_profile_to_dict",
    "parse_pairwise_matrix_csv",
    "bundled_paper_dataset",
]

FACTOR_COLUMNS = (
    "id", "label", "entropy_reduction", "efficiency_gain", "cost_saving",
    "decision_quality", "error_probability", "error_impact",
    "correction_cost_ratio", "market_success_rate",
)
COMPONENT_COLUMNS = (
    "id", "label", "positive_sum", "risk_f", "value_v",
    "market_success_rate",
)

# Columns that may carry a `_pct` suffix (value / 100 at ingestion).
_FRACTION_COLUMNS = frozenset({
    "entropy_reduction", "efficiency_gain", "cost_saving",
    "error_probability", "market_success_rate",
})


class CaseLabel(str, Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    UNLABELED = "unlabeled"


def _check_rate(value, field: str):
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ValidationError(field, f"must be in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class CaseRecord:
    """One assessed product with raw factor-level inputs."""

    id: str
    label: CaseLabel
    factors: PositiveFactors
    risks: RiskFactors
    market_success_rate: float | None = None
    notes: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValidationError("id", "must be non-empty")
        object.__setattr__(self, "label", CaseLabel(self.label))
        object.__setattr__(self, "market_success_rate",
                           _check_rate(self.market_success_rate,
                                       "market_success_rate"))


@dataclass(frozen=True)
class ComponentCaseRecord:
    """One assessed product known only through its published aggregates."""

    id: str
    label: CaseLabel
    positive_sum: float
    risk_f: float
    value_v: float
    market_success_rate: float | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("id", "must be non-empty")
        object.__setattr__(self, "label", CaseLabel(self.label))
        for field in ("positive_sum", "risk_f", "value_v"):
            v = float(getattr(self, field))
            if not math.isfinite(v):
                raise ValidationError(field, f"must be finite, got {v!r}")
            object.__setattr__(self, field, v)
        if self.risk_f < 0.0:
            raise ValidationError("risk_f",
                                  f"must be >= 0, got {self.risk_f!r}")
        object.__setattr__(self, "market_success_rate",
                           _check_rate(self.market_success_rate,
                                       "market_success_rate"))


@dataclass(frozen=True)
class VariableAggregate:
    """Mean/SD of one study variable, overall and per outcome group."""

    name: str
    unit: str
    mean: float
    sd: float
    success_mean: float
    failure_mean: float


@dataclass(frozen=True)
class AggregateBlock:
    sample_size: int
    variables: tuple[VariableAggregate, ...]


@dataclass(frozen=True)
class Dataset:
    source: str
    cases: tuple[CaseRecord | ComponentCaseRecord, ...]
    aggregates: AggregateBlock | None = None

    def __post_init__(self):
        object.__setattr__(self, "cases", tuple(self.cases))
        seen = set()
        for case in self.cases:
            if case.id in seen:
                raise SchemaError(f"duplicate case id {case.id!r}")
            seen.add(case.id)

    @property
    def factor_cases(self) -> tuple[CaseRecord, ...]:
        return tuple(c for c in self.cases if isinstance(c, CaseRecord))

    @property
    def component_cases(self) -> tuple[ComponentCaseRecord, ...]:
        return tuple(c for c in self.cases
                     if isinstance(c, ComponentCaseRecord))


# ---------------------------------------------------------------------------
# Parsing

def _decode(source) -> str:
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"stream is not valid UTF-8: {exc}") from None
    if isinstance(source, str):
        return source
    data = source.read()
    return _decode(data)


def _resolve_header(raw: list[str]) -> tuple[list[str], set[str]]:
    """Map `_pct` variants onto canonical names; return (columns, pct set)."""
    columns = []
    pct = set()
    for name in raw:
        name = name.strip()
        if name.endswith("_pct") and name[:-4] in _FRACTION_COLUMNS:
            columns.append(name[:-4])
            pct.add(name[:-4])
        else:
            columns.append(name)
    return columns, pct


def _parse_number(value, row: int, column: str, percent: bool) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise SchemaError(f"{value!r} is not a number",
                          row=row, column=column) from None
    return number / 100.0 if percent else number


def _row_to_case(rec: dict, row: int, pct: set[str],
                 grade: str) -> CaseRecord | ComponentCaseRecord:
    def num(column: str) -> float:
        return _parse_number(rec[column], row, column, column in pct)

    def optional_rate():
        raw = rec.get("market_success_rate")
        if raw is None or raw == "":
            return None
        return _parse_number(raw, row, "market_success_rate",
                             "market_success_rate" in pct)

    label_raw = rec["label"]
    try:
        label = CaseLabel(label_raw)
    except ValueError:
        raise SchemaError(
            f"label must be one of {[l.value for l in CaseLabel]}, "
            f"got {label_raw!r}", row=row, column="label") from None
    try:
        if grade == "factor":
            return CaseRecord(
                id=str(rec["id"]),
                label=label,
                factors=PositiveFactors(
                    entropy_reduction=num("entropy_reduction"),
                    efficiency_gain=num("efficiency_gain"),
                    cost_saving=num("cost_saving"),
                    decision_quality=num("decision_quality"),
                ),
                risks=RiskFactors(
                    error_probability=num("error_probability"),
                    error_impact=num("error_impact"),
                    correction_cost_ratio=num("correction_cost_ratio"),
                ),
                market_success_rate=optional_rate(),
            )
        return ComponentCaseRecord(
            id=str(rec["id"]),
            label=label,
            positive_sum=num("positive_sum"),
            risk_f=num("risk_f"),
            value_v=num("value_v"),
            market_success_rate=optional_rate(),
        )
    except ValidationError as exc:
        raise SchemaError(str(exc), row=row, column=exc.field) from None


def _classify_columns(columns: list[str]) -> str:
    if set(columns) == set(FACTOR_COLUMNS):
        return "factor"
    if set(columns) == set(COMPONENT_COLUMNS):
        return "component"
    raise SchemaError(
        "header does not match the factor-level or component-level schema; "
        f"got columns {columns}")


def _parse_csv(text: str) -> Dataset:
    reader = csv.reader(io.StringIO(text))
    try:
        raw_header = next(reader)
    except StopIteration:
        raise SchemaError("missing header row") from None
    columns, pct = _resolve_header(raw_header)
    grade = _classify_columns(columns)
    cases = []
    for line_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # ignore blank lines
        if len(row) != len(columns):
            raise SchemaError(f"expected {len(columns)} cells, got {len(row)}",
                              row=line_no)
        rec = dict(zip(columns, row))
        cases.append(_row_to_case(rec, line_no, pct, grade))
    return Dataset(source="csv", cases=tuple(cases))


def _parse_aggregates(data, row: int | None = None) -> AggregateBlock:
    if not isinstance(data, dict):
        raise SchemaError("aggregates must be an object")
    try:
        sample_size = int(data["sample_size"])
        variables = []
        for entry in data["variables"]:
            variables.append(VariableAggregate(
                name=str(entry["name"]),
                unit=str(entry["unit"]),
                mean=float(entry["mean"]),
                sd=float(entry["sd"]),
                success_mean=float(entry["success_mean"]),
                failure_mean=float(entry["failure_mean"]),
            ))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed aggregates block: {exc}") from None
    return AggregateBlock(sample_size=sample_size, variables=tuple(variables))


def _parse_json(text: str) -> Dataset:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "cases" not in doc:
        raise SchemaError('expected an object with "source" and "cases"')
    if not isinstance(doc["cases"], list):
        raise SchemaError('"cases" must be a list')
    cases = []
    for i, rec in enumerate(doc["cases"]):
        if not isinstance(rec, dict):
            raise SchemaError("case entries must be objects", row=i)
        columns, pct = _resolve_header(list(rec.keys()))
        grade = _classify_columns(columns)
        resolved = dict(zip(columns, rec.values()))
        cases.append(_row_to_case(resolved, i, pct, grade))
    aggregates = None
    if doc.get("aggregates") is not None:
        aggregates = _parse_aggregates(doc["aggregates"])
    return Dataset(source=str(doc.get("source", "json")),
                   cases=tuple(cases), aggregates=aggregates)


def load_cases(source, format: str) -> Dataset:
    """Parse a dataset from bytes, text or a readable stream.

    `format` must be "csv" or "json".  Schema violations raise SchemaError
    with the offending row and column; duplicate ids are rejected.
    """
    text = _decode(source)
    if format == "csv":
        return _parse_csv(text)
    if format == "json":
        return _parse_json(text)
    raise SchemaError(f"unknown dataset format {format!r}; "
                      "expected 'csv' or 'json'")


# ---------------------------------------------------------------------------
# Emission

def _fmt(value) -> str:
    # repr of a Python float is the shortest string that round-trips.
    return repr(float(value))


def _case_to_dict(case) -> dict:
    if isinstance(case, CaseRecord):
        return {
            "id": case.id,
            "label": case.label.value,
            "entropy_reduction": case.factors.entropy_reduction,
            "efficiency_gain": case.factors.efficiency_gain,
            "cost_saving": case.factors.cost_saving,
            "decision_quality": case.factors.decision_quality,
            "error_probability": case.risks.error_probability,
            "error_impact": case.risks.error_impact,
            "correction_cost_ratio": case.risks.correction_cost_ratio,
            "market_success_rate": case.market_success_rate,
        }
    return {
        "id": case.id,
        "label": case.label.value,
        "positive_sum": case.positive_sum,
        "risk_f": case.risk_f,
        "value_v": case.value_v,
        "market_success_rate": case.market_success_rate,
    }


def emit_dataset(dataset: Dataset, format: str) -> bytes:
    """Serialize a dataset; the exact inverse of load_cases.

    CSV carries the case rows only (one grade per file; aggregates have
    no row representation and are dropped with the source string).  JSON
    carries the complete document.
    """
    if format == "json":
        doc: dict = {"source": dataset.source,
                     "cases": [_case_to_dict(c) for c in dataset.cases]}
        if dataset.aggregates is not None:
            doc["aggregates"] = {
                "sample_size": dataset.aggregates.sample_size,
                "variables": [vars(v) for v in dataset.aggregates.variables],
            }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    if format != "csv":
        raise SchemaError(f"unknown dataset format {format!r}; "
                          "expected 'csv' or 'json'")
    grades = {type(c) for c in dataset.cases}
    if len(grades) > 1:
        raise SchemaError("csv cannot mix factor-level and component-level "
                          "rows; emit json instead")
    columns = (COMPONENT_COLUMNS if grades == {ComponentCaseRecord}
               else FACTOR_COLUMNS)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for case in dataset.cases:
        rec = _case_to_dict(case)
        writer.writerow([
            rec[c] if c in ("id", "label")
            else ("" if rec[c] is None else _fmt(rec[c]))
            for c in columns])
    return out.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# Small carriers used by the CLI

def parse_single_case(data) -> CaseRecord | ComponentCaseRecord:
    """Parse a one-case JSON payload: a bare case object or a dataset."""
    text = _decode(data)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "cases" in doc:
        dataset = _parse_json(text)
        if len(dataset.cases) != 1:
            raise SchemaError(f"expected exactly one case, got "
                              f"{len(dataset.cases)}")
        return dataset.cases[0]
    if not isinstance(doc, dict):
        raise SchemaError("expected a JSON object describing one case")
    columns, pct = _resolve_header(list(doc.keys()))
    grade = _classify_columns(columns)
    return _row_to_case(dict(zip(columns, doc.values())), 0, pct, grade)


def parse_weight_profile(data) -> WeightProfile:
    """Parse the weights JSON document {"alpha": ..., ..., "lambda": ...}."""
    text = _decode(data)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("weights document must be a JSON object")
    required = ("alpha", "beta", "gamma", "delta", "lambda")
    missing = [k for k in required if k not in doc]
    if missing:
        raise SchemaError(f"weights document is missing {missing}")
    unknown = [k for k in doc if k not in (*required, "provenance")]
    if unknown:
        raise SchemaError(f"unknown weight keys {unknown}")
    try:
        return WeightProfile(
            alpha=float(doc["alpha"]), beta=float(doc["beta"]),
            gamma=float(doc["gamma"]), delta=float(doc["delta"]),
            lam=float(doc["lambda"]),
            provenance=doc.get("provenance", "manual"),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed weights document: {exc}") from None
    except ValidationError as exc:
        raise SchemaError(str(exc), column=exc.field) from None


def weight_profile_to_dict(profile: WeightProfile) -> dict:
    return {
        "alpha": profile.alpha,
        "beta": profile.beta,
        "gamma": profile.gamma,
        "delta": profile.delta,
        "lambda": profile.lam,
        "provenance": profile.provenance.value,
    }


def parse_pairwise_matrix_csv(data):
    """Parse an n x n pairwise-comparison matrix from headerless CSV."""
    from .ahp import PairwiseMatrix

    text = _decode(data)
    rows = []
    for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        try:
            rows.append(tuple(float(cell) for cell in row))
        except ValueError:
            raise SchemaError("matrix cells must be numbers",
                              row=line_no) from None
    if not rows:
        raise SchemaError("matrix file is empty")
    try:
        return PairwiseMatrix(tuple(rows))
    except ValidationError as exc:
        raise SchemaError(str(exc)) from None


# ---------------------------------------------------------------------------
# Bundled reference data

_TABLE_ROWS = (
    # id, label, positive sum, risk term, composite value, market success
    ("S1", "success", 1.86, 0.32, 1.54, 0.92),
    ("S2", "success", 2.15, 0.47, 1.68, 0.88),
    ("S3", "success", 1.72, 0.29, 1.43, 0.90),
    ("S4", "success", 2.31, 0.53, 1.78, 0.95),
    ("S5", "success", 1.98, 0.38, 1.60, 0.85),
    ("F1", "failure", 0.87, 3.26, -2.39, 0.12),
    ("F2", "failure", 0.72, 2.89, -2.17, 0.08),
    ("F3", "failure", 0.95, 4.12, -3.17, 0.05),
    ("F4", "failure", 0.68, 3.54, -2.86, 0.10),
    ("F5", "failure", 0.81, 2.97, -2.16, 0.15),
)

# Descriptive statistics of the same study: mean, sd, then the success-
# and failure-group means.  Percent variables are stored as fractions;
# currency variables keep their published unit (10k CNY), since the study
# never states the reference budgets needed to turn them into ratios.
_TABLE_AGGREGATES = (
    ("entropy_reduction", "fraction", 0.52, 0.21, 0.73, 0.31),
    ("efficiency_gain", "fraction", 0.386, 0.152, 0.524, 0.248),
    ("cost_saving_annual", "10k CNY/year", 286.3, 112.5, 412.7, 160.0),
    ("decision_quality", "likert 1-5", 3.8, 0.9, 4.5, 3.1),
    ("error_probability", "fraction", 0.128, 0.085, 0.053, 0.203),
    ("error_impact", "severity 1-10", 4.2, 2.6, 2.1, 6.3),
    ("error_correction_cost", "10k CNY", 45.6, 31.2, 18.9, 72.3),
)


def bundled_paper_dataset() -> Dataset:
    """The packaged reference study: 10 component-grade cases plus the
    descriptive-statistics block.

    The published table prints component sums rather than raw factors, so
    these rows are ComponentCaseRecord and skip factor-level recomputation.
    """
    cases = tuple(
        ComponentCaseRecord(id=r[0], label=CaseLabel(r[1]), positive_sum=r[2],
                            risk_f=r[3], value_v=r[4],
                            market_success_rate=r[5])
        for r in _TABLE_ROWS)
    aggregates = AggregateBlock(
        sample_size=10,
        variables=tuple(VariableAggregate(*row) for row in _TABLE_AGGREGATES))
    return Dataset(source="bundled commercial case study (10 AI products)",
                   cases=cases, aggregates=aggregates)
