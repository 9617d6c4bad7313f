"""Core composite-value model for AI products.

An assessed product is scored as

    V = alpha * entropy_reduction + beta * efficiency_gain
        + gamma * cost_saving + delta * decision_quality
        - lambda * risk

where the risk term couples its three drivers non-linearly:

    risk = error_probability^2 * error_impact * (1 + correction_cost_ratio)

The quadratic probability term encodes accelerating value loss as errors
become more frequent; impact and correction cost enter multiplicatively,
so a severe, expensive-to-fix error class is penalized far beyond the sum
of its parts.

Canonical units: probabilities and fraction-valued factors live in [0, 1],
error impact on a 0..10 severity scale, decision quality on a 0..5 scale,
and both cost figures as ratios to a declared reference budget.  Inputs
outside their domain are rejected, never clamped, so published score
tables can be audited exactly.

All functions here are pure; values are immutable and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import ConfigurationError, IntegrityError, ValidationError

__all__ = [
    "PositiveFactors",
    "RiskFactors",
    "WeightProvenance",
    "WeightProfile",
    "Verdict",
    "VerdictThresholds",
    "ValueBreakdown",
    "CONTRIBUTION_ORDER",
    "risk_magnitude",
    "positive_sum",
    "composite_value",
    "classify_verdict",
    "decompose",
]

# Fixed ordering of the per-term contributions, risk last.
CONTRIBUTION_ORDER = (
    "entropy_reduction",
    "efficiency_gain",
    "cost_saving",
    "decision_quality",
    "risk",
)


def _check_range(name: str, value: float, lo: float, hi: float | None) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(name, f"must be finite, got {value!r}")
    if value < lo:
        raise ValidationError(name, f"must be >= {lo}, got {value!r}")
    if hi is not None and value > hi:
        raise ValidationError(name, f"must be <= {hi}, got {value!r}")
    return value


@dataclass(frozen=True)
class PositiveFactors:
    """The four value-creating dimensions of an assessed product.

    entropy_reduction: normalized uncertainty removed, in [0, 1]
    efficiency_gain:   proportional process improvement, in [0, 1]
    cost_saving:       savings as a fraction of a reference budget, in [0, 1]
    decision_quality:  perceived decision-quality score on a 0..5 scale
    """

    entropy_reduction: float
    efficiency_gain: float
    cost_saving: float
    decision_quality: float

    def __post_init__(self):
        object.__setattr__(self, "entropy_reduction",
                           _check_range("entropy_reduction",
                                        self.entropy_reduction, 0.0, 1.0))
        object.__setattr__(self, "efficiency_gain",
                           _check_range("efficiency_gain",
                                        self.efficiency_gain, 0.0, 1.0))
        object.__setattr__(self, "cost_saving",
                           _check_range("cost_saving",
                                        self.cost_saving, 0.0, 1.0))
        object.__setattr__(self, "decision_quality",
                           _check_range("decision_quality",
                                        self.decision_quality, 0.0, 5.0))


@dataclass(frozen=True)
class RiskFactors:
    """The three coupled risk drivers of an assessed product.

    error_probability:     probability of a wrong decision, in [0, 1]
    error_impact:          severity of a wrong decision, 0..10 scale
    correction_cost_ratio: correction cost over a reference budget, >= 0
    """

    error_probability: float
    error_impact: float
    correction_cost_ratio: float

    def __post_init__(self):
        object.__setattr__(self, "error_probability",
                           _check_range("error_probability",
                                        self.error_probability, 0.0, 1.0))
        object.__setattr__(self, "error_impact",
                           _check_range("error_impact",
                                        self.error_impact, 0.0, 10.0))
        object.__setattr__(self, "correction_cost_ratio",
                           _check_range("correction_cost_ratio",
                                        self.correction_cost_ratio, 0.0, None))


class WeightProvenance(str, Enum):
    DEFAULT = "default"
    AHP = "ahp"
    MANUAL = "manual"


@dataclass(frozen=True)
class WeightProfile:
    """The five term weights of the composite score.

    alpha, beta, gamma, delta weight the positive terms in the order of
    CONTRIBUTION_ORDER; lam weights the risk term (serialized under the
    key "lambda", which Python reserves).
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    lam: float
    provenance: WeightProvenance = WeightProvenance.MANUAL

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "lam"):
            object.__setattr__(self, name,
                               _check_range(name, getattr(self, name),
                                            0.0, None))
        object.__setattr__(self, "provenance",
                           WeightProvenance(self.provenance))

    @classmethod
    def default(cls) -> "WeightProfile":
        """The reference profile (1, 0.5, 0.3, 0.2, 1)."""
        return cls(1.0, 0.5, 0.3, 0.2, 1.0, WeightProvenance.DEFAULT)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta, self.lam)


class Verdict(str, Enum):
    PROCEED = "proceed"
    REVIEW = "review"
    REJECT = "reject"


@dataclass(frozen=True)
class VerdictThresholds:
    """Gate configuration: reject below t_reject, proceed above t_proceed.

    Defaults put both thresholds at zero, so exactly-zero scores land in
    the review band rather than silently passing the gate.
    """

    t_reject: float = 0.0
    t_proceed: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.t_reject) and math.isfinite(self.t_proceed)):
            raise ConfigurationError("verdict thresholds must be finite")
        if self.t_reject > self.t_proceed:
            raise ConfigurationError(
                f"inverted thresholds: t_reject {self.t_reject} > "
                f"t_proceed {self.t_proceed}")


@dataclass(frozen=True)
class ValueBreakdown:
    """Full decomposition of one scored case.

    composite_value always equals positive_sum - lam * risk_magnitude,
    and the five entries of `contributions` (risk entry already weighted
    and negated) sum to composite_value.
    """

    positive_sum: float
    risk_magnitude: float
    composite_value: float
    contributions: dict[str, float] = field(compare=True)
    verdict: Verdict = Verdict.REVIEW


def risk_magnitude(risks: RiskFactors) -> float:
    """Unweighted coupled risk term p^2 * impact * (1 + correction).

    Zero probability or zero impact annihilates the whole product.
    """
    p = risks.error_probability
    return p * p * risks.error_impact * (1.0 + risks.correction_cost_ratio)


def positive_sum(factors: PositiveFactors, weights: WeightProfile) -> float:
    """Weighted sum of the four positive terms."""
    return ((weights.alpha * factors.entropy_reduction
             + weights.beta * factors.efficiency_gain)
            + weights.gamma * factors.cost_saving) \
        + weights.delta * factors.decision_quality


def classify_verdict(v: float,
                     thresholds: VerdictThresholds | None = None) -> Verdict:
    """Map a composite value onto the proceed/review/reject gate."""
    t = thresholds if thresholds is not None else VerdictThresholds()
    if v > t.t_proceed:
        return Verdict.PROCEED
    if v < t.t_reject:
        return Verdict.REJECT
    return Verdict.REVIEW


def composite_value(factors: PositiveFactors, risks: RiskFactors,
                    weights: WeightProfile,
                    thresholds: VerdictThresholds | None = None,
                    ) -> ValueBreakdown:
    """Score one case: positive sum, risk term, composite value, verdict.

    The risk contribution is recorded as -lam * risk_magnitude, so the
    five contributions sum exactly to the composite value and remain
    weight-transparent for diagnostics.
    """
    ps = positive_sum(factors, weights)
    f = risk_magnitude(risks)
    v = ps - weights.lam * f
    contributions = {
        "entropy_reduction": weights.alpha * factors.entropy_reduction,
        "efficiency_gain": weights.beta * factors.efficiency_gain,
        "cost_saving": weights.gamma * factors.cost_saving,
        "decision_quality": weights.delta * factors.decision_quality,
        "risk": -(weights.lam * f),
    }
    return ValueBreakdown(
        positive_sum=ps,
        risk_magnitude=f,
        composite_value=v,
        contributions=contributions,
        verdict=classify_verdict(v, thresholds),
    )


def decompose(breakdown: ValueBreakdown,
              ) -> list[tuple[str, float, float]]:
    """Ordered per-term view: (term, signed contribution, share of |V|).

    Shares are computed against the sum of absolute contributions, so they
    stay meaningful when positive and risk terms nearly cancel.  Raises
    IntegrityError if the breakdown no longer satisfies its own identities
    (e.g. it was built by hand or tampered with).
    """
    contributions = breakdown.contributions
    missing = [k for k in CONTRIBUTION_ORDER if k not in contributions]
    if missing or len(contributions) != len(CONTRIBUTION_ORDER):
        raise IntegrityError(
            f"contributions must carry exactly {CONTRIBUTION_ORDER}")
    if breakdown.risk_magnitude < 0.0:
        raise IntegrityError("risk_magnitude must be nonnegative")
    total = 0.0
    for name in CONTRIBUTION_ORDER:
        total += contributions[name]
    if abs(total - breakdown.composite_value) > 1e-9:
        raise IntegrityError(
            "contributions no longer sum to the composite value "
            f"({total!r} vs {breakdown.composite_value!r})")
    positives = 0.0
    for name in CONTRIBUTION_ORDER[:4]:
        positives += contributions[name]
    if abs(positives - breakdown.positive_sum) > 1e-9:
        raise IntegrityError(
            "positive contributions no longer sum to positive_sum")

    scale = sum(abs(contributions[name]) for name in CONTRIBUTION_ORDER)
    rows = []
    for name in CONTRIBUTION_ORDER:
        c = contributions[name]
        share = abs(c) / scale if scale > 0.0 else 0.0
        rows.append((name, c, share))
    return rows
