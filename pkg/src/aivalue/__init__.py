"""Composite value scoring for AI products.

A deterministic library and CLI that scores products as a weighted sum of
positive factors (uncertainty reduction, efficiency, cost saving,
decision quality) minus a non-linear coupled risk term, plus the
machinery to trust such scores: identity validation against the bundled
reference table, a statistical hypothesis suite, sensitivity and
break-even analysis, and AHP-based weight calibration.
"""

from ._backend import backend_name
from .ahp import AhpResult, PairwiseMatrix, ahp_weights, profile_from_ahp, random_index
from .dataset import (
    AggregateBlock,
    CaseLabel,
    CaseRecord,
    ComponentCaseRecord,
    Dataset,
    VariableAggregate,
    bundled_paper_dataset,
    emit_dataset,
    load_cases,
)
from .entropy import (
    DiscreteDistribution,
    entropy_reduction,
    normalized_entropy,
    shannon_entropy,
)
from .errors import ValueModelError
from .harness import (
    HypothesisConfig,
    HypothesisReport,
    SyntheticPopulation,
    ValidationReport,
    run_hypothesis_suite,
    synthetic_population,
    validate_paper_tables,
)
from .model import (
    PositiveFactors,
    RiskFactors,
    ValueBreakdown,
    Verdict,
    VerdictThresholds,
    WeightProfile,
    classify_verdict,
    composite_value,
    decompose,
    positive_sum,
    risk_magnitude,
)
from .sensitivity import (
    BreakevenResult,
    PerturbationSeries,
    SweepGrid,
    breakeven_probability,
    component_weight_sweep,
    perturb_risk_factor,
    threshold_scan,
    weight_sweep,
)
from .stats import (
    CorrelationResult,
    CurveFitComparison,
    ModerationReport,
    RegressionResult,
    curve_fit_compare,
    interaction_design,
    moderation_analysis,
    ols,
    pearson,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "ValueModelError",
    # model
    "PositiveFactors", "RiskFactors", "WeightProfile", "ValueBreakdown",
    "Verdict", "VerdictThresholds", "risk_magnitude", "positive_sum",
    "composite_value", "classify_verdict", "decompose",
    # entropy
    "DiscreteDistribution", "shannon_entropy", "normalized_entropy",
    "entropy_reduction",
    # stats
    "CorrelationResult", "RegressionResult", "CurveFitComparison",
    "ModerationReport", "pearson", "ols", "interaction_design",
    "curve_fit_compare", "moderation_analysis",
    # sensitivity
    "SweepGrid", "PerturbationSeries", "BreakevenResult", "weight_sweep",
    "component_weight_sweep", "perturb_risk_factor", "breakeven_probability",
    "threshold_scan",
    # calibration
    "PairwiseMatrix", "AhpResult", "ahp_weights", "random_index",
    "profile_from_ahp",
    # datasets and harness
    "CaseLabel", "CaseRecord", "ComponentCaseRecord", "Dataset",
    "AggregateBlock", "VariableAggregate", "load_cases", "emit_dataset",
    "bundled_paper_dataset", "ValidationReport", "validate_paper_tables",
    "HypothesisConfig", "HypothesisReport", "SyntheticPopulation",
    "run_hypothesis_suite", "synthetic_population",
]
