"""Sensitivity tooling: weight sweeps, risk perturbation, break-even.

The break-even probability has a closed form because the composite value
is quadratic in error probability: setting

    positive_sum - lam * p^2 * impact * (1 + correction) = 0

gives p* = sqrt(positive_sum / (lam * impact * (1 + correction))).  Below
p* the case scores positive, above it negative; when p* > 1 the case is
"saturated": no feasible error probability can push it below zero, which
is reported as an explicit state rather than a probability of 1 so gate
logic cannot confuse the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from ._backend import kernels
from .errors import DomainError, ResourceLimitError, UsageError
from .model import (
    PositiveFactors,
    RiskFactors,
    Verdict,
    VerdictThresholds,
    WeightProfile,
    classify_verdict,
    positive_sum,
    risk_magnitude,
)

__all__ = [
    "WEIGHT_ORDER",
    "CELL_BUDGET",
    "SweepGrid",
    "PerturbationRow",
    "PerturbationSeries",
    "BreakevenResult",
    "ScanPoint",
    "weight_sweep",
    "component_weight_sweep",
    "perturb_risk_factor",
    "breakeven_probability",
    "threshold_scan",
]

WEIGHT_ORDER = ("alpha", "beta", "gamma", "delta", "lambda")
_WEIGHT_ATTRS = {"alpha": "alpha", "beta": "beta", "gamma": "gamma",
                 "delta": "delta", "lambda": "lam"}
CELL_BUDGET = 1_000_000

_RISK_FIELDS = ("error_probability", "error_impact", "correction_cost_ratio")


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Composite values over a Cartesian grid of weight assignments.

    `axes` always carries all five weights in WEIGHT_ORDER; weights not
    being swept contribute a one-point axis at their base value.  `values`
    holds V with one dimension per axis, in axis order.  Boundaries are
    the grid assignments whose value differs in sign from the previous
    cell along some axis (a zero cell counts as its own sign).
    """

    weight_names: tuple[str, ...]
    axes: tuple[tuple[float, ...], ...]
    swept: tuple[str, ...]
    values: np.ndarray
    v_min: float
    v_max: float
    sign_flip_boundaries: tuple[tuple[float, ...], ...]

    @property
    def cell_count(self) -> int:
        return int(self.values.size)

    def cells(self) -> Iterator[tuple[tuple[float, ...], float]]:
        """Yield (weight assignment, value) in row-major grid order."""
        flat = self.values.reshape(-1)
        sizes = tuple(len(ax) for ax in self.axes)
        for k in range(flat.size):
            idx = np.unravel_index(k, sizes)
            assignment = tuple(self.axes[d][i] for d, i in enumerate(idx))
            yield assignment, float(flat[k])


def _validate_range(name: str, spec) -> tuple[float, ...]:
    try:
        lo, hi, steps = spec
    except (TypeError, ValueError):
        raise UsageError(
            f"range for {name!r} must be a (lo, hi, steps) triple") from None
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError(f"range for {name!r} must be finite")
    if lo < 0.0:
        raise UsageError(f"weights are nonnegative; {name!r} range starts "
                         f"at {lo}")
    if lo > hi:
        raise UsageError(f"range for {name!r} has lo {lo} > hi {hi}")
    if steps != int(steps) or int(steps) < 1:
        raise UsageError(f"steps for {name!r} must be a positive integer, "
                         f"got {steps!r}")
    steps = int(steps)
    if steps == 1:
        return (lo,)
    return tuple(np.linspace(lo, hi, steps).tolist())


def _build_grid(dh: float, eff: float, cost: float, quality: float,
                risk: float, axes: Sequence[tuple[float, ...]],
                swept: tuple[str, ...]) -> SweepGrid:
    sizes = tuple(len(ax) for ax in axes)
    count = math.prod(sizes)
    if count > CELL_BUDGET:
        raise ResourceLimitError(
            f"weight sweep exceeds the {CELL_BUDGET}-cell budget", count)
    flat = kernels.weight_grid(dh, eff, cost, quality, risk,
                               axes[0], axes[1], axes[2], axes[3], axes[4])
    values = flat.reshape(sizes)
    values.setflags(write=False)

    boundary_idx: set[int] = set()
    signs = np.sign(values)
    for axis, size in enumerate(sizes):
        if size < 2:
            continue
        changed = np.diff(signs, axis=axis) != 0
        if not changed.any():
            continue
        where = np.argwhere(changed)
        where[:, axis] += 1  # flag the cell after the flip
        for idx in where:
            boundary_idx.add(int(np.ravel_multi_index(tuple(idx), sizes)))
    boundaries = tuple(
        tuple(axes[d][i] for d, i in enumerate(np.unravel_index(k, sizes)))
        for k in sorted(boundary_idx))

    return SweepGrid(
        weight_names=WEIGHT_ORDER,
        axes=tuple(tuple(ax) for ax in axes),
        swept=swept,
        values=values,
        v_min=float(values.min()),
        v_max=float(values.max()),
        sign_flip_boundaries=boundaries,
    )


def weight_sweep(factors: PositiveFactors, risks: RiskFactors,
                 ranges: Mapping[str, tuple],
                 base: WeightProfile | None = None) -> SweepGrid:
    """Evaluate the composite value over a Cartesian grid of weights.

    `ranges` maps weight names (WEIGHT_ORDER spelling, so the risk weight
    is "lambda") to inclusive (lo, hi, steps) grids; steps == 1 selects
    the single value lo.  Unswept weights stay at `base` (the default
    profile if omitted).  The total cell count is capped at CELL_BUDGET.
    """
    base = base if base is not None else WeightProfile.default()
    unknown = [k for k in ranges if k not in WEIGHT_ORDER]
    if unknown:
        raise UsageError(f"unknown weight name(s) {unknown}; expected "
                         f"{WEIGHT_ORDER}")
    axes = []
    for name in WEIGHT_ORDER:
        if name in ranges:
            axes.append(_validate_range(name, ranges[name]))
        else:
            axes.append((getattr(base, _WEIGHT_ATTRS[name]),))
    swept = tuple(name for name in WEIGHT_ORDER if name in ranges)
    return _build_grid(factors.entropy_reduction, factors.efficiency_gain,
                       factors.cost_saving, factors.decision_quality,
                       risk_magnitude(risks), axes, swept)


def component_weight_sweep(positive_total: float, risk_term: float,
                           lambda_range: tuple) -> SweepGrid:
    """Risk-weight sweep for a component-grade case.

    Component rows publish only the aggregate positive sum and risk term
    (folded at the default positive weights), so the risk weight is the
    only one that can honestly be varied: V(lambda) = sum - lambda * f.
    The four positive axes are recorded at the default profile for
    reference.
    """
    if not math.isfinite(positive_total) or not math.isfinite(risk_term):
        raise UsageError("component sums must be finite")
    if risk_term < 0.0:
        raise UsageError(f"risk term must be nonnegative, got {risk_term}")
    defaults = WeightProfile.default()
    # dh carries the whole published sum; alpha stays pinned at 1.
    axes = [(defaults.alpha,), (defaults.beta,), (defaults.gamma,),
            (defaults.delta,), _validate_range("lambda", lambda_range)]
    return _build_grid(positive_total, 0.0, 0.0, 0.0, risk_term, axes,
                       ("lambda",))


@dataclass(frozen=True)
class PerturbationRow:
    factor_value: float
    risk_f: float
    value_v: float
    pct_change_f: float
    pct_change_v: float


@dataclass(frozen=True)
class PerturbationSeries:
    """Model response to scaling one risk field by a list of multipliers.

    Percentage changes are fractions (0.25 means +25%) and are always
    measured against the unperturbed base case, not the previous row.
    """

    factor_name: str
    base_value: float
    base_risk_f: float
    base_composite: float
    multipliers: tuple[float, ...]
    rows: tuple[PerturbationRow, ...]


def _pct_change(new: float, base: float) -> float:
    if base != 0.0:
        return (new - base) / base
    if new == 0.0:
        return 0.0
    return math.copysign(math.inf, new)


def perturb_risk_factor(factors: PositiveFactors, risks: RiskFactors,
                        weights: WeightProfile, target: str,
                        multipliers: Sequence[float]) -> PerturbationSeries:
    """Scale one risk field through `multipliers` and track f and V.

    Perturbed values must stay inside the field's domain; pushing a
    probability past 1 (or an impact past 10) is an error, never a silent
    clamp, because a clamped row would fake a flat response.
    """
    if target not in _RISK_FIELDS:
        raise UsageError(f"unknown risk field {target!r}; expected one of "
                         f"{_RISK_FIELDS}")
    ks = [float(k) for k in multipliers]
    if not ks:
        raise UsageError("need at least one multiplier")
    for k in ks:
        if not math.isfinite(k) or k < 0.0:
            raise UsageError(f"multipliers must be finite and >= 0, got {k!r}")

    base_value = getattr(risks, target)
    base_f = risk_magnitude(risks)
    lam = weights.lam
    ps = positive_sum(factors, weights)
    base_v = ps - lam * base_f

    limits = {"error_probability": 1.0, "error_impact": 10.0,
              "correction_cost_ratio": None}
    limit = limits[target]
    rows = []
    for k in ks:
        value = k * base_value
        if limit is not None and value > limit:
            raise DomainError(
                f"multiplier {k} drives {target} to {value}, outside its "
                f"domain [0, {limit}]")
        fields = {f: getattr(risks, f) for f in _RISK_FIELDS}
        fields[target] = value
        f_k = risk_magnitude(RiskFactors(**fields))
        v_k = ps - lam * f_k
        rows.append(PerturbationRow(
            factor_value=value,
            risk_f=f_k,
            value_v=v_k,
            pct_change_f=_pct_change(f_k, base_f),
            pct_change_v=_pct_change(v_k, base_v),
        ))
    return PerturbationSeries(
        factor_name=target,
        base_value=base_value,
        base_risk_f=base_f,
        base_composite=base_v,
        multipliers=tuple(ks),
        rows=tuple(rows),
    )


@dataclass(frozen=True)
class BreakevenResult:
    """Error probability at which the composite value crosses zero.

    saturated=True means the positives outweigh the worst feasible risk
    (p* would exceed 1); p_star and residual are then None.
    """

    p_star: float | None
    saturated: bool
    residual: float | None


def breakeven_probability(factors: PositiveFactors, risks: RiskFactors,
                          weights: WeightProfile) -> BreakevenResult:
    """Closed-form zero crossing of V in the error probability."""
    denom = (weights.lam * risks.error_impact
             * (1.0 + risks.correction_cost_ratio))
    if denom == 0.0:
        raise DomainError(
            "value has no sensitivity to error probability: "
            "lambda * impact * (1 + correction cost) is zero")
    ps = positive_sum(factors, weights)
    p_star = math.sqrt(ps / denom)
    if p_star > 1.0:
        return BreakevenResult(p_star=None, saturated=True, residual=None)
    at_star = RiskFactors(error_probability=p_star,
                          error_impact=risks.error_impact,
                          correction_cost_ratio=risks.correction_cost_ratio)
    residual = abs(ps - weights.lam * risk_magnitude(at_star))
    return BreakevenResult(p_star=p_star, saturated=False, residual=residual)


@dataclass(frozen=True)
class ScanPoint:
    error_probability: float
    value: float
    verdict: Verdict


def threshold_scan(factors: PositiveFactors, risks: RiskFactors,
                   weights: WeightProfile, p_grid: Sequence[float],
                   thresholds: VerdictThresholds | None = None,
                   ) -> tuple[ScanPoint, ...]:
    """Evaluate V and the verdict along an increasing error-probability grid."""
    grid = np.asarray(list(p_grid), dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise UsageError("probability grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(grid)):
        raise UsageError("probability grid contains non-finite values")
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise UsageError("probability grid values must lie in [0, 1]")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise UsageError("probability grid must be strictly increasing")

    ps = positive_sum(factors, weights)
    f = kernels.risk_batch(
        grid,
        np.full(grid.size, risks.error_impact),
        np.full(grid.size, risks.correction_cost_ratio))
    values = ps - weights.lam * f
    return tuple(
        ScanPoint(error_probability=float(p), value=float(v),
                  verdict=classify_verdict(float(v), thresholds))
        for p, v in zip(grid.tolist(), values.tolist()))
