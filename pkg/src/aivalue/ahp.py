"""Analytic-hierarchy-process weight derivation.

Turns an expert's pairwise-comparison matrix into a weight vector via the
principal eigenvector (power iteration), with Saaty's consistency check:
CI = (lambda_max - n) / (n - 1), CR = CI / RI(n), acceptable when
CR < 0.10.  A five-dimension result (uncertainty reduction, efficiency,
cost saving, decision quality, risk) converts directly into a scoring
WeightProfile, rescaled so the first weight is 1 for comparability with
the default profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    UsageError,
    ValidationError,
)
from .model import WeightProfile, WeightProvenance

__all__ = [
    "PairwiseMatrix",
    "AhpResult",
    "ahp_weights",
    "random_index",
    "profile_from_ahp",
    "PROFILE_DIMENSIONS",
]

# Saaty's random consistency index for matrix orders 2..9.
_RANDOM_INDEX = {2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24,
                 7: 1.32, 8: 1.41, 9: 1.45}

_RECIPROCITY_TOL = 1e-9
_POWER_TOL = 1e-12
_POWER_MAX_ITER = 10_000

# Fixed dimension order expected when deriving a scoring profile.
PROFILE_DIMENSIONS = ("entropy_reduction", "efficiency_gain", "cost_saving",
                      "decision_quality", "risk")


@dataclass(frozen=True)
class PairwiseMatrix:
    """A validated positive reciprocal comparison matrix of order 2..9."""

    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.entries)
        n = len(rows)
        if not 2 <= n <= 9:
            raise ValidationError("entries", f"order must be in [2, 9], got {n}")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValidationError(
                    "entries", f"row {i} has {len(row)} entries, expected {n}")
        for i in range(n):
            for j in range(n):
                v = rows[i][j]
                if not math.isfinite(v) or v <= 0.0:
                    raise ValidationError(
                        "entries", f"a[{i}][{j}] must be positive and finite, "
                                   f"got {v!r}")
        for i in range(n):
            if abs(rows[i][i] - 1.0) > _RECIPROCITY_TOL:
                raise ValidationError(
                    "entries", f"diagonal a[{i}][{i}] must be 1, got "
                               f"{rows[i][i]!r}")
            for j in range(i + 1, n):
                if abs(rows[j][i] - 1.0 / rows[i][j]) > _RECIPROCITY_TOL:
                    raise ValidationError(
                        "entries",
                        f"a[{j}][{i}] must be the reciprocal of a[{i}][{j}] "
                        f"within {_RECIPROCITY_TOL}")
        object.__setattr__(self, "entries", rows)

    @property
    def order(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.float64)

    @classmethod
    def from_generator(cls, weights) -> "PairwiseMatrix":
        """Perfectly consistent matrix a[i][j] = w[i] / w[j]."""
        w = [float(v) for v in weights]
        if any(v <= 0 or not math.isfinite(v) for v in w):
            raise ValidationError("weights", "generator must be positive "
                                             "and finite")
        return cls(tuple(tuple(a / b for b in w) for a in w))


@dataclass(frozen=True)
class AhpResult:
    """Principal-eigenvector weights plus Saaty consistency diagnostics."""

    weights: tuple[float, ...]
    lambda_max: float
    consistency_index: float
    consistency_ratio: float
    acceptable: bool


def random_index(n: int) -> float:
    """Saaty's average random consistency index RI(n) for n in [2, 9]."""
    try:
        return _RANDOM_INDEX[int(n)]
    except (KeyError, ValueError, TypeError):
        raise DomainError(
            f"random index is tabulated for orders 2..9, got {n!r}") from None


def ahp_weights(m: PairwiseMatrix) -> AhpResult:
    """Weights from the dominant eigenvector of a comparison matrix.

    Power iteration on the positive matrix converges to the Perron
    vector; iteration stops when the L1-normalized vector moves by less
    than 1e-12 relatively.  lambda_max is the Rayleigh quotient at the
    converged vector.
    """
    a = m.as_array()
    n = m.order
    v = np.full(n, 1.0 / n)
    for iteration in range(1, _POWER_MAX_ITER + 1):
        w = a @ v
        w = w / w.sum()  # positive matrix keeps the iterate positive
        delta = float(np.max(np.abs(w - v))) / float(np.max(np.abs(w)))
        v = w
        if delta < _POWER_TOL:
            break
    else:
        raise ConvergenceError("power iteration did not converge",
                               _POWER_MAX_ITER)
    av = a @ v
    lambda_max = float((v @ av) / (v @ v))
    ci = (lambda_max - n) / (n - 1)
    ri = random_index(n)
    cr = ci / ri if ri > 0.0 else 0.0  # order 2 is always consistent
    return AhpResult(
        weights=tuple(v.tolist()),
        lambda_max=lambda_max,
        consistency_index=ci,
        consistency_ratio=cr,
        acceptable=cr < 0.10,
    )


def profile_from_ahp(result: AhpResult,
                     allow_inconsistent: bool = False) -> WeightProfile:
    """Convert a five-dimension AHP result into a scoring WeightProfile.

    The weight order must follow PROFILE_DIMENSIONS.  All five weights
    are divided by the first, pinning alpha to exactly 1.  Inconsistent
    results (CR >= 0.10) are refused unless explicitly overridden.
    """
    if len(result.weights) != 5:
        raise UsageError(
            f"a scoring profile needs exactly 5 weights in the order "
            f"{PROFILE_DIMENSIONS}, got {len(result.weights)}")
    if not result.acceptable and not allow_inconsistent:
        raise ConsistencyError(result.consistency_ratio)
    w = result.weights
    if w[0] <= 0.0:
        raise DomainError("first weight must be positive to normalize on")
    return WeightProfile(
        alpha=1.0,
        beta=w[1] / w[0],
        gamma=w[2] / w[0],
        delta=w[3] / w[0],
        lam=w[4] / w[0],
        provenance=WeightProvenance.AHP,
    )
