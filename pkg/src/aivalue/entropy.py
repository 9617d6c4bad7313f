"""Shannon entropy of discrete distributions and entropy-reduction deltas.

Entropy is always measured in bits (base-2 logarithm); no natural-log
variant is offered, to keep one unit across the whole package.  The
normalized form divides by log2(n) so a distribution's uncertainty maps
onto [0, 1] and can feed the model's entropy_reduction factor directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import kernels
from .errors import DomainError, UsageError, ValidationError

__all__ = [
    "DiscreteDistribution",
    "shannon_entropy",
    "normalized_entropy",
    "entropy_reduction",
]

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DiscreteDistribution:
    """A validated probability vector.

    Probabilities must be finite, in [0, 1], and sum to 1 within 1e-9;
    after validation they are renormalized to sum exactly (in floating
    point) to 1 so downstream sums behave.
    """

    probabilities: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        if not probs:
            raise ValidationError("probabilities", "must be non-empty")
        for i, p in enumerate(probs):
            if not math.isfinite(p):
                raise ValidationError(f"probabilities[{i}]",
                                      f"must be finite, got {p!r}")
            if p < 0.0 or p > 1.0:
                raise ValidationError(f"probabilities[{i}]",
                                      f"must be in [0, 1], got {p!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise ValidationError(
                "probabilities",
                f"must sum to 1 within {_SUM_TOLERANCE}, got {total!r}")
        object.__setattr__(self, "probabilities",
                           tuple(p / total for p in probs))

    def __len__(self) -> int:
        return len(self.probabilities)

    @classmethod
    def uniform(cls, n: int) -> "DiscreteDistribution":
        if n < 1:
            raise ValidationError("n", f"must be >= 1, got {n}")
        return cls(tuple(1.0 / n for _ in range(n)))

    @classmethod
    def point_mass(cls, n: int, index: int = 0) -> "DiscreteDistribution":
        if n < 1:
            raise ValidationError("n", f"must be >= 1, got {n}")
        if not 0 <= index < n:
            raise ValidationError("index", f"must be in [0, {n}), got {index}")
        return cls(tuple(1.0 if i == index else 0.0 for i in range(n)))


def shannon_entropy(d: DiscreteDistribution) -> float:
    """-sum(p * log2 p) in bits, with 0*log2(0) taken as 0.

    The result is capped at log2(n) to absorb the last-ulp rounding of the
    sum; it can never be negative because every summand is nonpositive.
    """
    h = kernels.entropy_bits(d.probabilities)
    return min(h, math.log2(len(d)))


def normalized_entropy(d: DiscreteDistribution) -> float:
    """shannon_entropy(d) / log2(n), in [0, 1]; undefined for n == 1."""
    n = len(d)
    if n < 2:
        raise DomainError(
            "normalized entropy is undefined for a single-outcome "
            "distribution (log2(1) == 0)")
    return shannon_entropy(d) / math.log2(n)


def entropy_reduction(before: DiscreteDistribution,
                      after: DiscreteDistribution,
                      mode: str = "bits") -> float:
    """Uncertainty removed between two distributions, H(before) - H(after).

    mode "bits" works on raw entropies; mode "normalized" divides each
    side by its own log2(n) first.  The result can be negative: a system
    that adds confusion produces a genuine negative reduction, which is
    reported rather than clamped.
    """
    if mode == "bits":
        return shannon_entropy(before) - shannon_entropy(after)
    if mode == "normalized":
        return normalized_entropy(before) - normalized_entropy(after)
    raise UsageError(f"unknown mode {mode!r}: expected 'bits' or 'normalized'")
