"""Self-contained inferential statistics for the validation pipeline.

Implements exactly what the hypothesis harness needs, with no stats
dependency beyond numpy array plumbing:

* Pearson product-moment correlation with a Student-t significance test,
  t = r * sqrt((n-2) / (1 - r^2)), two-sided p with n-2 degrees of freedom.
* Ordinary least squares on the normal equations with an implicit
  intercept, per-coefficient t/p, R^2, adjusted R^2, and standardized
  betas obtained by refitting on z-scored variables (so they stay
  well-defined when product/interaction columns are present).
* Linear-vs-quadratic curve comparison with a partial F-test on the
  squared term (F(1, m) upper tail == two-sided t(m) at sqrt(F)).
* Grouped moderation analysis: split by a risk field, per-group
  standardized slope of value on the positive sum, attenuation ratio.

Student-t tail probabilities come from the regularized incomplete beta
function, evaluated by Lentz's continued fraction.

All functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    SingularDesignError,
    UsageError,
)

__all__ = [
    "CorrelationResult",
    "RegressionResult",
    "CurveFitComparison",
    "PreferredModel",
    "GroupFit",
    "ModerationReport",
    "pearson",
    "ols",
    "interaction_design",
    "curve_fit_compare",
    "moderation_analysis",
    "regularized_incomplete_beta",
    "student_t_two_sided_p",
]

_CF_MAX_ITER = 300
_CF_EPS = 1e-12
_FPMIN = 1e-300
_PIVOT_RTOL = 1e-10  # pivot below this fraction of the largest pivot => singular


# ---------------------------------------------------------------------------
# Student-t machinery

def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ConvergenceError("incomplete beta continued fraction stalled",
                           _CF_MAX_ITER)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), the regularized incomplete beta function."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError(f"shape parameters must be positive, got a={a}, b={b}")
    if math.isnan(x) or x < 0.0 or x > 1.0:
        raise DomainError(f"x must be in [0, 1], got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    # The continued fraction converges fast only on one side of the mean;
    # use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other.
    if x < (a + 1.0) / (a + b + 2.0):
        result = front * _betacf(a, b, x) / a
    else:
        result = 1.0 - front * _betacf(b, a, 1.0 - x) / b
    return min(max(result, 0.0), 1.0)


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for a Student-t variable with df degrees of freedom."""
    if df < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got {df}")
    if math.isnan(t):
        raise DomainError("t statistic is NaN")
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t))


def _f_upper_tail_1(f_stat: float, df2: float) -> float:
    """Upper tail of F(1, df2); equals the two-sided t(df2) tail at sqrt(F)."""
    if math.isinf(f_stat):
        return 0.0
    return student_t_two_sided_p(math.sqrt(f_stat), df2)


# ---------------------------------------------------------------------------
# Correlation

@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_stat: float
    p_value: float


def _as_series(name: str, values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise UsageError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{name} contains non-finite values")
    return arr


def pearson(xs, ys) -> CorrelationResult:
    """Product-moment correlation with a two-sided significance test.

    Requires at least three observations and nonzero variance in both
    series.  r is clamped into [-1, 1] against last-ulp rounding; at
    |r| == 1 the t statistic is infinite and p is exactly 0.
    """
    x = _as_series("xs", xs)
    y = _as_series("ys", ys)
    if x.size != y.size:
        raise UsageError(f"series lengths differ: {x.size} vs {y.size}")
    n = int(x.size)
    if n < 3:
        raise UsageError(f"need at least 3 observations, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0:
        raise DegenerateInputError("xs has zero variance")
    if syy == 0.0:
        raise DegenerateInputError("ys has zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = min(max(r, -1.0), 1.0)
    if abs(r) == 1.0:
        t = math.inf if r > 0 else -math.inf
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = student_t_two_sided_p(t, n - 2)
    return CorrelationResult(r=r, n=n, t_stat=t, p_value=p)


# ---------------------------------------------------------------------------
# Ordinary least squares

@dataclass(frozen=True)
class RegressionResult:
    """OLS fit summary; coefficient order is intercept first."""

    column_names: tuple[str, ...]
    coefficients: tuple[float, ...]
    standard_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    p_values: tuple[float, ...]
    r_squared: float
    adjusted_r_squared: float
    standardized_betas: tuple[float, ...]  # predictors only, no intercept
    residuals: tuple[float, ...]


def _gauss_jordan(a: np.ndarray, b: np.ndarray,
                  names: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    """Solve a x = b and invert a, with partial pivoting and rank checks.

    Columns whose pivot collapses below _PIVOT_RTOL of the largest pivot
    are reported together in a SingularDesignError.
    """
    k = a.shape[0]
    aug = np.hstack([a.astype(np.float64, copy=True),
                     b.reshape(k, 1).astype(np.float64),
                     np.eye(k)])
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        raise SingularDesignError(list(names))
    dependent: list[str] = []
    for j in range(k):
        pivot_row = j + int(np.argmax(np.abs(aug[j:, j])))
        pivot = abs(float(aug[pivot_row, j]))
        if pivot < _PIVOT_RTOL * scale:
            dependent.append(names[j])
            continue
        if pivot_row != j:
            aug[[j, pivot_row]] = aug[[pivot_row, j]]
        aug[j] = aug[j] / aug[j, j]
        for i in range(k):
            if i != j and aug[i, j] != 0.0:
                aug[i] = aug[i] - aug[i, j] * aug[j]
    if dependent:
        raise SingularDesignError(dependent)
    return aug[:, k], aug[:, k + 1:]


def _prepare_design(design, names) -> tuple[np.ndarray, list[str]]:
    if isinstance(design, Mapping):
        if names is not None:
            raise UsageError("pass names either in the mapping or as a list, "
                             "not both")
        names = list(design.keys())
        cols = [np.asarray(design[k], dtype=np.float64) for k in names]
        if not cols:
            raise UsageError("design has no columns")
        x = np.column_stack(cols)
    else:
        x = np.asarray(design, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2:
            raise UsageError("design must be a 2-D matrix of columns")
        if names is None:
            names = [f"x{j + 1}" for j in range(x.shape[1])]
        names = list(names)
        if len(names) != x.shape[1]:
            raise UsageError(f"got {len(names)} names for {x.shape[1]} columns")
    if not np.all(np.isfinite(x)):
        raise UsageError("design contains non-finite values")
    return x, names


def ols(design, y, names: Sequence[str] | None = None) -> RegressionResult:
    """Least squares of y on the given predictor columns plus an intercept.

    `design` is an (n, k) matrix, a single column, or an ordered mapping
    of name -> column.  Coefficients solve the normal equations; n must
    be at least k + 2 so at least one residual degree of freedom remains.
    """
    x, colnames = _prepare_design(design, names)
    yv = _as_series("y", y)
    n, k = x.shape
    if yv.size != n:
        raise UsageError(f"y has {yv.size} rows, design has {n}")
    if n < k + 2:
        raise UsageError(f"need at least {k + 2} rows for {k} predictors, "
                         f"got {n}")
    xd = np.column_stack([np.ones(n), x])
    all_names = ["intercept", *colnames]
    coef, inv = _gauss_jordan(xd.T @ xd, xd.T @ yv, all_names)

    residuals = yv - xd @ coef
    rss = float(residuals @ residuals)
    dy = yv - yv.mean()
    tss = float(dy @ dy)
    r2 = 1.0 - rss / tss if tss > 0.0 else 0.0
    df = n - k - 1
    adj = 1.0 - (1.0 - r2) * (n - 1) / df
    sigma2 = rss / df
    variances = np.clip(sigma2 * np.diag(inv), 0.0, None)
    se = np.sqrt(variances)

    t_stats = []
    p_values = []
    for c, s in zip(coef.tolist(), se.tolist()):
        if s == 0.0:
            t = 0.0 if c == 0.0 else math.copysign(math.inf, c)
        else:
            t = c / s
        t_stats.append(t)
        p_values.append(1.0 if t == 0.0 else student_t_two_sided_p(t, df))

    return RegressionResult(
        column_names=tuple(all_names),
        coefficients=tuple(coef.tolist()),
        standard_errors=tuple(se.tolist()),
        t_stats=tuple(t_stats),
        p_values=tuple(p_values),
        r_squared=r2,
        adjusted_r_squared=adj,
        standardized_betas=_standardized_betas(x, yv, colnames),
        residuals=tuple(residuals.tolist()),
    )


def _standardized_betas(x: np.ndarray, y: np.ndarray,
                        names: Sequence[str]) -> tuple[float, ...]:
    """Slopes of the same fit on z-scored variables (sample sd, ddof=1).

    A constant response carries no variance to standardize against; all
    betas are zero by convention then (matching its R^2 of 0).
    """
    sy = float(y.std(ddof=1))
    if sy == 0.0:
        return tuple(0.0 for _ in names)
    yz = (y - y.mean()) / sy
    xz = np.empty_like(x)
    for j in range(x.shape[1]):
        sj = float(x[:, j].std(ddof=1))
        if sj == 0.0:
            raise SingularDesignError([list(names)[j]])
        xz[:, j] = (x[:, j] - x[:, j].mean()) / sj
    xd = np.column_stack([np.ones(x.shape[0]), xz])
    coef, _ = _gauss_jordan(xd.T @ xd, xd.T @ yz,
                            ["intercept", *names])
    return tuple(coef[1:].tolist())


def interaction_design(columns: Mapping[str, Sequence[float]],
                       pairs: Sequence[Sequence[str]],
                       ) -> dict[str, np.ndarray]:
    """Append product terms to a named column set.

    Each entry of `pairs` is a tuple of at least two existing column
    names; the factors are mean-centered before multiplying, which keeps
    the products from being near-collinear with their parents.  Product
    columns are named by joining the parents with '*'.
    """
    out: dict[str, np.ndarray] = {}
    length = None
    for name, col in columns.items():
        arr = np.asarray(col, dtype=np.float64)
        if arr.ndim != 1:
            raise UsageError(f"column {name!r} must be one-dimensional")
        if length is None:
            length = arr.size
        elif arr.size != length:
            raise UsageError(f"column {name!r} has {arr.size} rows, "
                             f"expected {length}")
        out[name] = arr
    for combo in pairs:
        combo = tuple(combo)
        if len(combo) < 2:
            raise UsageError(f"product term needs at least two columns, "
                             f"got {combo!r}")
        for name in combo:
            if name not in columns:
                raise UsageError(f"unknown column {name!r}")
        product_name = "*".join(combo)
        if product_name in out:
            raise UsageError(f"duplicate product name {product_name!r}")
        product = np.ones(length, dtype=np.float64)
        for name in combo:
            product = product * (out[name] - out[name].mean())
        out[product_name] = product
    return out


# ---------------------------------------------------------------------------
# Linear vs quadratic comparison

class PreferredModel(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class CurveFitComparison:
    r2_linear: float
    r2_quadratic: float
    adj_r2_linear: float
    adj_r2_quadratic: float
    f_stat_quadratic_term: float
    p_value_quadratic_term: float
    preferred: PreferredModel


def curve_fit_compare(x, y, significance: float = 0.05) -> CurveFitComparison:
    """Fit y ~ x and y ~ x + x^2 and test whether curvature earns its keep.

    The quadratic R^2 gain is computed from the squared-term column
    orthogonalized against the linear fit, which guarantees
    r2_quadratic >= r2_linear even in floating point.  `preferred` is
    quadratic only when the partial F-test on the squared term is
    significant; raw R^2 always favors the larger model and is reported
    for reference, not used for the decision.
    """
    xv = _as_series("x", x)
    yv = _as_series("y", y)
    if xv.size != yv.size:
        raise UsageError(f"series lengths differ: {xv.size} vs {yv.size}")
    n = int(xv.size)
    if n < 5:
        raise UsageError(f"need at least 5 observations, got {n}")
    if np.unique(xv).size < 3:
        raise DegenerateInputError("x needs at least 3 distinct values to "
                                   "separate a quadratic from a line")

    xc = xv - xv.mean()  # centering x stabilizes the normal equations
    linear = ols(xc.reshape(-1, 1), yv, names=["x"])
    res_lin = np.asarray(linear.residuals)
    rss_lin = float(res_lin @ res_lin)
    dy = yv - yv.mean()
    tss = float(dy @ dy)

    q = xc * xc
    base = ols(xc.reshape(-1, 1), q, names=["x"])  # orthogonalize x^2 vs [1, x]
    q_perp = np.asarray(base.residuals)
    denom = float(q_perp @ q_perp)
    extra = (float(q_perp @ res_lin) ** 2) / denom if denom > 0.0 else 0.0
    rss_quad = max(rss_lin - extra, 0.0)

    if tss > 0.0:
        r2_lin = 1.0 - rss_lin / tss
        r2_quad = 1.0 - rss_quad / tss
    else:
        r2_lin = r2_quad = 0.0
    adj_lin = 1.0 - (1.0 - r2_lin) * (n - 1) / (n - 2)
    adj_quad = 1.0 - (1.0 - r2_quad) * (n - 1) / (n - 3)

    floor = 1e-12 * max(tss, 1.0)
    if rss_lin <= floor:
        f_stat, p = 0.0, 1.0  # the line is already an exact fit
    elif rss_quad <= floor:
        f_stat, p = math.inf, 0.0
    else:
        f_stat = (rss_lin - rss_quad) / (rss_quad / (n - 3))
        p = _f_upper_tail_1(f_stat, n - 3)

    preferred = (PreferredModel.QUADRATIC if p < significance
                 else PreferredModel.LINEAR)
    return CurveFitComparison(
        r2_linear=r2_lin,
        r2_quadratic=r2_quad,
        adj_r2_linear=adj_lin,
        adj_r2_quadratic=adj_quad,
        f_stat_quadratic_term=f_stat,
        p_value_quadratic_term=p,
        preferred=preferred,
    )


# ---------------------------------------------------------------------------
# Moderation analysis

@dataclass(frozen=True)
class GroupFit:
    n: int
    standardized_beta: float
    p_value: float


@dataclass(frozen=True)
class ModerationReport:
    moderator_name: str
    threshold: float
    low_group: GroupFit
    high_group: GroupFit
    attenuation: float  # high-group beta / low-group beta


_MODERATOR_FIELDS = ("error_probability", "error_impact",
                     "correction_cost_ratio")


def fisher_z_difference_p(r_larger: float, n_larger: int,
                          r_smaller: float, n_smaller: int) -> float:
    """One-sided p for H0 "the correlations are equal" vs r1 > r2.

    Standard Fisher transform: z = (atanh(r1) - atanh(r2)) normalized by
    sqrt(1/(n1-3) + 1/(n2-3)).  Correlations are nudged off +-1 where
    atanh diverges.  Both groups need at least 4 observations.
    """
    if n_larger < 4 or n_smaller < 4:
        raise UsageError("Fisher z comparison needs at least 4 observations "
                         "per group")
    cap = 1.0 - 1e-15
    z1 = math.atanh(min(max(r_larger, -cap), cap))
    z2 = math.atanh(min(max(r_smaller, -cap), cap))
    se = math.sqrt(1.0 / (n_larger - 3) + 1.0 / (n_smaller - 3))
    z = (z1 - z2) / se
    # One-sided normal tail via the complementary error function.
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _group_fit(x: np.ndarray, y: np.ndarray) -> GroupFit:
    n = int(x.size)
    if n < 3:
        # Two points always fit a line exactly; there is nothing to infer.
        dx = x - x.mean()
        dy = y - y.mean()
        sxx = float(dx @ dx)
        syy = float(dy @ dy)
        if sxx == 0.0 or syy == 0.0:
            raise DegenerateInputError(
                "a moderation group of two identical points has no slope")
        r = float(dx @ dy) / math.sqrt(sxx * syy)
        return GroupFit(n=n, standardized_beta=min(max(r, -1.0), 1.0),
                        p_value=1.0)
    c = pearson(x, y)  # single-predictor standardized slope == r
    return GroupFit(n=n, standardized_beta=c.r, p_value=c.p_value)


def moderation_analysis(cases, breakdowns, moderator: str, threshold: float,
                        values: Sequence[float] | None = None,
                        ) -> ModerationReport:
    """Compare the value-vs-positives slope across a risk-based split.

    Cases with `moderator` below `threshold` form the low group, the rest
    the high group; each group regresses the composite value (or the
    supplied observed `values`) on the positive sum.  The attenuation
    ratio below 1 quantifies how much high risk suppresses what the
    positive factors can deliver.
    """
    if moderator not in _MODERATOR_FIELDS:
        raise UsageError(f"unknown moderator {moderator!r}; expected one of "
                         f"{_MODERATOR_FIELDS}")
    cases = list(cases)
    breakdowns = list(breakdowns)
    if len(cases) != len(breakdowns):
        raise UsageError(f"{len(cases)} cases but {len(breakdowns)} breakdowns")
    if values is None:
        yv = np.array([b.composite_value for b in breakdowns])
    else:
        yv = _as_series("values", values)
        if yv.size != len(cases):
            raise UsageError(f"{len(cases)} cases but {yv.size} values")
    ps = np.array([b.positive_sum for b in breakdowns])
    mod = np.array([getattr(c.risks, moderator) for c in cases])

    low = mod < threshold
    n_low = int(low.sum())
    n_high = int((~low).sum())
    if n_low < 2 or n_high < 2:
        raise DegenerateInputError(
            f"moderator split at {threshold} left groups of {n_low} (low) "
            f"and {n_high} (high) cases; need at least 2 in each")

    low_fit = _group_fit(ps[low], yv[low])
    high_fit = _group_fit(ps[~low], yv[~low])
    if low_fit.standardized_beta == 0.0:
        attenuation = math.inf if high_fit.standardized_beta != 0.0 else 0.0
    else:
        attenuation = high_fit.standardized_beta / low_fit.standardized_beta
    return ModerationReport(
        moderator_name=moderator,
        threshold=float(threshold),
        low_group=low_fit,
        high_group=high_fit,
        attenuation=attenuation,
    )
