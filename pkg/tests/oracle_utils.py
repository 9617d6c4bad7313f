"""Independent brute-force oracles used by the tests.

Everything here deliberately avoids the library's own code paths:
correlations and least squares are computed in exact rational arithmetic
(fractions.Fraction) straight from their textbook definitions, so the
float implementations can be checked against ground truth.
"""

from fractions import Fraction
import math


def _as_fractions(values):
    return [Fraction(str(float(v))) for v in values]


def pearson_r(xs, ys) -> float:
    """Product-moment correlation, exact rationals until the final sqrt."""
    x = _as_fractions(xs)
    y = _as_fractions(ys)
    n = len(x)
    mx = sum(x, Fraction(0)) / n
    my = sum(y, Fraction(0)) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    r2 = (sxy * sxy) / (sxx * syy)
    r = math.sqrt(float(r2))
    return r if sxy >= 0 else -r


def solve_normal_equations(design_rows, y) -> list[float]:
    """OLS coefficients (intercept first) by exact rational elimination.

    design_rows holds the predictor rows WITHOUT the intercept column;
    the column of ones is prepended here.
    """
    rows = [[Fraction(1)] + [Fraction(str(float(v))) for v in row]
            for row in design_rows]
    yv = _as_fractions(y)
    k = len(rows[0])
    # normal equations: (X'X) b = X'y, exact
    xtx = [[sum(r[i] * r[j] for r in rows) for j in range(k)]
           for i in range(k)]
    xty = [sum(r[i] * v for r, v in zip(rows, yv)) for i in range(k)]
    aug = [xtx[i] + [xty[i]] for i in range(k)]
    for col in range(k):
        pivot_row = max(range(col, k), key=lambda r: abs(aug[r][col]))
        if aug[pivot_row][col] == 0:
            raise ZeroDivisionError("singular design in oracle")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        aug[col] = [v / pivot for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [float(aug[i][k]) for i in range(k)]


def shannon_bits(probs) -> float:
    """Reference entropy via math.fsum over exact terms."""
    return -math.fsum(p * math.log2(p) for p in probs if p > 0.0)
