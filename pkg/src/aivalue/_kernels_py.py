"""Pure-Python/numpy fallback for the compiled scoring kernels.

Numerics are kept in lockstep with _kernels.pyx: the same IEEE-754
operations in the same order (numpy elementwise arithmetic rounds exactly
like the C loop, and the entropy sum is a sequential Python loop), so the
two backends return bit-identical arrays.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def risk_batch(p, impact, correction):
    """Elementwise coupled risk term p^2 * impact * (1 + correction)."""
    pv = np.ascontiguousarray(p, dtype=np.float64)
    iv = np.ascontiguousarray(impact, dtype=np.float64)
    cv = np.ascontiguousarray(correction, dtype=np.float64)
    return pv * pv * iv * (1.0 + cv)


def composite_batch(dh, eff, cost, quality, p, impact, correction,
                    alpha, beta, gamma, delta, lam):
    """Per-case composite value for parallel arrays of factor fields."""
    av = np.ascontiguousarray(dh, dtype=np.float64)
    bv = np.ascontiguousarray(eff, dtype=np.float64)
    gv = np.ascontiguousarray(cost, dtype=np.float64)
    qv = np.ascontiguousarray(quality, dtype=np.float64)
    pv = np.ascontiguousarray(p, dtype=np.float64)
    iv = np.ascontiguousarray(impact, dtype=np.float64)
    cv = np.ascontiguousarray(correction, dtype=np.float64)
    return (((alpha * av + beta * bv) + gamma * gv) + delta * qv) \
        - lam * (pv * pv * iv * (1.0 + cv))


def weight_grid(dh, eff, cost, quality, risk,
                alphas, betas, gammas, deltas, lams):
    """Composite value over the Cartesian product of five weight axes.

    Returns a flat float64 array in row-major order over
    (alpha, beta, gamma, delta, lambda).
    """
    av = np.ascontiguousarray(alphas, dtype=np.float64)
    bv = np.ascontiguousarray(betas, dtype=np.float64)
    gv = np.ascontiguousarray(gammas, dtype=np.float64)
    dv = np.ascontiguousarray(deltas, dtype=np.float64)
    lv = np.ascontiguousarray(lams, dtype=np.float64)
    t1 = av * dh
    t2 = t1[:, None] + bv * eff
    t3 = t2[:, :, None] + gv * cost
    t4 = t3[:, :, :, None] + dv * quality
    v = t4[:, :, :, :, None] - lv * risk
    return np.ascontiguousarray(v).reshape(-1)


def entropy_bits(probs):
    """Shannon entropy (base 2) of a probability vector; 0*log(0) == 0."""
    pv = np.ascontiguousarray(probs, dtype=np.float64)
    h = 0.0
    for x in pv.tolist():
        if x > 0.0:
            h += x * math.log2(x)
    if h == 0.0:
        return 0.0
    return -h
