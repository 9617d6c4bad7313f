# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernels.

Hot loops behind grid sweeps, batch scoring and entropy sums.  Every
expression tree here is kept in lockstep with _kernels_py: both backends
perform the same IEEE-754 operations in the same order, so results are
bit-identical regardless of which backend is active.
"""

from libc.math cimport log2

import numpy as np

BACKEND = "compiled"


def risk_batch(p, impact, correction):
    """Elementwise coupled risk term p^2 * impact * (1 + correction)."""
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[::1] iv = np.ascontiguousarray(impact, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(correction, dtype=np.float64)
    cdef Py_ssize_t i, n = pv.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(n):
        ov[i] = pv[i] * pv[i] * iv[i] * (1.0 + cv[i])
    return out


def composite_batch(dh, eff, cost, quality, p, impact, correction,
                    double alpha, double beta, double gamma, double delta,
                    double lam):
    """Per-case composite value for parallel arrays of factor fields."""
    cdef double[::1] av = np.ascontiguousarray(dh, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(eff, dtype=np.float64)
    cdef double[::1] gv = np.ascontiguousarray(cost, dtype=np.float64)
    cdef double[::1] qv = np.ascontiguousarray(quality, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[::1] iv = np.ascontiguousarray(impact, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(correction, dtype=np.float64)
    cdef Py_ssize_t i, n = av.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(n):
        ov[i] = (((alpha * av[i] + beta * bv[i]) + gamma * gv[i])
                 + delta * qv[i]) \
                - lam * (pv[i] * pv[i] * iv[i] * (1.0 + cv[i]))
    return out


def weight_grid(double dh, double eff, double cost, double quality,
                double risk, alphas, betas, gammas, deltas, lams):
    """Composite value over the Cartesian product of five weight axes.

    Returns a flat float64 array in row-major order over
    (alpha, beta, gamma, delta, lambda).
    """
    cdef double[::1] av = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(betas, dtype=np.float64)
    cdef double[::1] gv = np.ascontiguousarray(gammas, dtype=np.float64)
    cdef double[::1] dv = np.ascontiguousarray(deltas, dtype=np.float64)
    cdef double[::1] lv = np.ascontiguousarray(lams, dtype=np.float64)
    cdef Py_ssize_t na = av.shape[0], nb = bv.shape[0], ng = gv.shape[0]
    cdef Py_ssize_t nd = dv.shape[0], nl = lv.shape[0]
    out = np.empty(na * nb * ng * nd * nl, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t ia, ib, ig, idx, il, k = 0
    cdef double t1, t2, t3, t4
    for ia in range(na):
        t1 = av[ia] * dh
        for ib in range(nb):
            t2 = t1 + bv[ib] * eff
            for ig in range(ng):
                t3 = t2 + gv[ig] * cost
                for idx in range(nd):
                    t4 = t3 + dv[idx] * quality
                    for il in range(nl):
                        ov[k] = t4 - lv[il] * risk
                        k += 1
    return out


def entropy_bits(probs):
    """Shannon entropy (base 2) of a probability vector; 0*log(0) == 0."""
    cdef double[::1] pv = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t i, n = pv.shape[0]
    cdef double h = 0.0
    for i in range(n):
        if pv[i] > 0.0:
            h += pv[i] * log2(pv[i])
    if h == 0.0:
        return 0.0
    return -h
