# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; API mirrors _pykernels, keep the two in sync."""

from libc.math cimport INFINITY, exp, expm1, log, log1p

import numpy as np

cdef double _BIG = 700.0
cdef double _LAM_TOL = 1e-12
cdef int _MAX_DOUBLINGS = 200


cdef inline double _e0_deriv(double lam, double g0, double tau, double inv_eta) noexcept nogil:
    cdef double u = 1.0 - g0 * lam
    cdef double ut = u * tau
    cdef double gain = 0.0
    if ut < _BIG:
        gain = g0 * tau / expm1(ut)
    return inv_eta - g0 / u + gain


cdef inline double _e0_value(double lam, double g0, double tau, double inv_eta) noexcept nogil:
    cdef double u = 1.0 - g0 * lam
    return lam * inv_eta + log(u) - log1p(-exp(-u * tau))


def feedback_e0(double g0, double tau, double inv_eta):
    """Supremum over lam <= 0 of the all-weak objective: (value, argmax)."""
    cdef double lo, hi, mid, lam
    cdef int n = 0
    if g0 == 0.0 or _e0_deriv(0.0, g0, tau, inv_eta) >= 0.0:
        return _e0_value(0.0, g0, tau, inv_eta), 0.0
    lo = -1.0
    while _e0_deriv(lo, g0, tau, inv_eta) <= 0.0:
        lo *= 2.0
        n += 1
        if n > _MAX_DOUBLINGS:
            raise RuntimeError("all-weak objective failed to bracket")
    hi = 0.0
    while hi - lo > _LAM_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _e0_deriv(mid, g0, tau, inv_eta) > 0.0:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    return _e0_value(lam, g0, tau, inv_eta), lam


cdef inline double _ex_deriv(double lam, double g0, double tau, double inv_eta, double x) noexcept nogil:
    cdef double g1 = 1.0 - g0
    cdef double w = 1.0 - g0 * lam / x
    cdef double wt = w * tau
    cdef double gain = 0.0
    if wt < _BIG:
        gain = g0 * tau / expm1(wt)
    return inv_eta - g1 * tau + gain - g0 / w - g1 / (1.0 - g1 * lam / (1.0 - x))


cdef inline double _ex_value(double lam, double g0, double tau, double inv_eta, double x) noexcept nogil:
    cdef double g1 = 1.0 - g0
    cdef double w = 1.0 - g0 * lam / x
    cdef double tail = log1p(-exp(-w * tau))
    return (lam * inv_eta + tau * ((1.0 - x) - g1 * lam) - x * tail
            + x * log(x - g0 * lam) + (1.0 - x) * log(1.0 - x - g1 * lam))


cdef double _ex_solve(double g0, double tau, double inv_eta, double x) noexcept nogil:
    cdef double lo, hi, mid
    cdef int n = 0
    if inv_eta <= (1.0 - g0) * tau:
        return INFINITY
    if _ex_deriv(0.0, g0, tau, inv_eta, x) >= 0.0:
        return _ex_value(0.0, g0, tau, inv_eta, x)
    lo = -1.0
    while _ex_deriv(lo, g0, tau, inv_eta, x) <= 0.0:
        lo *= 2.0
        n += 1
        if n > _MAX_DOUBLINGS:
            return INFINITY
    hi = 0.0
    while hi - lo > _LAM_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _ex_deriv(mid, g0, tau, inv_eta, x) > 0.0:
            lo = mid
        else:
            hi = mid
    return _ex_value(0.5 * (lo + hi), g0, tau, inv_eta, x)


def feedback_ex(double g0, double tau, double inv_eta, double x):
    """Supremum over lam <= 0 of the weak-fraction objective at x in (0,1)."""
    return _ex_solve(g0, tau, inv_eta, x)


def feedback_ex_batch(double g0, double tau, double inv_eta, xs):
    """Vectorized feedback_ex over an array of fractions."""
    xs_arr = np.ascontiguousarray(xs, dtype=np.float64)
    out_arr = np.empty_like(xs_arr)
    cdef double[::1] xv = xs_arr
    cdef double[::1] ov = out_arr
    cdef Py_ssize_t i, n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = _ex_solve(g0, tau, inv_eta, xv[i])
    return out_arr


def count_outages_linear(gains, double coeff, double r):
    """Trials whose linearized rate coeff * sum(gains) is at most r."""
    g_arr = np.ascontiguousarray(gains, dtype=np.float64)
    cdef double[:, ::1] g = g_arr
    cdef Py_ssize_t t, k, trials = g.shape[0], cols = g.shape[1]
    cdef double acc
    cdef long count = 0
    with nogil:
        for t in range(trials):
            acc = 0.0
            for k in range(cols):
                acc += g[t, k]
            if acc * coeff <= r:
                count += 1
    return int(count)


def count_outages_exact(gains, double coeff, double r):
    """Trials whose rate sum(log1p(coeff * gain)) is at most r."""
    g_arr = np.ascontiguousarray(gains, dtype=np.float64)
    cdef double[:, ::1] g = g_arr
    cdef Py_ssize_t t, k, trials = g.shape[0], cols = g.shape[1]
    cdef double acc
    cdef long count = 0
    with nogil:
        for t in range(trials):
            acc = 0.0
            for k in range(cols):
                acc += log1p(coeff * g[t, k])
            if acc <= r:
                count += 1
    return int(count)


def count_outages_feedback(u, k0, double p0, double tau,
                           double g0rho, double g1rho, double r):
    """Trials whose feedback-scheme rate is at most r."""
    u_arr = np.ascontiguousarray(u, dtype=np.float64)
    k0_arr = np.ascontiguousarray(k0, dtype=np.int64)
    cdef double[:, ::1] uv = u_arr
    cdef long[::1] kv = k0_arr
    cdef Py_ssize_t t, k, trials = uv.shape[0], cols = uv.shape[1]
    cdef long nw
    cdef double acc, a, w0, w1
    cdef long count = 0
    with nogil:
        for t in range(trials):
            nw = kv[t]
            w0 = g0rho / nw if nw > 0 else 0.0
            w1 = g1rho / (cols - nw) if nw < cols else 0.0
            acc = 0.0
            for k in range(cols):
                if k < nw:
                    a = -log1p(-uv[t, k] * p0)
                    acc += log1p(w0 * a)
                else:
                    a = tau - log1p(-uv[t, k])
                    acc += log1p(w1 * a)
            if acc <= r:
                count += 1
    return int(count)
