"""NumPy fallback for the hot kernels.

Mirrors the API of the compiled module _kernels; keep the two in sync.
The feedback objectives are evaluated in log space so that thresholds
up to the exp overflow limit are safe.
"""

import math

import numpy as np

_BIG = 700.0  # exp overflow guard
_LAM_TOL = 1e-12
_MAX_DOUBLINGS = 200
_MAX_BISECT = 400


def _e0_deriv(lam, g0, tau, inv_eta):
    u = 1.0 - g0 * lam
    ut = u * tau
    gain = g0 * tau / math.expm1(ut) if ut < _BIG else 0.0
    return inv_eta - g0 / u + gain


def _e0_value(lam, g0, tau, inv_eta):
    u = 1.0 - g0 * lam
    return lam * inv_eta + math.log(u) - math.log1p(-math.exp(-u * tau))


def feedback_e0(g0, tau, inv_eta):
    """Supremum over lam <= 0 of the all-weak objective: (value, argmax)."""
    if g0 == 0.0 or _e0_deriv(0.0, g0, tau, inv_eta) >= 0.0:
        return _e0_value(0.0, g0, tau, inv_eta), 0.0
    lo = -1.0
    n = 0
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


def _ex_deriv(lam, g0, tau, inv_eta, x):
    g1 = 1.0 - g0
    w = 1.0 - g0 * lam / x
    wt = w * tau
    gain = g0 * tau / math.expm1(wt) if wt < _BIG else 0.0
    return inv_eta - g1 * tau + gain - g0 / w - g1 / (1.0 - g1 * lam / (1.0 - x))


def _ex_value(lam, g0, tau, inv_eta, x):
    g1 = 1.0 - g0
    w = 1.0 - g0 * lam / x
    tail = math.log1p(-math.exp(-w * tau))
    return (
        lam * inv_eta
        + tau * ((1.0 - x) - g1 * lam)
        - x * tail
        + x * math.log(x - g0 * lam)
        + (1.0 - x) * math.log(1.0 - x - g1 * lam)
    )


def feedback_ex(g0, tau, inv_eta, x):
    """Supremum over lam <= 0 of the weak-fraction objective at x in (0,1).

    Diverges (returns inf) when inv_eta <= (1-g0)*tau: the linear part
    of the objective then dominates as lam goes to -inf.
    """
    g1 = 1.0 - g0
    if inv_eta <= g1 * tau:
        return math.inf
    if _ex_deriv(0.0, g0, tau, inv_eta, x) >= 0.0:
        return _ex_value(0.0, g0, tau, inv_eta, x)
    lo = -1.0
    n = 0
    while _ex_deriv(lo, g0, tau, inv_eta, x) <= 0.0:
        lo *= 2.0
        n += 1
        if n > _MAX_DOUBLINGS:
            return math.inf
    hi = 0.0
    while hi - lo > _LAM_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _ex_deriv(mid, g0, tau, inv_eta, x) > 0.0:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    return _ex_value(lam, g0, tau, inv_eta, x)


def feedback_ex_batch(g0, tau, inv_eta, xs):
    """Vectorized feedback_ex over an array of fractions."""
    xs = np.asarray(xs, dtype=np.float64)
    g1 = 1.0 - g0
    if inv_eta <= g1 * tau:
        return np.full(xs.shape, np.inf)

    def deriv(lam):
        w = 1.0 - g0 * lam / xs
        wt = w * tau
        gain = np.where(wt < _BIG, g0 * tau / np.expm1(np.minimum(wt, _BIG)), 0.0)
        return inv_eta - g1 * tau + gain - g0 / w - g1 / (1.0 - g1 * lam / (1.0 - xs))

    interior = deriv(np.zeros_like(xs)) < 0.0
    lam = np.zeros_like(xs)
    if interior.any():
        lo = np.full(xs.shape, -1.0)
        for _ in range(_MAX_DOUBLINGS):
            need = interior & (deriv(lo) <= 0.0)
            if not need.any():
                break
            lo = np.where(need, 2.0 * lo, lo)
        hi = np.zeros_like(xs)
        for _ in range(_MAX_BISECT):
            if (hi - lo).max() <= _LAM_TOL:
                break
            mid = 0.5 * (lo + hi)
            stuck = (mid <= lo) | (mid >= hi)
            pos = deriv(mid) > 0.0
            lo = np.where(interior & pos & ~stuck, mid, lo)
            hi = np.where(interior & ~pos & ~stuck, mid, hi)
        lam = np.where(interior, 0.5 * (lo + hi), 0.0)
    w = 1.0 - g0 * lam / xs
    tail = np.log1p(-np.exp(-w * tau))
    return (
        lam * inv_eta
        + tau * ((1.0 - xs) - g1 * lam)
        - xs * tail
        + xs * np.log(xs - g0 * lam)
        + (1.0 - xs) * np.log(1.0 - xs - g1 * lam)
    )


def count_outages_linear(gains, coeff, r):
    """Trials whose linearized rate coeff * sum(gains) is at most r."""
    return int(np.count_nonzero(gains.sum(axis=1) * coeff <= r))


def count_outages_exact(gains, coeff, r):
    """Trials whose rate sum(log1p(coeff * gain)) is at most r."""
    return int(np.count_nonzero(np.log1p(coeff * gains).sum(axis=1) <= r))


def feedback_rates(u, k0, p0, tau, g0rho, g1rho):
    """Per-trial rates of the one-bit feedback scheme.

    Row t uses k0[t] weak channels: the first k0[t] uniforms map to
    gains conditioned below tau, the rest to gains above tau.  Weak
    channels split power g0rho, strong channels split g1rho; an empty
    side wastes its reserved power.
    """
    trials, K = u.shape
    below = np.arange(K)[None, :] < k0[:, None]
    a = np.where(below, -np.log1p(-u * p0), tau - np.log1p(-u))
    k1 = K - k0
    w0 = np.divide(g0rho, k0, out=np.zeros(trials), where=k0 > 0)
    w1 = np.divide(g1rho, k1, out=np.zeros(trials), where=k1 > 0)
    per = np.where(below, np.log1p(w0[:, None] * a), np.log1p(w1[:, None] * a))
    return per.sum(axis=1)


def count_outages_feedback(u, k0, p0, tau, g0rho, g1rho, r):
    """Trials whose feedback-scheme rate is at most r."""
    return int(np.count_nonzero(feedback_rates(u, k0, p0, tau, g0rho, g1rho) <= r))
