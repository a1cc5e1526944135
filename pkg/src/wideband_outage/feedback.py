"""One-bit channel state feedback with two-level power allocation.

Each of K parallel channels reports whether its squared gain exceeds a
threshold tau.  Weak channels (gain at or below tau, probability
p0 = 1 - exp(-tau)) share the transmit power fraction g0; strong
channels share g1 = 1 - g0.  If one side is empty its reserved power is
wasted.  Outage still decays exponentially in K, and the decay rate is
the cheaper of two rare-event routes:

* the weak-channel fraction drifts to some x and the realized rate
  falls short of the target (weak_fraction_exponent, optimized over x);
* essentially every channel is weak (all_weak_exponent), which is the
  only route once the strong-side power alone covers the target.

general_exponent stitches the two routes together; onoff_exponent and
onoff_envelope are the closed forms for the g0 = 0 special case where
weak channels are simply switched off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DomainError, InvalidParamError

__all__ = [
    "FeedbackProtocol",
    "feedback_eta_bar",
    "onoff_exponent",
    "onoff_envelope",
    "all_weak_exponent",
    "weak_fraction_exponent",
    "general_exponent",
    "MeshPoint",
    "mesh",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

#: fractions scanned before golden-section refinement in general_exponent
_X_GRID = np.linspace(1e-6, 1.0 - 1e-6, 256)
_X_TOL = 1e-8


@dataclass(frozen=True)
class FeedbackProtocol:
    """Gain threshold tau plus the weak-side power fraction g0."""

    tau: float
    g0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise InvalidParamError("threshold tau must be finite and positive")
        if not 0.0 <= self.g0 <= 1.0:
            raise InvalidParamError("power fraction g0 must be in [0, 1]")

    @property
    def p1(self) -> float:
        """Probability that a channel is strong."""
        return math.exp(-self.tau)

    @property
    def p0(self) -> float:
        """Probability that a channel is weak; p0 + p1 == 1 exactly."""
        return 1.0 - self.p1

    @property
    def g1(self) -> float:
        """Strong-side power fraction."""
        return 1.0 - self.g0


def feedback_eta_bar(proto: FeedbackProtocol) -> float:
    """Minimum energy per nat of the protocol.

    Tends to 1/(tau + 1) as g0 -> 0 (on-off allocation) and to 2 as
    tau -> 0 with g0 = 1/2, where half the power is spent on a side
    that almost surely holds no channel.
    """
    t = proto.tau
    return 1.0 / (t + 1.0 - proto.g0 * t / -math.expm1(-t))


def onoff_exponent(tau: float, eta: float) -> float:
    """Closed-form exponent of on-off allocation (g0 = 0) at threshold tau.

    Flat at tau - log(exp(tau) - 1) for eta >= 1/tau; below that the
    binomial weak-count tilt enters through the optimal fraction.
    """
    if not (math.isfinite(tau) and tau > 0.0):
        raise InvalidParamError("threshold tau must be finite and positive")
    bar = 1.0 / (tau + 1.0)
    if eta < bar:
        raise InvalidParamError("eta below the on-off minimum energy per nat")
    inv = 1.0 / eta
    if inv <= tau:
        return -math.log1p(-math.exp(-tau))
    d = inv - tau  # in (0, 1]
    c = math.expm1(tau) * math.exp(d - 1.0)
    x = c / (c + d)
    return (
        tau
        + (1.0 - x) * (d - 1.0 - math.log(d))
        - x * math.log(math.expm1(tau))
        - _binary_entropy(x)
    )


def onoff_envelope(eta: float) -> tuple[float, float]:
    """Best on-off threshold and exponent at eta: tau = 1/eta."""
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    tau = 1.0 / eta
    return tau, -math.log1p(-math.exp(-tau))


def all_weak_exponent(proto: FeedbackProtocol, eta: float) -> float:
    """Decay rate of outage through the every-channel-weak route.

    Supremum over lam <= 0 of lam/eta minus the log-MGF of a weak
    channel's power-weighted gain; the argmax is interior only when the
    weak-side power could otherwise carry the target on its own.
    """
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    value, _ = kernels.feedback_e0(proto.g0, proto.tau, 1.0 / eta)
    return value


def weak_fraction_exponent(proto: FeedbackProtocol, eta: float, x: float) -> float:
    """Decay rate of outage jointly with a weak-channel fraction near x.

    Returns inf when eta >= 1/(g1*tau): the strong side alone then
    covers the target for any fraction bounded away from 1, so the
    joint event is super-exponentially rare.
    """
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    if not 0.0 < x < 1.0:
        raise DomainError("weak fraction x must be strictly inside (0, 1)")
    return kernels.feedback_ex(proto.g0, proto.tau, 1.0 / eta, x)


def general_exponent(proto: FeedbackProtocol, eta: float) -> float:
    """Outage exponent of the protocol at energy per nat eta.

    Minimum of the all-weak route and the weak-fraction route, the
    latter minimized over x by a coarse scan plus golden-section
    refinement around the three best grid points.  Above 1/(g1*tau)
    only the all-weak route remains.
    """
    bar = feedback_eta_bar(proto)
    if eta < bar:
        raise InvalidParamError("eta below the protocol's minimum energy per nat")
    inv = 1.0 / eta
    weak_route, _ = kernels.feedback_e0(proto.g0, proto.tau, inv)
    if proto.g1 * proto.tau * eta > 1.0:
        return max(0.0, weak_route)
    vals = np.asarray(kernels.feedback_ex_batch(proto.g0, proto.tau, inv, _X_GRID))
    best = float(vals.min())
    if math.isfinite(best):
        for i in np.argsort(vals, kind="stable")[:3]:
            a = _X_GRID[max(i - 1, 0)]
            b = _X_GRID[min(i + 1, len(_X_GRID) - 1)]
            _, refined = _golden_min(
                lambda t: kernels.feedback_ex(proto.g0, proto.tau, inv, t),
                a,
                b,
                _X_TOL,
            )
            best = min(best, refined)
    return max(0.0, min(best, weak_route))


@dataclass(frozen=True)
class MeshPoint:
    g0: float
    tau: float
    eta: float
    exponent: float
    status: str


def mesh(eta, g0_grid, tau_grid) -> tuple[list[MeshPoint], MeshPoint]:
    """Exponent surface over protocol parameters at fixed eta.

    Points below their protocol's minimum energy per nat get exponent 0
    and status BELOW_ETA_BAR.  Returns all rows in row-major (g0 outer,
    tau inner) order plus the argmax row; ties keep the earliest row.
    """
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    g0_grid = [float(g) for g in g0_grid]
    tau_grid = [float(t) for t in tau_grid]
    if not g0_grid or not tau_grid:
        raise InvalidParamError("parameter grids must be non-empty")
    if min(g0_grid) < 0.0 or max(g0_grid) > 1.0:
        raise InvalidParamError("g0 grid must stay within [0, 1]")
    if min(tau_grid) <= 0.0 or max(tau_grid) > 10.0:
        raise InvalidParamError("tau grid must stay within (0, 10]")
    rows = []
    best = None
    for g0 in g0_grid:
        for tau in tau_grid:
            proto = FeedbackProtocol(tau=tau, g0=g0)
            if eta < feedback_eta_bar(proto):
                point = MeshPoint(g0, tau, eta, 0.0, "BELOW_ETA_BAR")
            else:
                point = MeshPoint(g0, tau, eta, general_exponent(proto, eta), "OK")
            rows.append(point)
            if best is None or point.exponent > best.exponent:
                best = point
    return rows, best


def _binary_entropy(x: float) -> float:
    # 0 log 0 = 0 at both ends
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log(1.0 - x)


def _golden_min(f, a, b, tol):
    """Golden-section minimum of f on [a, b]; returns best sampled (x, f)."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    if fc <= fd:
        best_x, best_f = c, fc
    else:
        best_x, best_f = d, fd
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
    return best_x, best_f
