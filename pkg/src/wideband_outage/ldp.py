"""Large-deviations engine for wideband outage exponents.

With K independent parallel channels and vanishing SNR per channel, the
outage probability decays exponentially in K once the target energy per
nat exceeds its wideband minimum.  Everything here is driven by the log
moment generating function of the per-channel rate slope: the decay
rate is a Legendre-Fenchel supremum, and for outage (a lower-tail
event) the supremum lives on non-positive transform arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import InvalidParamError, NoConvergenceError, ZeroMeanError

__all__ = [
    "Status",
    "LogMgf",
    "ExponentResult",
    "eta_bar",
    "wideband_exponent",
    "rate_function",
]

#: absolute tolerance on the location of a stationary point
LAMBDA_TOL = 1e-12
#: doublings allowed while bracketing a stationary point
MAX_DOUBLINGS = 200
_MAX_BISECT = 400


class Status(str, Enum):
    OK = "OK"
    BELOW_ETA_BAR = "BELOW_ETA_BAR"
    NO_CONVERGENCE = "NO_CONVERGENCE"


@dataclass(frozen=True)
class LogMgf:
    """A rate-slope distribution described through its log-MGF.

    Attributes:
        lambda_max: the log-MGF is finite for arguments below this bound,
            which is positive for every model in scope (math.inf allowed).
        evaluate: maps lam to the log-MGF value; vanishes at 0.
        derivative: maps lam to the first derivative, non-decreasing.
        mean: expected rate slope, equal to derivative(0).
    """

    lambda_max: float
    evaluate: Callable[[float], float]
    derivative: Callable[[float], float]
    mean: float

    def __post_init__(self):
        if not self.lambda_max > 0.0:
            raise InvalidParamError("lambda_max must be positive")
        if abs(self.evaluate(0.0)) > 1e-12:
            raise InvalidParamError("log-MGF must vanish at 0")
        if abs(self.mean - self.derivative(0.0)) > 1e-9 * (1.0 + abs(self.mean)):
            raise InvalidParamError("mean must equal the derivative at 0")


@dataclass(frozen=True)
class ExponentResult:
    eta_bar: float
    eta: float
    exponent: float
    lambda_star: float
    status: Status


def eta_bar(mgf: LogMgf) -> float:
    """Minimum energy per nat: reciprocal of the mean rate slope."""
    if mgf.mean <= 0.0:
        raise ZeroMeanError("mean rate slope must be positive")
    return 1.0 / mgf.mean


def wideband_exponent(mgf: LogMgf, eta: float) -> ExponentResult:
    """Outage exponent at target energy per nat eta.

    Maximizes lam/eta - logMGF(lam) over lam <= 0.  The objective is
    concave, so the stationarity condition derivative(lam) = 1/eta is
    solved by bracketing and bisection.  Below the minimum energy per
    nat the exponent is 0 and the result is flagged BELOW_ETA_BAR.
    """
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    bar = eta_bar(mgf)
    if eta < bar:
        return ExponentResult(bar, eta, 0.0, 0.0, Status.BELOW_ETA_BAR)
    target = 1.0 / eta
    if target >= mgf.mean:
        # at the boundary up to rounding; the supremum sits at lam = 0
        return ExponentResult(bar, eta, 0.0, 0.0, Status.OK)
    lam = _root_below_zero(mgf.derivative, target)
    value = lam * target - mgf.evaluate(lam)
    return ExponentResult(bar, eta, max(0.0, value), lam, Status.OK)


def rate_function(mgf: LogMgf, x: float) -> float:
    """Legendre-Fenchel transform of the log-MGF at x >= 0.

    This is the full two-sided transform: for x below the mean the
    supremum is on lam <= 0 (the outage side), above the mean it is on
    0 <= lam < lambda_max.  Raises NoConvergenceError when no stationary
    point can be bracketed, e.g. x = 0 with support bounded away from 0.
    """
    if x < 0.0:
        raise InvalidParamError("x must be nonnegative")
    if x == mgf.mean:
        return 0.0
    if x < mgf.mean:
        lam = _root_below_zero(mgf.derivative, x)
    else:
        lam = _root_above_zero(mgf, x)
    return max(0.0, lam * x - mgf.evaluate(lam))


def _root_below_zero(derivative: Callable[[float], float], target: float) -> float:
    """Solve derivative(lam) = target on lam <= 0.

    Assumes derivative is non-decreasing with derivative(0) >= target.
    """
    lo = -1.0
    doublings = 0
    while derivative(lo) > target:
        lo *= 2.0
        doublings += 1
        if doublings > MAX_DOUBLINGS:
            raise NoConvergenceError(
                "no stationary point on lam <= 0; the rate-slope "
                "distribution looks bounded away from the target"
            )
    return _bisect_increasing(derivative, target, lo, 0.0)


def _root_above_zero(mgf: LogMgf, target: float) -> float:
    """Solve derivative(lam) = target on lam > 0, approaching lambda_max."""
    if math.isinf(mgf.lambda_max):
        hi = 1.0
        doublings = 0
        while mgf.derivative(hi) < target:
            hi *= 2.0
            doublings += 1
            if doublings > MAX_DOUBLINGS:
                raise NoConvergenceError("no stationary point below lambda_max")
    else:
        gap = mgf.lambda_max
        halvings = 0
        while True:
            gap *= 0.5
            hi = mgf.lambda_max - gap
            if mgf.derivative(hi) >= target:
                break
            halvings += 1
            if halvings > MAX_DOUBLINGS:
                raise NoConvergenceError("no stationary point below lambda_max")
    return _bisect_increasing(mgf.derivative, target, 0.0, hi)


def _bisect_increasing(f, target, lo, hi):
    """Bisect a non-decreasing f with f(lo) <= target <= f(hi)."""
    for _ in range(_MAX_BISECT):
        if hi - lo <= LAMBDA_TOL:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) > target:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
