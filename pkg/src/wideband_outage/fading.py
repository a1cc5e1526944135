"""Scalar fading families with unit mean-square gain.

Rayleigh, Rician and Nakagami squared gains are normalized to unit
mean, so every scalar model has minimum energy per nat 1 and any
physical scaling is carried by the target energy per nat instead.  The
Rician line-of-sight fraction kappa is the amplitude of the fixed
component, kappa = 1 would be a non-fading channel and is excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParamError
from .ldp import LogMgf

__all__ = [
    "ScalarFadingModel",
    "log_mgf",
    "closed_form_exponent",
    "sample_squared_gain",
    "sample_squared_gains",
]


@dataclass(frozen=True)
class ScalarFadingModel:
    """One of the families "rayleigh", "rician" (kappa) or "nakagami" (m)."""

    family: str
    kappa: float = 0.0
    m: float = 1.0

    def __post_init__(self):
        if self.family not in ("rayleigh", "rician", "nakagami"):
            raise InvalidParamError(f"unknown fading family {self.family!r}")
        if self.family == "rician" and not 0.0 <= self.kappa < 1.0:
            raise InvalidParamError("rician line-of-sight fraction must be in [0, 1)")
        if self.family == "nakagami" and not (
            math.isfinite(self.m) and self.m >= 0.5
        ):
            raise InvalidParamError("nakagami shape must be finite and >= 1/2")

    @classmethod
    def rayleigh(cls) -> "ScalarFadingModel":
        return cls("rayleigh")

    @classmethod
    def rician(cls, kappa: float) -> "ScalarFadingModel":
        return cls("rician", kappa=kappa)

    @classmethod
    def nakagami(cls, m: float) -> "ScalarFadingModel":
        return cls("nakagami", m=m)


def log_mgf(model: ScalarFadingModel) -> LogMgf:
    """Log-MGF of the squared gain, finite below the family's pole."""
    if model.family == "nakagami":
        m = model.m
        return LogMgf(
            lambda_max=m,
            evaluate=lambda lam: -m * math.log1p(-lam / m),
            derivative=lambda lam: 1.0 / (1.0 - lam / m),
            mean=1.0,
        )
    if model.family == "rician":
        k2 = model.kappa * model.kappa
        b = 1.0 - k2
        return LogMgf(
            lambda_max=1.0 / b,
            evaluate=lambda lam: k2 * lam / (1.0 - b * lam) - math.log1p(-b * lam),
            derivative=lambda lam: k2 / (1.0 - b * lam) ** 2 + b / (1.0 - b * lam),
            mean=1.0,
        )
    return LogMgf(
        lambda_max=1.0,
        evaluate=lambda lam: -math.log1p(-lam),
        derivative=lambda lam: 1.0 / (1.0 - lam),
        mean=1.0,
    )


def closed_form_exponent(model: ScalarFadingModel, eta: float) -> float:
    """Closed-form outage exponent, defined for eta >= 1.

    Rayleigh gives 1/eta - 1 + log(eta); Nakagami scales that by m with
    the same floating expression; Rician uses the square-root form with
    kappa = 0 falling back to Rayleigh exactly.
    """
    if eta < 1.0:
        raise InvalidParamError("closed forms require eta >= 1")
    if model.family == "nakagami":
        return model.m * _rayleigh_exponent(eta)
    if model.family == "rician" and model.kappa != 0.0:
        k2 = model.kappa * model.kappa
        b = 1.0 - k2
        s = math.sqrt(1.0 + (4.0 * k2 / eta) / (b * b))
        return (
            1.0 / (b * eta)
            + k2 / b
            - s
            + math.log(b * eta / 2.0)
            + math.log1p(s)
        )
    return _rayleigh_exponent(eta)


def _rayleigh_exponent(eta: float) -> float:
    return 1.0 / eta - 1.0 + math.log(eta)


def sample_squared_gains(model: ScalarFadingModel, rng, size):
    """Draw squared gains from a numpy Generator; size as in numpy."""
    if model.family == "nakagami":
        return rng.gamma(model.m, 1.0 / model.m, size=size)
    if model.family == "rician":
        sd = math.sqrt((1.0 - model.kappa * model.kappa) / 2.0)
        re = model.kappa + sd * rng.standard_normal(size)
        im = sd * rng.standard_normal(size)
        return re * re + im * im
    # unit-mean exponential by inverse CDF
    return -np.log1p(-rng.random(size))


def sample_squared_gain(model: ScalarFadingModel, rng) -> float:
    """Single squared-gain draw."""
    return float(sample_squared_gains(model, rng, None))
