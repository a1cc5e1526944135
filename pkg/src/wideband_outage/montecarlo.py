"""Monte Carlo outage estimation and the exact gamma oracle.

Simulations count outages of the K-channel rate against the target
rho/eta, either with exact per-channel log rates or the linearized
low-SNR surrogate.  Streams are counter-based (Philox) and keyed by
(seed, K index, worker index), so a run is reproducible bit for bit for
a fixed seed, worker count and trial partition, and workers never share
a stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _pykernels
from ._backend import kernels
from .errors import (
    InsufficientDataError,
    InvalidConfigError,
    InvalidParamError,
    NoConvergenceError,
)
from .fading import ScalarFadingModel, sample_squared_gains
from .feedback import FeedbackProtocol
from .mimo import CovariancePair, _phi_spectrum, _sqrtm_psd

__all__ = [
    "SimulationConfig",
    "OutageEstimate",
    "SlopeFit",
    "wilson_interval",
    "estimate_outage",
    "simulate_feedback_rates",
    "fit_slope",
    "regularized_gamma_p",
    "gamma_oracle",
    "sample_truncated_exp",
]

_Z95 = 1.959963984540054
_MAX_ELEMENTS = 4_000_000  # per-batch draw budget, keeps memory modest
_GAMMA_EPS = 1e-15
_GAMMA_MAX_ITER = 10_000


@dataclass(frozen=True)
class SimulationConfig:
    """One Monte Carlo run: SNR budget rho, target energy per nat eta,
    channel counts, trial count, seed and the rate mode."""

    rho: float
    eta: float
    K_list: tuple
    trials: int
    seed: int
    rate_mode: str = "exact"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "K_list", tuple(int(k) for k in self.K_list))
        if not (math.isfinite(self.rho) and self.rho > 0.0):
            raise InvalidConfigError("rho must be finite and positive")
        if not (math.isfinite(self.eta) and self.eta > 0.0):
            raise InvalidConfigError("eta must be finite and positive")
        if not self.K_list or min(self.K_list) < 1:
            raise InvalidConfigError("K_list must hold positive channel counts")
        if self.trials < 1:
            raise InvalidConfigError("trials must be at least 1")
        if self.seed < 0:
            raise InvalidConfigError("seed must be nonnegative")
        if self.rate_mode not in ("exact", "linear"):
            raise InvalidConfigError("rate_mode must be 'exact' or 'linear'")
        if self.workers < 1:
            raise InvalidConfigError("workers must be at least 1")

    @property
    def target_rate(self) -> float:
        return self.rho / self.eta


@dataclass(frozen=True)
class OutageEstimate:
    K: int
    trials: int
    outage_count: int
    p_hat: float
    ci_lo: float
    ci_hi: float

    @classmethod
    def from_counts(cls, K: int, trials: int, outage_count: int) -> "OutageEstimate":
        lo, hi = wilson_interval(outage_count, trials)
        return cls(K, trials, outage_count, outage_count / trials, lo, hi)


@dataclass(frozen=True)
class SlopeFit:
    exponent_hat: float
    intercept: float
    stderr: float
    k_values: tuple


def wilson_interval(count: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval (95% by default) for a binomial proportion."""
    if trials < 1 or count < 0 or count > trials:
        raise InvalidParamError("need 0 <= count <= trials with trials >= 1")
    p = count / trials
    z2n = z * z / trials
    center = (p + 0.5 * z2n) / (1.0 + z2n)
    half = z * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials)) / (1.0 + z2n)
    # boundary counts hit the endpoint exactly; avoid rounding past p
    lo = 0.0 if count == 0 else max(0.0, center - half)
    hi = 1.0 if count == trials else min(1.0, center + half)
    return lo, hi


def estimate_outage(model, cfg: SimulationConfig) -> list[OutageEstimate]:
    """Empirical outage probability for each K in cfg.K_list.

    The model picks the channel: a scalar fading family, a correlated
    MIMO link, or a one-bit feedback protocol (exact rates only, since
    its power weights are nonlinear in the gains).
    """
    if isinstance(model, ScalarFadingModel):
        counter = _scalar_counter(model, cfg)
    elif isinstance(model, CovariancePair):
        counter = _mimo_counter(model, cfg)
    elif isinstance(model, FeedbackProtocol):
        if cfg.rate_mode != "exact":
            raise InvalidConfigError(
                "feedback simulation supports only rate_mode='exact'"
            )
        counter = _feedback_counter(model, cfg)
    else:
        raise InvalidParamError(f"unsupported model type {type(model).__name__}")
    r = cfg.target_rate
    out = []
    for ki, K in enumerate(cfg.K_list):
        count = 0
        for w, n_w in enumerate(_partition(cfg.trials, cfg.workers)):
            if n_w:
                count += counter(_stream(cfg.seed, ki, w), K, n_w, r)
        out.append(OutageEstimate.from_counts(K, cfg.trials, count))
    return out


def _scalar_counter(model: ScalarFadingModel, cfg: SimulationConfig):
    linear = cfg.rate_mode == "linear"

    def run(rng, K, n, r):
        batch = max(1, _MAX_ELEMENTS // K)
        count = 0
        left = n
        while left:
            rows = min(left, batch)
            gains = sample_squared_gains(model, rng, (rows, K))
            if linear:
                count += kernels.count_outages_linear(gains, cfg.rho / K, r)
            else:
                count += kernels.count_outages_exact(gains, cfg.rho / K, r)
            left -= rows
        return count

    return run


def _mimo_counter(pair: CovariancePair, cfg: SimulationConfig):
    if cfg.rate_mode == "linear":
        mu = _phi_spectrum(pair)

        def run(rng, K, n, r):
            batch = max(1, _MAX_ELEMENTS // (K * mu.size))
            count = 0
            left = n
            while left:
                rows = min(left, batch)
                slopes = rng.standard_exponential((rows, K, mu.size)) @ mu
                count += kernels.count_outages_linear(slopes, cfg.rho / K, r)
                left -= rows
            return count

        return run

    # exact mode colors CN(0, I) draws with the PSD square root of psi
    half_right = _sqrtm_psd(np.asarray(pair.full_psi)).conj()
    sigma = np.asarray(pair.sigma)
    n_t, n_r = pair.n_t, pair.n_r
    eye = np.eye(n_r)

    def run(rng, K, n, r):
        batch = max(1, _MAX_ELEMENTS // (K * n_t * n_r))
        count = 0
        left = n
        while left:
            rows = min(left, batch)
            z = rng.standard_normal((rows, K, n_t * n_r, 2))
            v = ((z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)) @ half_right
            h = np.conj(v.reshape(rows, K, n_r, n_t))
            m = eye + (cfg.rho / K) * (h @ sigma @ np.conj(np.swapaxes(h, -1, -2)))
            _, logdet = np.linalg.slogdet(m)
            count += int(np.count_nonzero(logdet.sum(axis=1) <= r))
            left -= rows
        return count

    return run


def _feedback_counter(proto: FeedbackProtocol, cfg: SimulationConfig):
    g0rho = proto.g0 * cfg.rho
    g1rho = proto.g1 * cfg.rho

    def run(rng, K, n, r):
        batch = max(1, _MAX_ELEMENTS // K)
        count = 0
        left = n
        while left:
            rows = min(left, batch)
            k0 = rng.binomial(K, proto.p0, size=rows).astype(np.int64)
            u = rng.random((rows, K))
            count += kernels.count_outages_feedback(
                u, k0, proto.p0, proto.tau, g0rho, g1rho, r
            )
            left -= rows
        return count

    return run


def simulate_feedback_rates(
    proto: FeedbackProtocol, K: int, trials: int, rho: float, seed: int, workers: int = 1
) -> np.ndarray:
    """Raw per-trial rates of the feedback scheme, mostly for diagnostics.

    Uses the same streams and draw order as estimate_outage with a
    single-entry K_list, so counting rates at or below a target
    reproduces that estimate exactly.
    """
    if K < 1 or trials < 1:
        raise InvalidParamError("K and trials must be at least 1")
    chunks = []
    for w, n_w in enumerate(_partition(trials, workers)):
        if not n_w:
            continue
        rng = _stream(seed, 0, w)
        batch = max(1, _MAX_ELEMENTS // K)
        left = n_w
        while left:
            rows = min(left, batch)
            k0 = rng.binomial(K, proto.p0, size=rows).astype(np.int64)
            u = rng.random((rows, K))
            chunks.append(
                _pykernels.feedback_rates(
                    u, k0, proto.p0, proto.tau, proto.g0 * rho, proto.g1 * rho
                )
            )
            left -= rows
    return np.concatenate(chunks)


def fit_slope(estimates, min_count: int = 20) -> SlopeFit:
    """Least-squares decay rate of -log(p_hat) against K.

    Points need at least min_count outage events to enter the fit, and
    at least 3 points must survive.
    """
    usable = [e for e in estimates if e.outage_count >= min_count and e.p_hat > 0.0]
    if len(usable) < 3:
        raise InsufficientDataError(
            "need at least 3 channel counts with enough outage events; raise trials"
        )
    x = np.array([e.K for e in usable], dtype=float)
    y = -np.log(np.array([e.p_hat for e in usable]))
    xm = x.mean()
    ym = y.mean()
    sxx = float(((x - xm) ** 2).sum())
    if sxx == 0.0:
        raise InsufficientDataError("channel counts must not be all equal")
    slope = float(((x - xm) * (y - ym)).sum() / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    stderr = math.sqrt(float((resid**2).sum()) / (len(usable) - 2) / sxx)
    return SlopeFit(slope, intercept, stderr, tuple(int(e.K) for e in usable))


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x), ~1e-12 relative accuracy.

    Power series for x < a + 1, modified Lentz continued fraction for
    the complement otherwise.
    """
    if not (math.isfinite(a) and a > 0.0):
        raise InvalidParamError("shape a must be finite and positive")
    if not (math.isfinite(x) and x >= 0.0):
        raise InvalidParamError("x must be finite and nonnegative")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cont_frac(a, x)


def _gamma_series(a, x):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NoConvergenceError("incomplete gamma series stalled")


def _gamma_cont_frac(a, x):
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    raise NoConvergenceError("incomplete gamma continued fraction stalled")


def gamma_oracle(K: int, eta: float, shape_multiplier: float = 1.0) -> float:
    """Exact outage probability for gamma-distributed linearized rates.

    The K-channel linearized rate has gamma shape a = shape_multiplier*K
    (1 for Rayleigh, m for Nakagami-m, n_t*n_r for white MIMO with eta
    rescaled by n_r), and outage at energy per nat eta is P(a, a/eta).
    """
    if K < 1:
        raise InvalidParamError("K must be at least 1")
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    if not shape_multiplier > 0.0:
        raise InvalidParamError("shape_multiplier must be positive")
    a = shape_multiplier * K
    return regularized_gamma_p(a, a / eta)


def sample_truncated_exp(tau: float, side: str, rng, size=None):
    """Unit-rate exponential draws conditioned below or above tau."""
    if not (math.isfinite(tau) and tau > 0.0):
        raise InvalidParamError("threshold tau must be finite and positive")
    u = rng.random(size)
    if side == "below":
        return -np.log1p(u * math.expm1(-tau))
    if side == "above":
        return tau - np.log1p(-u)
    raise InvalidParamError("side must be 'below' or 'above'")


def _partition(total: int, parts: int):
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def _stream(seed: int, k_index: int, part_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(k_index, part_index))
    return np.random.Generator(np.random.Philox(ss))
