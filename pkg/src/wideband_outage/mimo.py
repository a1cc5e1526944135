"""MIMO wideband outage exponents under spatial correlation.

Conventions: a channel use has n_r receive and n_t transmit antennas,
the stacked channel vector groups transmit antennas within each receive
antenna, so a separable correlation model expands as
kron(receive_corr, transmit_corr) and a white input covariance is
I/n_t.  The rate slope of one channel is tr(H Sigma H^*), whose
log-MGF is determined by the eigenvalues of the product of the input
covariance lifted across receive antennas with the channel correlation.

The eigensolver is a cyclic Jacobi iteration with complex rotations; it
is self-contained on purpose so the spectrum path has no dependency on
LAPACK behavior, and tests cross-check it against independent routes
(characteristic polynomials, determinant identities).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BelowEtaBarError,
    InvalidParamError,
    NoConvergenceError,
    NotHermitianError,
)
from .ldp import ExponentResult, LogMgf, Status, eta_bar, wideband_exponent

__all__ = [
    "EigResult",
    "hermitian_eigenvalues",
    "CovariancePair",
    "white_log_mgf",
    "white_exponent",
    "correlated_log_mgf",
    "correlated_exponent",
    "stationary_lambda",
    "two_antenna_exponent",
    "two_antenna_shaping",
    "two_antenna_asymptote",
]

#: off-diagonal Frobenius mass must fall below this times the matrix norm
OFFDIAG_TOL = 1e-13
#: entries may deviate from conjugate symmetry by this much
HERMITIAN_TOL = 1e-12
#: eigenvalues of nominally PSD matrices may round this far below zero
PSD_FLOOR = -1e-10
_MAX_SWEEPS = 60
_MAX_DIM = 64
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EigResult:
    """Eigenvalues in descending order plus the Jacobi sweep count."""

    eigenvalues: np.ndarray
    sweep_count: int


def hermitian_eigenvalues(matrix) -> EigResult:
    """All eigenvalues of a Hermitian matrix by cyclic Jacobi rotations."""
    a = _check_hermitian(matrix)
    w, _, sweeps = _jacobi(a)
    w = np.sort(w)[::-1].copy()
    w.setflags(write=False)
    return EigResult(eigenvalues=w, sweep_count=sweeps)


def _check_hermitian(matrix) -> np.ndarray:
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParamError("matrix must be square")
    n = a.shape[0]
    if n < 1 or n > _MAX_DIM:
        raise InvalidParamError(f"matrix dimension must be in [1, {_MAX_DIM}]")
    if not np.isfinite(a).all():
        raise InvalidParamError("matrix entries must be finite")
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.conj().T).max()) > HERMITIAN_TOL * scale:
        raise NotHermitianError("matrix is not conjugate-symmetric within tolerance")
    return 0.5 * (a + a.conj().T)


def _jacobi(a: np.ndarray):
    """Diagonalize Hermitian a; returns (eigenvalues, vectors, sweeps).

    Each rotation zeroes one off-diagonal pair with a unitary plane
    rotation whose phase absorbs the pivot's argument, so the classic
    real-symmetric angle formulas apply unchanged.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = OFFDIAG_TOL * _fro_norm(a)
    sweeps = 0
    while _off_norm(a) > threshold:
        sweeps += 1
        if sweeps > _MAX_SWEEPS:
            raise NoConvergenceError("Jacobi iteration exceeded the sweep budget")
        for p in range(n - 1):
            for q in range(p + 1, n):
                m = a[p, q]
                r = abs(m)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                diff = (app - aqq) / (2.0 * r)
                if diff == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, diff) / (abs(diff) + math.hypot(1.0, diff))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = (t * c) * (m.conjugate() / r)
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp + s * cq
                a[:, q] = -s.conjugate() * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp + s.conjugate() * rq
                a[q, :] = -s * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + s * vq
                v[:, q] = -s.conjugate() * vp + c * vq
    return np.real(np.diag(a)), v, sweeps


def _fro_norm(a) -> float:
    return float(np.sqrt((np.abs(a) ** 2).sum()))


def _off_norm(a) -> float:
    off = a - np.diag(np.diag(a))
    return _fro_norm(off)


def _psd_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a nominally PSD Hermitian matrix, clipped at zero."""
    w, _, _ = _jacobi(a)
    if w.min() < PSD_FLOOR:
        raise InvalidParamError("matrix is not positive semidefinite")
    return np.clip(w, 0.0, None)


def _sqrtm_psd(a: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix via the Jacobi eigenbasis."""
    w, v, _ = _jacobi(a)
    if w.min() < PSD_FLOOR:
        raise InvalidParamError("matrix is not positive semidefinite")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return 0.5 * (root + root.conj().T)


@dataclass(frozen=True)
class CovariancePair:
    """Channel correlation plus input covariance for one MIMO link.

    Either the full correlation matrix psi (size n_t*n_r) or a separable
    pair (psi_t, psi_r) expanding to kron(psi_r, psi_t).  The input
    covariance sigma is n_t x n_t with unit trace, white being I/n_t.
    """

    sigma: np.ndarray
    n_t: int
    n_r: int
    psi: np.ndarray | None = None
    psi_t: np.ndarray | None = None
    psi_r: np.ndarray | None = None

    def __post_init__(self):
        if self.n_t < 1 or self.n_r < 1:
            raise InvalidParamError("antenna counts must be at least 1")
        if self.n_t * self.n_r > _MAX_DIM:
            raise InvalidParamError(f"total dimension must not exceed {_MAX_DIM}")
        sigma = _check_hermitian(self.sigma)
        if sigma.shape[0] != self.n_t:
            raise InvalidParamError("sigma must be n_t x n_t")
        _psd_eigenvalues(sigma)
        if abs(np.trace(sigma).real - 1.0) > 1e-9:
            raise InvalidParamError("sigma must have unit trace")
        object.__setattr__(self, "sigma", _freeze(sigma))
        if self.psi is not None:
            if self.psi_t is not None or self.psi_r is not None:
                raise InvalidParamError("give either psi or the separable pair")
            psi = _check_hermitian(self.psi)
            if psi.shape[0] != self.n_t * self.n_r:
                raise InvalidParamError("psi must be (n_t*n_r) x (n_t*n_r)")
            _psd_eigenvalues(psi)
            object.__setattr__(self, "psi", _freeze(psi))
        elif self.psi_t is not None and self.psi_r is not None:
            psi_t = _check_hermitian(self.psi_t)
            psi_r = _check_hermitian(self.psi_r)
            if psi_t.shape[0] != self.n_t or psi_r.shape[0] != self.n_r:
                raise InvalidParamError("separable factors must be n_t and n_r sized")
            _psd_eigenvalues(psi_t)
            _psd_eigenvalues(psi_r)
            object.__setattr__(self, "psi_t", _freeze(psi_t))
            object.__setattr__(self, "psi_r", _freeze(psi_r))
        else:
            raise InvalidParamError("correlation is missing: give psi or both factors")

    @classmethod
    def full(cls, psi, sigma, n_t: int, n_r: int) -> "CovariancePair":
        return cls(sigma=np.asarray(sigma), n_t=n_t, n_r=n_r, psi=np.asarray(psi))

    @classmethod
    def separable(cls, psi_t, psi_r, sigma=None) -> "CovariancePair":
        psi_t = np.asarray(psi_t)
        psi_r = np.asarray(psi_r)
        n_t = psi_t.shape[0] if psi_t.ndim == 2 else 0
        n_r = psi_r.shape[0] if psi_r.ndim == 2 else 0
        if sigma is None:
            sigma = np.eye(n_t) / max(n_t, 1)
        return cls(sigma=np.asarray(sigma), n_t=n_t, n_r=n_r, psi_t=psi_t, psi_r=psi_r)

    @property
    def full_psi(self) -> np.ndarray:
        if self.psi is not None:
            return self.psi
        return np.kron(self.psi_r, self.psi_t)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.setflags(write=False)
    return a


def white_log_mgf(n_t: int, n_r: int) -> LogMgf:
    """Rate-slope log-MGF for uncorrelated antennas and white input."""
    _check_antennas(n_t, n_r)
    total = n_t * n_r
    return LogMgf(
        lambda_max=float(n_t),
        evaluate=lambda lam: -total * math.log1p(-lam / n_t),
        derivative=lambda lam: n_r / (1.0 - lam / n_t),
        mean=float(n_r),
    )


def white_exponent(n_t: int, n_r: int, eta: float) -> ExponentResult:
    """Closed-form exponent for uncorrelated antennas and white input.

    n_t * n_r times the Rayleigh exponent evaluated at n_r * eta; the
    minimum energy per nat is 1/n_r.
    """
    _check_antennas(n_t, n_r)
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    bar = 1.0 / n_r
    if eta < bar:
        return ExponentResult(bar, eta, 0.0, 0.0, Status.BELOW_ETA_BAR)
    scaled = n_r * eta
    value = n_t * n_r * (1.0 / scaled - 1.0 + math.log(scaled))
    lam = n_t * (1.0 - scaled)
    return ExponentResult(bar, eta, max(0.0, value), lam, Status.OK)


def _check_antennas(n_t: int, n_r: int):
    if not (isinstance(n_t, int) and isinstance(n_r, int)):
        raise InvalidParamError("antenna counts must be integers")
    if not (1 <= n_t <= 8 and 1 <= n_r <= 8):
        raise InvalidParamError("antenna counts must be in [1, 8]")


def _phi_spectrum(pair: CovariancePair) -> np.ndarray:
    """Eigenvalues of the input-weighted correlation product.

    The product itself is not Hermitian, so its spectrum is taken from
    the similar Hermitian sandwich built with a PSD square root; for
    separable correlation the spectrum factors into products of the
    per-side spectra and no lifted matrix is ever formed.
    """
    if pair.psi is None:
        half_t = _sqrtm_psd(np.asarray(pair.psi_t))
        wt = _psd_eigenvalues(half_t @ np.asarray(pair.sigma) @ half_t)
        wr = _psd_eigenvalues(np.asarray(pair.psi_r))
        return np.outer(wr, wt).ravel()
    lifted = np.kron(np.eye(pair.n_r), np.asarray(pair.sigma))
    half = _sqrtm_psd(np.asarray(pair.psi))
    phi = half @ lifted @ half
    return _psd_eigenvalues(0.5 * (phi + phi.conj().T))


def _mgf_from_spectrum(mu) -> LogMgf:
    mus = tuple(float(m) for m in mu if m > 0.0)
    mean = sum(mus)
    lam_max = math.inf if not mus else 1.0 / max(mus)
    return LogMgf(
        lambda_max=lam_max,
        evaluate=lambda lam: -sum(math.log1p(-lam * m) for m in mus),
        derivative=lambda lam: sum(m / (1.0 - lam * m) for m in mus),
        mean=mean,
    )


def correlated_log_mgf(pair: CovariancePair) -> LogMgf:
    """Rate-slope log-MGF under correlated antennas and shaped input."""
    return _mgf_from_spectrum(_phi_spectrum(pair))


def correlated_exponent(pair: CovariancePair, eta: float) -> ExponentResult:
    """Outage exponent for a correlated MIMO link at energy per nat eta."""
    return wideband_exponent(correlated_log_mgf(pair), eta)


def stationary_lambda(pair: CovariancePair, eta: float) -> float:
    """Transform argument at which the correlated exponent is attained.

    Solves sum_i mu_i / (1 - lam * mu_i) = 1/eta on lam <= 0; raises
    BelowEtaBarError when eta is strictly below the minimum.
    """
    mgf = correlated_log_mgf(pair)
    if eta < eta_bar(mgf):
        raise BelowEtaBarError("eta below the link's minimum energy per nat")
    return wideband_exponent(mgf, eta).lambda_star


def two_antenna_exponent(delta: float, xi: float, eta: float) -> float:
    """Exponent of the two-transmit-antenna link with input shaping xi.

    Transmit correlation delta and the shaped input share the same
    eigenbasis, so the weighted spectrum is (1+xi)(1+delta)/2 and
    (1-xi)(1-delta)/2; the generic matrix route gives identical values.
    """
    _check_two_antenna(delta, xi)
    mu1 = 0.5 * (1.0 + xi) * (1.0 + delta)
    mu2 = 0.5 * (1.0 - xi) * (1.0 - delta)
    return wideband_exponent(_mgf_from_spectrum((mu1, mu2)), eta).exponent


def two_antenna_shaping(delta: float, eta: float) -> tuple[float, float]:
    """Best input shaping for the two-transmit-antenna link.

    Scans xi over a uniform grid on [-1, 1] (step 1e-3, earliest grid
    point wins ties) and refines the winner by golden section; the
    refined point is kept only when it strictly improves, so boundary
    optima come back as exact +-1.
    """
    if not 0.0 <= delta < 1.0:
        raise InvalidParamError("transmit correlation delta must be in [0, 1)")
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    grid = np.linspace(-1.0, 1.0, 2001)
    vals = np.array([two_antenna_exponent(delta, x, eta) for x in grid])
    idx = int(np.argmax(vals))
    best_x = float(grid[idx])
    best_v = float(vals[idx])
    a = float(grid[max(idx - 1, 0)])
    b = float(grid[min(idx + 1, len(grid) - 1)])
    ref_x, ref_v = _golden_max(lambda x: two_antenna_exponent(delta, x, eta), a, b)
    if ref_v > best_v:
        best_x, best_v = ref_x, ref_v
    return best_x, best_v


def _check_two_antenna(delta: float, xi: float):
    if not 0.0 <= delta < 1.0:
        raise InvalidParamError("transmit correlation delta must be in [0, 1)")
    if not -1.0 <= xi <= 1.0:
        raise InvalidParamError("shaping coefficient xi must be in [-1, 1]")


def two_antenna_asymptote(delta: float, xi: float, eta: float) -> float:
    """Large-eta expansion of the two-antenna exponent.

    Interior shaping keeps both spectral branches and gains 2 log eta;
    at xi = +-1 the input collapses onto one branch and the growth
    halves to log eta.
    """
    _check_two_antenna(delta, xi)
    if not eta > 0.0:
        raise InvalidParamError("eta must be positive")
    if xi == 1.0:
        return math.log(eta) + math.log1p(delta) - 1.0
    if xi == -1.0:
        return math.log(eta) + math.log1p(-delta) - 1.0
    return (
        2.0 * math.log(eta)
        + math.log1p(-delta * delta)
        + math.log1p(-xi * xi)
        - 2.0
    )


def _golden_max(f, a, b, tol=1e-6):
    """Golden-section maximum of f on [a, b]; returns best sampled (x, f)."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    if fc >= fd:
        best_x, best_f = c, fc
    else:
        best_x, best_f = d, fd
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f
