import math
import os
import subprocess
import sys

import numpy as np
import pytest

from wideband_outage import _backend, _pykernels

compiled = pytest.importorskip(
    "wideband_outage._kernels", reason="compiled extension not built"
)

G0S = (0.0, 0.1, 0.5, 0.9, 1.0)
TAUS = (0.2, 1.0, 3.5)
INV_ETAS = (0.4, 1.0, 2.5)


def test_all_weak_objective_parity():
    for g0 in G0S:
        for tau in TAUS:
            for inv_eta in INV_ETAS:
                v_py, lam_py = _pykernels.feedback_e0(g0, tau, inv_eta)
                v_c, lam_c = compiled.feedback_e0(g0, tau, inv_eta)
                assert abs(v_py - v_c) < 1e-12
                assert abs(lam_py - lam_c) < 1e-9


def test_weak_fraction_objective_parity():
    for g0 in (0.1, 0.5, 0.9):
        for tau in TAUS:
            for inv_eta in INV_ETAS:
                for x in (0.05, 0.3, 0.7, 0.95):
                    v_py = _pykernels.feedback_ex(g0, tau, inv_eta, x)
                    v_c = compiled.feedback_ex(g0, tau, inv_eta, x)
                    if math.isinf(v_py) or math.isinf(v_c):
                        assert v_py == v_c
                    else:
                        assert abs(v_py - v_c) < 1e-12


def test_weak_fraction_divergence_parity():
    # 1/eta <= (1-g0) tau makes the objective unbounded in both backends
    v_py = _pykernels.feedback_ex(0.2, 2.0, 1.0, 0.5)
    v_c = compiled.feedback_ex(0.2, 2.0, 1.0, 0.5)
    assert math.isinf(v_py) and math.isinf(v_c)


def test_batch_objective_parity_and_scalar_consistency():
    xs = np.linspace(0.02, 0.98, 49)
    for g0, tau, inv_eta in ((0.3, 1.0, 1.4), (0.7, 0.5, 2.2), (0.5, 3.0, 2.8)):
        batch_py = _pykernels.feedback_ex_batch(g0, tau, inv_eta, xs)
        batch_c = compiled.feedback_ex_batch(g0, tau, inv_eta, xs)
        assert np.all(np.abs(batch_py - batch_c) < 1e-12)
        scalar = [compiled.feedback_ex(g0, tau, inv_eta, float(x)) for x in xs]
        assert np.all(np.abs(batch_c - np.array(scalar)) < 1e-10)


def test_count_kernels_parity():
    rng = np.random.default_rng(17)
    gains = rng.standard_exponential((4000, 12))
    for coeff, r in ((0.1, 0.9), (0.05, 0.4), (1.0, 14.0)):
        assert _pykernels.count_outages_linear(
            gains, coeff, r
        ) == compiled.count_outages_linear(gains, coeff, r)
        assert _pykernels.count_outages_exact(
            gains, coeff, r
        ) == compiled.count_outages_exact(gains, coeff, r)


def test_feedback_count_parity():
    rng = np.random.default_rng(23)
    u = rng.random((3000, 15))
    k0 = rng.binomial(15, 1.0 - math.exp(-1.0), size=3000).astype(np.int64)
    for g0 in (0.0, 0.4, 1.0):
        for r in (0.2, 0.8, 1.5):
            c_py = _pykernels.count_outages_feedback(
                u, k0, 1.0 - math.exp(-1.0), 1.0, g0, 1.0 - g0, r
            )
            c_c = compiled.count_outages_feedback(
                u, k0, 1.0 - math.exp(-1.0), 1.0, g0, 1.0 - g0, r
            )
            assert c_py == c_c


def test_feedback_count_matches_rates_path():
    rng = np.random.default_rng(29)
    u = rng.random((2000, 10))
    k0 = rng.binomial(10, 0.6, size=2000).astype(np.int64)
    rates = _pykernels.feedback_rates(u, k0, 0.6, 1.0, 0.5, 0.5)
    want = int((rates <= 0.8).sum())
    assert compiled.count_outages_feedback(u, k0, 0.6, 1.0, 0.5, 0.5, 0.8) == want


def _backend_in_subprocess(value):
    env = dict(os.environ)
    if value is None:
        env.pop("WIDEBAND_OUTAGE_BACKEND", None)
    else:
        env["WIDEBAND_OUTAGE_BACKEND"] = value
    proc = subprocess.run(
        [sys.executable, "-c", "from wideband_outage._backend import BACKEND; print(BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )
    return proc


def test_backend_env_selection():
    assert _backend.BACKEND in ("compiled", "pure")
    forced_pure = _backend_in_subprocess("pure")
    assert forced_pure.returncode == 0
    assert forced_pure.stdout.strip() == "pure"
    default = _backend_in_subprocess(None)
    assert default.returncode == 0
    assert default.stdout.strip() == "compiled"
    bad = _backend_in_subprocess("fortran")
    assert bad.returncode != 0
