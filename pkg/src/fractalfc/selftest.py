"""Quick oracle suite behind the `selftest` CLI command.

Each check compares an implementation against an independent reference:
closed-form values, hand-computed constants, or an analytic solution.
Runs in a few seconds; a failure indicates a broken build or numerical
environment.
"""

from __future__ import annotations

import math

import numpy as np


def _check_fgn_autocovariance() -> str:
    from .fractal import fgn_autocovariance

    expected = 0.5 * (2.0**1.4 - 2.0)
    got = fgn_autocovariance(0.7, 1.0, 1)
    assert abs(got - expected) < 1e-12, f"{got} != {expected}"
    assert fgn_autocovariance(0.5, 1.0, 1) == 0.0
    assert fgn_autocovariance(0.7, 1.0, 0) == 1.0
    return "closed-form fGn autocovariance"


def _check_fgn_generator() -> str:
    from .fractal import fgn_autocovariance, generate_fgn

    n = 4096
    theory = fgn_autocovariance(0.8, 1.0, 1)
    acs = []
    for seed in range(20):
        x = generate_fgn(0.8, n, 1.0, seed=seed).values
        acs.append(np.dot(x[:-1], x[1:]) / (n - 1))
    err = abs(np.mean(acs) - theory)
    assert err < 0.05, f"lag-1 autocovariance off by {err:.4f}"
    return "fGn generator lag-1 autocovariance vs oracle"


def _check_frac_coefficients() -> str:
    from .fractal import fracdiff_coefficients

    pi = fracdiff_coefficients(0.3, 3)
    assert abs(pi[1] + 0.3) < 1e-15 and abs(pi[2] + 0.105) < 1e-15, pi
    return "fractional differencing coefficients"


def _check_modwt_energy() -> str:
    from .wavelets import modwt

    rng = np.random.default_rng(5)
    x = rng.standard_normal(777)
    dec = modwt(x, 5, "d4")
    rel = abs(dec.energy() - np.sum(x**2)) / np.sum(x**2)
    assert rel < 1e-8, f"energy conservation violated: {rel:.2e}"
    return "MODWT energy conservation"


def _check_gaussian_mi() -> str:
    from .connectivity import mutual_information_fc
    from .simulate import TimeSeriesMatrix

    rng = np.random.default_rng(6)
    n = 100_000
    z = rng.standard_normal(n)
    y = 0.5 * z + math.sqrt(0.75) * rng.standard_normal(n)
    ts = TimeSeriesMatrix(np.vstack([z, y]), 1.0, ("a", "b"))
    mi = mutual_information_fc(ts, "gaussian").values[0, 1]
    assert abs(mi - 0.14384) < 0.01, mi
    return "gaussian MI identity at rho = 0.5"


def _check_gaussian_te() -> str:
    from .connectivity import transfer_entropy_fc
    from .simulate import TimeSeriesMatrix

    rng = np.random.default_rng(7)
    n = 50_000
    x = rng.standard_normal(n + 1)
    eps = rng.standard_normal(n + 1)
    y = np.zeros(n + 1)
    for t in range(1, n + 1):
        y[t] = 0.5 * y[t - 1] + 0.5 * x[t - 1] + eps[t]
    ts = TimeSeriesMatrix(np.vstack([x[1:], y[1:]]), 1.0, ("x", "y"))
    te = transfer_entropy_fc(ts, "gaussian").values
    assert abs(te[1, 0] - 0.1116) < 0.01, te[1, 0]
    assert te[0, 1] < 0.01, te[0, 1]
    return "gaussian TE on coupled AR pair"


def _check_lyapunov() -> str:
    from .network import Connectome
    from .simulate import build_system, stationary_covariance

    c = Connectome(np.array([[0.0, 1.0], [1.0, 0.0]]), ("a", "b"))
    sys = build_system(c, tau=1.0, g=0.0)
    p = stationary_covariance(sys, 1.0)
    assert np.allclose(p, 0.5 * np.eye(2), atol=1e-12), p
    return "Lyapunov covariance of decoupled nodes"


def _check_identity_filter() -> str:
    from .hemodynamics import RsHrfConfig, apply_rshrf, sample_hurst_profile
    from .simulate import TimeSeriesMatrix

    rng = np.random.default_rng(8)
    ts = TimeSeriesMatrix(rng.standard_normal((3, 512)), 1.0, ("a", "b", "c"))
    profile = sample_hurst_profile(0.5, 0.0, 3, bounds=(0.45, 0.55), seed=1)
    out = apply_rshrf(ts, profile, RsHrfConfig(normalize_output=False))
    assert np.array_equal(out.data, ts.data), "identity filter altered data"
    return "identity response filter at H = 0.5"


CHECKS = (
    _check_fgn_autocovariance,
    _check_fgn_generator,
    _check_frac_coefficients,
    _check_modwt_energy,
    _check_gaussian_mi,
    _check_gaussian_te,
    _check_lyapunov,
    _check_identity_filter,
)


def run_selftest(echo=print) -> bool:
    """Run every oracle check; returns True when all pass."""
    ok = True
    for check in CHECKS:
        try:
            label = check()
            echo(f"PASS {label}")
        except AssertionError as exc:
            echo(f"FAIL {check.__name__}: {exc}")
            ok = False
    return ok
