"""Per-node fractal hemodynamic response filters.

Each node's resting-state response filter is a fractional integrator of
order d = H - 1/2, where H is that node's fractal exponent, optionally
cascaded with a canonical double-gamma kernel. Filtering neuronal
activity with these kernels yields the simulated BOLD signals; with the
gamma kernel disabled and H = 1/2 the filter is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sp_signal
from scipy import stats as sp_stats

from .errors import ConfigError, NumericalError
from .fractal import Series, fractional_integrate
from .simulate import TimeSeriesMatrix


@dataclass(frozen=True)
class HurstProfile:
    """Per-node fractal exponents with the population parameters used."""

    h: np.ndarray
    mu: float
    sigma_h: float
    bounds: tuple[float, float]

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        lo, hi = self.bounds
        if h.ndim != 1 or h.size < 1:
            raise ValueError("profile must be a nonempty vector")
        if np.any(h <= 0) or np.any(h >= 1):
            raise ValueError("fractal exponents must lie in (0, 1)")
        if np.any(h < lo) or np.any(h > hi):
            raise ValueError(f"exponents outside bounds [{lo}, {hi}]")
        if self.sigma_h < 0:
            raise ValueError("sigma_h must be >= 0")
        if self.sigma_h == 0 and np.any(h != self.mu):
            raise ValueError("sigma_h = 0 requires all exponents equal to mu")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "bounds", (float(lo), float(hi)))

    def __len__(self) -> int:
        return self.h.size


@dataclass(frozen=True)
class RsHrfConfig:
    """Shape parameters for the per-node response kernels.

    gamma_peak and gamma_undershoot are expressed in recorded samples
    (the kernel is built on the target series' sampling grid);
    kernel_length is in samples.
    """

    use_gamma_kernel: bool = False
    gamma_peak: float = 6.0
    gamma_undershoot: float = 16.0
    undershoot_ratio: float = 1.0 / 6.0
    kernel_length: int = 1000
    normalize_output: bool = True

    def __post_init__(self):
        if not self.gamma_peak < self.gamma_undershoot:
            raise ConfigError(
                f"gamma_peak ({self.gamma_peak}) must precede "
                f"gamma_undershoot ({self.gamma_undershoot})"
            )
        if not 0.0 <= self.undershoot_ratio < 1.0:
            raise ConfigError(
                f"undershoot_ratio must be in [0, 1), got {self.undershoot_ratio}"
            )
        if self.kernel_length < 16:
            raise ConfigError(
                f"kernel_length must be >= 16, got {self.kernel_length}"
            )


def sample_hurst_profile(
    mu: float,
    sigma_h: float,
    n: int,
    bounds: tuple[float, float] = (0.55, 0.99),
    seed: int = 0,
) -> HurstProfile:
    """Draw per-node exponents from Normal(mu, sigma_h) truncated to bounds.

    Truncation is by rejection, so the realized standard deviation shrinks
    slightly below sigma_h for wide sigma_h. Deterministic given ``seed``.
    """
    lo, hi = float(bounds[0]), float(bounds[1])
    if not 0.0 < lo <= hi < 1.0:
        raise ConfigError(f"bounds must lie within (0, 1), got [{lo}, {hi}]")
    if hi - lo < 0.01:
        raise ConfigError(
            f"bounds [{lo}, {hi}] narrower than 0.01; rejection sampling "
            "would stall"
        )
    if not lo <= mu <= hi:
        raise ConfigError(f"mu ({mu}) outside bounds [{lo}, {hi}]")
    if sigma_h < 0:
        raise ConfigError(f"sigma_h must be >= 0, got {sigma_h}")
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")

    if sigma_h == 0:
        return HurstProfile(np.full(n, mu), mu, 0.0, (lo, hi))

    rng = np.random.default_rng(seed)
    kept: list[np.ndarray] = []
    total = 0
    for _ in range(1000):
        draw = rng.normal(mu, sigma_h, size=max(n, 64))
        good = draw[(draw >= lo) & (draw <= hi)]
        kept.append(good)
        total += good.size
        if total >= n:
            h = np.concatenate(kept)[:n]
            return HurstProfile(h, mu, float(sigma_h), (lo, hi))
    raise NumericalError(
        f"rejection sampling stalled for mu={mu}, sigma_h={sigma_h}, "
        f"bounds=[{lo}, {hi}]"
    )


def _double_gamma(t: np.ndarray, cfg: RsHrfConfig) -> np.ndarray:
    """Difference-of-gammas response peaking at cfg.gamma_peak samples."""
    peak = sp_stats.gamma.pdf(t, a=cfg.gamma_peak + 1.0, scale=1.0)
    undershoot = sp_stats.gamma.pdf(t, a=cfg.gamma_undershoot + 1.0, scale=1.0)
    kernel = peak - cfg.undershoot_ratio * undershoot
    total = kernel.sum()
    if total <= 0:
        raise NumericalError(
            "double-gamma kernel has nonpositive sum; check gamma settings"
        )
    return kernel / total


def build_rshrf_kernel(h: float, cfg: RsHrfConfig, dt: float) -> np.ndarray:
    """Convolution kernel for one node's hemodynamic response.

    The kernel is the impulse response of the fractional integrator of
    order d = h - 1/2 applied to either the unit impulse (gamma kernel
    disabled) or the normalized double-gamma shape. Both live on the
    target series' sampling grid (spacing ``dt``); the gamma timing
    parameters count recorded samples. Length is cfg.kernel_length
    samples.
    """
    if not 0.0 < h < 1.0:
        raise ValueError(f"fractal exponent must lie in (0, 1), got {h}")
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    length = cfg.kernel_length
    if cfg.use_gamma_kernel:
        base = _double_gamma(np.arange(length, dtype=float), cfg)
    else:
        base = np.zeros(length)
        base[0] = 1.0
    d = h - 0.5
    if d == 0.0:
        return base
    return fractional_integrate(Series(base, dt=dt), d).values


def _causal_convolve(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    if kernel[0] == 1.0 and not np.any(kernel[1:]):
        return x.copy()
    # Direct FIR filtering is exactly causal (no FFT rounding before an
    # impulse), which the causality contract relies on.
    return sp_signal.lfilter(kernel, [1.0], x)


def apply_rshrf(
    ts: TimeSeriesMatrix, profile: HurstProfile, cfg: RsHrfConfig
) -> TimeSeriesMatrix:
    """Convolve each node with its own response kernel.

    Convolution is causal (output at t depends only on inputs <= t). With
    cfg.normalize_output, every output row is standardized to zero mean
    and unit variance; downstream connectivity estimators are invariant to
    that rescaling.
    """
    if len(profile) != ts.n_nodes:
        raise ConfigError(
            f"profile has {len(profile)} exponents for {ts.n_nodes} nodes"
        )
    kernels: dict[float, np.ndarray] = {}
    out = np.empty_like(ts.data)
    for i, h in enumerate(profile.h):
        key = float(h)
        if key not in kernels:
            kernels[key] = build_rshrf_kernel(key, cfg, ts.dt)
        out[i] = _causal_convolve(ts.data[i], kernels[key])
    if cfg.normalize_output:
        sd = out.std(axis=1, keepdims=True)
        if np.any(sd == 0):
            node = ts.labels[int(np.argmax(sd[:, 0] == 0))]
            raise NumericalError(
                f"node {node!r} has zero variance after filtering; "
                "cannot standardize"
            )
        out = (out - out.mean(axis=1, keepdims=True)) / sd
    return TimeSeriesMatrix(data=out, dt=ts.dt, labels=ts.labels)
