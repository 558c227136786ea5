"""Linear stochastic rate network: simulation and analytic covariance.

Spontaneous activity is modeled as a multivariate Ornstein-Uhlenbeck
process dx = A x dt + sigma dW with drift A = -I/tau + g * W_norm, where
W_norm is the spectral-radius-normalized connectome. For a stable A the
stationary covariance P solves the Lyapunov equation
A P + P A^T + sigma^2 I = 0 exactly, which serves as the simulator's
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .network import Connectome

_BLOWUP_LIMIT = 1e9


@dataclass(frozen=True)
class SystemMatrix:
    """Validated drift matrix of the rate network."""

    a: np.ndarray
    tau: float
    g: float
    labels: tuple[str, ...]
    max_eig_real: float

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class SimConfig:
    """Integration settings for :func:`simulate_neural`.

    Times are in the same (arbitrary) units as tau; the recorded sampling
    interval is dt * record_every.
    """

    dt: float = 0.01
    record_every: int = 10
    duration: float = 1200.0
    burn_in: float = 200.0
    noise_sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.record_every < 1 or int(self.record_every) != self.record_every:
            raise ConfigError(
                f"record_every must be a positive integer, got {self.record_every}"
            )
        if not 0 <= self.burn_in < self.duration:
            raise ConfigError(
                f"burn_in ({self.burn_in}) must be in [0, duration={self.duration})"
            )
        if not self.noise_sigma > 0:
            raise ConfigError(f"noise_sigma must be > 0, got {self.noise_sigma}")
        if self.n_recorded < 256:
            raise ConfigError(
                f"configuration yields {self.n_recorded} recorded samples; "
                "need at least 256"
            )

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def burn_steps(self) -> int:
        return int(round(self.burn_in / self.dt))

    @property
    def n_recorded(self) -> int:
        return (self.n_steps - self.burn_steps) // self.record_every

    @property
    def dt_recorded(self) -> float:
        return self.dt * self.record_every


@dataclass(frozen=True)
class TimeSeriesMatrix:
    """Node-by-sample signals with a shared sampling interval."""

    data: np.ndarray
    dt: float
    labels: tuple[str, ...]

    def __post_init__(self):
        d = np.asarray(self.data, dtype=float)
        if d.ndim != 2:
            raise ValueError(f"data must be 2-D (nodes x samples), got {d.shape}")
        if not np.all(np.isfinite(d)):
            raise ValueError("time series contains non-finite values")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if len(self.labels) != d.shape[0]:
            raise ValueError(
                f"{len(self.labels)} labels for {d.shape[0]} nodes"
            )
        object.__setattr__(self, "data", d)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def n_nodes(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]


def build_system(c: Connectome, tau: float = 1.0, g: float = 0.5) -> SystemMatrix:
    """Assemble the drift matrix A = -I/tau + g * W/rho(W) and verify stability.

    ``g * tau < 1`` is required up front (sufficient for stability after
    spectral normalization of a nonnegative W); the eigenvalue check is
    still performed and its result stored.
    """
    if not tau > 0:
        raise ConfigError(f"tau must be > 0, got {tau}")
    if g < 0:
        raise ConfigError(f"coupling g must be >= 0, got {g}")
    if not g * tau < 1.0:
        raise ConfigError(
            f"g*tau must be < 1 for stability, got g={g}, tau={tau}"
        )
    w = c.weights
    radius = np.max(np.abs(np.linalg.eigvals(w))) if np.any(w) else 0.0
    w_norm = w / radius if radius > 0 else w
    a = -np.eye(c.n) / tau + g * w_norm
    max_re = float(np.max(np.linalg.eigvals(a).real))
    if max_re >= 0:
        raise NumericalError(
            f"unstable system: maximum eigenvalue real part {max_re:.6g} >= 0"
        )
    return SystemMatrix(a=a, tau=float(tau), g=float(g), labels=c.labels,
                        max_eig_real=max_re)


def _composed_step(step_matrix: np.ndarray, noise_cov: np.ndarray, k: int):
    """Compose k Euler-Maruyama steps into one linear-Gaussian update.

    Returns (M^k, Q_k) with Q_k = sum_{j<k} M^j Q M^j^T, via doubling, so
    that x after k steps equals M^k x + eta with eta ~ N(0, Q_k).
    """
    m_total = np.eye(step_matrix.shape[0])
    q_total = np.zeros_like(noise_cov)
    m_pow = step_matrix
    q_pow = noise_cov.copy()
    while k > 0:
        if k & 1:
            q_total = q_pow + m_pow @ q_total @ m_pow.T
            m_total = m_pow @ m_total
        q_pow = q_pow + m_pow @ q_pow @ m_pow.T
        m_pow = m_pow @ m_pow
        k >>= 1
    return m_total, q_total


def simulate_neural(sys: SystemMatrix, cfg: SimConfig) -> TimeSeriesMatrix:
    """Euler-Maruyama integration of dx = A x dt + sigma dW.

    The per-step update x -> (I + dt A) x + sigma sqrt(dt) xi is exactly
    composed over each recording interval (the chain is linear-Gaussian),
    so unrecorded intermediate states are marginalized out rather than
    materialized. The state starts at zero, the burn-in interval is
    discarded, and the recorded sampling interval is dt * record_every.
    Output is a pure function of (sys, cfg).
    """
    n = sys.n
    rng = np.random.default_rng(cfg.seed)
    step_matrix = np.eye(n) + cfg.dt * sys.a
    noise_cov = (cfg.noise_sigma**2 * cfg.dt) * np.eye(n)

    burn = cfg.burn_steps
    every = cfg.record_every
    m_rec, q_rec = _composed_step(step_matrix, noise_cov, every)
    try:
        chol_rec = np.linalg.cholesky(q_rec)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"noise covariance not positive definite: {exc}") from exc

    x = np.zeros(n)
    # Burn-in: whole recording blocks plus one remainder block.
    burn_blocks, burn_rest = divmod(burn, every)
    for _ in range(burn_blocks):
        x = m_rec @ x + chol_rec @ rng.standard_normal(n)
    if burn_rest:
        m_b, q_b = _composed_step(step_matrix, noise_cov, burn_rest)
        x = m_b @ x + np.linalg.cholesky(q_b) @ rng.standard_normal(n)

    recorded = np.empty((cfg.n_recorded, n))
    for k in range(cfg.n_recorded):
        x = m_rec @ x + chol_rec @ rng.standard_normal(n)
        recorded[k] = x
    data = recorded.T
    if not np.all(np.isfinite(data)) or np.max(np.abs(data)) > _BLOWUP_LIMIT:
        raise NumericalError(
            "simulation blew up (|x| exceeded 1e9); reduce dt or coupling"
        )
    return TimeSeriesMatrix(data=data, dt=cfg.dt_recorded, labels=sys.labels)


def stationary_covariance(sys: SystemMatrix, noise_sigma: float) -> np.ndarray:
    """Exact stationary covariance from the Lyapunov equation.

    Solves A P + P A^T + sigma^2 I = 0 through the vectorized linear
    system (I (x) A + A (x) I) vec(P) = -vec(sigma^2 I). Memory grows as
    n^4, which is fine at the network sizes this toolkit targets.
    """
    if not noise_sigma > 0:
        raise ConfigError(f"noise_sigma must be > 0, got {noise_sigma}")
    a = sys.a
    n = sys.n
    eye = np.eye(n)
    lhs = np.kron(eye, a) + np.kron(a, eye)
    rhs = -(noise_sigma**2) * eye.reshape(-1)
    try:
        p = np.linalg.solve(lhs, rhs).reshape(n, n)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Lyapunov system is singular: {exc}") from exc
    p = 0.5 * (p + p.T)
    if np.min(np.linalg.eigvalsh(p)) <= 0:
        raise NumericalError("stationary covariance is not positive definite")
    return p


def covariance_to_correlation(p: np.ndarray) -> np.ndarray:
    """Normalize a covariance matrix to a correlation matrix."""
    scale = np.sqrt(np.diag(p))
    return p / np.outer(scale, scale)
