"""End-to-end seeded experiments: sweeps, scale profiles, defractalization.

A trial simulates neuronal activity on the connectome, filters it into
BOLD signals through per-node fractal response kernels, and measures the
network distortion each configured estimator sees. The sweep varies the
exponent spread sigma_h over a grid; the scale profile resolves the
distortion by wavelet level and centrality quartile.

Seeding: the trial seed follows base + 1000003 * replicate +
7919 * grid_index, so extending the grid never reshuffles existing
replicates. Within a trial, the simulation and profile streams derive
from (base, replicate) only: all grid points of a replicate share one
neuronal trajectory and one set of underlying profile draws (scaled by
sigma_h), a paired design that isolates the filter effect from
Monte Carlo noise.
"""

from __future__ import annotations

import bisect
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.stats import rankdata

from .connectivity import (
    FcMatrix,
    estimate_fc,
    pearson_fc,
    wavelet_correlation_matrices,
)
from .errors import ConfigError, FractalFcError
from .fractal import DEFAULT_HURST_LEVELS, Series, estimate_hurst, fractional_difference
from .graph_metrics import (
    CENTRALITY_KINDS,
    DistortionReport,
    EdgeDistortionReport,
    centrality_distortion,
    compute_centrality,
    edge_distortion,
)
from .hemodynamics import HurstProfile, RsHrfConfig, apply_rshrf, sample_hurst_profile
from .network import Connectome, generate_synthetic_connectome, load_connectome
from .simulate import SimConfig, TimeSeriesMatrix, build_system, simulate_neural

ESTIMATORS = ("pearson", "mi", "te")

#: Offsets separating the per-replicate RNG streams.
_REPLICATE_STRIDE = 1000003
_GRID_STRIDE = 7919
_PROFILE_OFFSET = 499979


@dataclass(frozen=True)
class SyntheticConnectomeSpec:
    """Parameters of the bundled connectome generator."""

    nodes: int = 40
    density: float = 0.2
    modules: int = 4
    seed: int = 8601


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of a seeded experiment."""

    connectome_path: str | None = None
    synthetic: SyntheticConnectomeSpec = field(
        default_factory=SyntheticConnectomeSpec
    )
    tau: float = 1.0
    coupling: float = 0.5
    sim: SimConfig = field(
        default_factory=lambda: SimConfig(
            dt=0.05, record_every=160, duration=80200.0, burn_in=200.0
        )
    )
    hrf: RsHrfConfig = field(default_factory=RsHrfConfig)
    hurst_mu: float = 0.8
    hurst_bounds: tuple[float, float] = (0.55, 0.99)
    sigma_h_grid: tuple[float, ...] = (0.0, 0.05, 0.1, 0.15, 0.2)
    replicates: int = 20
    estimators: tuple[str, ...] = ESTIMATORS
    estimator_variant: str = "gaussian"
    bins: int = 8
    centrality: str = "strength"
    centrality_threshold: float = 0.0
    wavelet_levels: int = 5
    wavelet_filter: str = "d4"
    base_seed: int = 20120509

    def __post_init__(self):
        grid = tuple(float(s) for s in self.sigma_h_grid)
        if not grid:
            raise ConfigError("sigma_h_grid must not be empty")
        if any(s < 0 for s in grid):
            raise ConfigError("sigma_h_grid values must be nonnegative")
        if list(grid) != sorted(grid):
            raise ConfigError("sigma_h_grid must be sorted ascending")
        object.__setattr__(self, "sigma_h_grid", grid)
        if self.replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {self.replicates}")
        bad = [e for e in self.estimators if e not in ESTIMATORS]
        if bad:
            raise ConfigError(f"unknown estimators {bad}; choose from {ESTIMATORS}")
        if not self.estimators:
            raise ConfigError("at least one estimator is required")
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if self.estimator_variant not in ("gaussian", "binned"):
            raise ConfigError(
                f"estimator_variant must be gaussian or binned, "
                f"got {self.estimator_variant!r}"
            )
        if self.centrality not in CENTRALITY_KINDS:
            raise ConfigError(
                f"centrality must be one of {CENTRALITY_KINDS}, "
                f"got {self.centrality!r}"
            )
        if self.centrality_threshold < 0:
            raise ConfigError("centrality_threshold must be >= 0")
        if self.wavelet_levels < 1:
            raise ConfigError("wavelet_levels must be >= 1")
        lo, hi = self.hurst_bounds
        object.__setattr__(self, "hurst_bounds", (float(lo), float(hi)))


@dataclass(frozen=True)
class EstimatorOutcome:
    """One estimator's view of a single trial."""

    estimator: str
    fc_neuronal: FcMatrix
    fc_bold: FcMatrix
    distortion: DistortionReport
    edges: EdgeDistortionReport


@dataclass(frozen=True)
class TrialResult:
    """Everything measured in one (sigma_h, replicate) pipeline run."""

    sigma_h: float
    replicate: int
    seed: int
    profile: HurstProfile
    outcomes: dict[str, EstimatorOutcome]
    wavelet_distortion: np.ndarray  # (n_nodes, levels)
    level_centrality_distortion: np.ndarray  # (n_nodes, levels)
    labels: tuple[str, ...]
    config: ExperimentConfig
    neuronal: TimeSeriesMatrix | None = None
    bold: TimeSeriesMatrix | None = None


@dataclass(frozen=True)
class SweepRow:
    sigma_h: float
    estimator: str
    mean_distortion_mean: float
    mean_distortion_sd: float
    rank_corr_mean: float
    rank_corr_sd: float
    replicates: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    config: ExperimentConfig
    seeds: tuple[tuple[float, int, int], ...]  # (sigma_h, replicate, seed)


@dataclass(frozen=True)
class ScaleProfileResult:
    """Figure-style per-node, per-level distortion profile."""

    sigma_h: float
    levels: tuple[int, ...]
    bands: tuple[tuple[float, float], ...]
    labels: tuple[str, ...]
    centrality: np.ndarray  # neuronal-level, per node
    quartile: np.ndarray  # 1 = lowest centrality quartile
    wavelet_distortion: np.ndarray  # (n_nodes, levels), mean over replicates
    centrality_distortion: np.ndarray  # (n_nodes, levels)
    replicates: int
    config: ExperimentConfig
    seeds: tuple[tuple[float, int, int], ...]


def grid_index(cfg: ExperimentConfig, sigma_h: float) -> int:
    """Position of sigma_h in the grid (insertion point if absent)."""
    grid = cfg.sigma_h_grid
    for i, s in enumerate(grid):
        if s == sigma_h:
            return i
    return bisect.bisect_left(grid, sigma_h)


def trial_seed(cfg: ExperimentConfig, sigma_h: float, replicate: int) -> int:
    return (
        cfg.base_seed
        + _REPLICATE_STRIDE * replicate
        + _GRID_STRIDE * grid_index(cfg, sigma_h)
    )


def replicate_seed(cfg: ExperimentConfig, replicate: int) -> int:
    return cfg.base_seed + _REPLICATE_STRIDE * replicate


def get_connectome(cfg: ExperimentConfig) -> Connectome:
    if cfg.connectome_path is not None:
        return load_connectome(cfg.connectome_path)
    spec = cfg.synthetic
    return generate_synthetic_connectome(
        spec.nodes, spec.density, spec.modules, spec.seed
    )


def _annotate(exc: Exception, sigma_h: float, replicate: int):
    note = f"(sigma_h={sigma_h}, replicate={replicate})"
    raise type(exc)(f"{exc} {note}") from exc


def _mean_abs_offdiag_per_node(diff: np.ndarray) -> np.ndarray:
    n = diff.shape[0]
    off = ~np.eye(n, dtype=bool)
    return np.array([np.abs(diff[i, off[i]]).mean() for i in range(n)])


def _level_fc(values: np.ndarray, labels) -> FcMatrix:
    cleaned = np.nan_to_num(values, nan=0.0)
    np.fill_diagonal(cleaned, 1.0)
    return FcMatrix(cleaned, estimator="pearson", directed=False, labels=labels)


def run_trial(
    cfg: ExperimentConfig,
    sigma_h: float,
    replicate: int,
    keep_timeseries: bool = False,
) -> TrialResult:
    """Run the full pipeline once and measure every configured distortion."""
    try:
        connectome = get_connectome(cfg)
        system = build_system(connectome, cfg.tau, cfg.coupling)
        rep_seed = replicate_seed(cfg, replicate)
        sim_cfg = replace(cfg.sim, seed=rep_seed)
        neuronal = simulate_neural(system, sim_cfg)
        profile = sample_hurst_profile(
            cfg.hurst_mu,
            sigma_h,
            connectome.n,
            cfg.hurst_bounds,
            seed=rep_seed + _PROFILE_OFFSET,
        )
        bold = apply_rshrf(neuronal, profile, cfg.hrf)

        outcomes = {}
        for est in cfg.estimators:
            fc_n = estimate_fc(neuronal, est, cfg.estimator_variant, cfg.bins)
            fc_b = estimate_fc(bold, est, cfg.estimator_variant, cfg.bins)
            cent_n = compute_centrality(fc_n, cfg.centrality, cfg.centrality_threshold)
            cent_b = compute_centrality(fc_b, cfg.centrality, cfg.centrality_threshold)
            report = centrality_distortion(
                cent_n, cent_b, estimator=est, sigma_h=sigma_h
            )
            outcomes[est] = EstimatorOutcome(
                estimator=est,
                fc_neuronal=fc_n,
                fc_bold=fc_b,
                distortion=report,
                edges=edge_distortion(fc_n, fc_b),
            )

        levels = cfg.wavelet_levels
        wc_n = wavelet_correlation_matrices(neuronal, levels, cfg.wavelet_filter)
        wc_b = wavelet_correlation_matrices(bold, levels, cfg.wavelet_filter)
        n = connectome.n
        wavelet_dist = np.empty((n, levels))
        level_cent_dist = np.empty((n, levels))
        for j in range(levels):
            wavelet_dist[:, j] = _mean_abs_offdiag_per_node(wc_b[j] - wc_n[j])
            c_n = compute_centrality(
                _level_fc(wc_n[j], neuronal.labels),
                cfg.centrality,
                cfg.centrality_threshold,
            )
            c_b = compute_centrality(
                _level_fc(wc_b[j], neuronal.labels),
                cfg.centrality,
                cfg.centrality_threshold,
            )
            level_cent_dist[:, j] = centrality_distortion(c_n, c_b).per_node

        return TrialResult(
            sigma_h=float(sigma_h),
            replicate=replicate,
            seed=trial_seed(cfg, sigma_h, replicate),
            profile=profile,
            outcomes=outcomes,
            wavelet_distortion=wavelet_dist,
            level_centrality_distortion=level_cent_dist,
            labels=neuronal.labels,
            config=cfg,
            neuronal=neuronal if keep_timeseries else None,
            bold=bold if keep_timeseries else None,
        )
    except FractalFcError as exc:
        _annotate(exc, sigma_h, replicate)


def run_sigma_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Sweep sigma_h over the grid, aggregating across replicates.

    Results are collected in (grid index, replicate) order, so any
    parallel execution of the independent trials would aggregate
    identically.
    """
    if len(cfg.sigma_h_grid) < 2:
        raise ConfigError("sigma_h_grid needs at least 2 points for a sweep")
    per_cell: dict[tuple[float, str], list[DistortionReport]] = {}
    seeds = []
    for sigma_h in cfg.sigma_h_grid:
        for r in range(cfg.replicates):
            trial = run_trial(cfg, sigma_h, r)
            seeds.append((sigma_h, r, trial.seed))
            for est, outcome in trial.outcomes.items():
                per_cell.setdefault((sigma_h, est), []).append(outcome.distortion)
    rows = []
    for sigma_h in cfg.sigma_h_grid:
        for est in cfg.estimators:
            reports = per_cell[(sigma_h, est)]
            md = np.array([rep.mean_distortion for rep in reports])
            rc = np.array([rep.rank_corr for rep in reports])
            rows.append(
                SweepRow(
                    sigma_h=float(sigma_h),
                    estimator=est,
                    mean_distortion_mean=float(md.mean()),
                    mean_distortion_sd=float(md.std(ddof=1)) if md.size > 1 else 0.0,
                    rank_corr_mean=float(rc.mean()),
                    rank_corr_sd=float(rc.std(ddof=1)) if rc.size > 1 else 0.0,
                    replicates=cfg.replicates,
                )
            )
    return SweepResult(rows=tuple(rows), config=cfg, seeds=tuple(seeds))


def run_scale_profile(cfg: ExperimentConfig, sigma_h: float) -> ScaleProfileResult:
    """Wavelet-level distortion profile with centrality quartile tags.

    The reference centrality is the configured centrality kind computed
    on the neuronal Pearson network, averaged across replicates; quartile
    1 collects the least central nodes (ties share the quartile of their
    common rank).
    """
    if cfg.wavelet_levels < 3:
        raise ConfigError("scale profile needs at least 3 wavelet levels")
    levels = cfg.wavelet_levels
    wave_acc = None
    cent_acc = None
    lvl_cent_acc = None
    seeds = []
    labels: tuple[str, ...] = ()
    keep_ts = "pearson" not in cfg.estimators
    for r in range(cfg.replicates):
        trial = run_trial(cfg, sigma_h, r, keep_timeseries=keep_ts)
        seeds.append((sigma_h, r, trial.seed))
        labels = trial.labels
        pearson_ref = (
            trial.outcomes["pearson"].fc_neuronal
            if "pearson" in trial.outcomes
            else pearson_fc(trial.neuronal)
        )
        cent = compute_centrality(
            pearson_ref, cfg.centrality, cfg.centrality_threshold
        ).values
        if wave_acc is None:
            wave_acc = np.zeros_like(trial.wavelet_distortion)
            lvl_cent_acc = np.zeros_like(trial.level_centrality_distortion)
            cent_acc = np.zeros_like(cent)
        wave_acc += trial.wavelet_distortion
        lvl_cent_acc += trial.level_centrality_distortion
        cent_acc += cent
    wave_mean = wave_acc / cfg.replicates
    lvl_cent_mean = lvl_cent_acc / cfg.replicates
    cent_mean = cent_acc / cfg.replicates

    n = cent_mean.size
    ranks = rankdata(cent_mean, method="min")
    quartile = (np.floor(4 * (ranks - 1) / n) + 1).astype(int)

    level_ids = tuple(range(1, levels + 1))
    from .wavelets import level_band

    return ScaleProfileResult(
        sigma_h=float(sigma_h),
        levels=level_ids,
        bands=tuple(level_band(j) for j in level_ids),
        labels=labels,
        centrality=cent_mean,
        quartile=quartile,
        wavelet_distortion=wave_mean,
        centrality_distortion=lvl_cent_mean,
        replicates=cfg.replicates,
        config=cfg,
        seeds=tuple(seeds),
    )


def estimate_nonfractal_fc(
    bold: TimeSeriesMatrix, levels: range = DEFAULT_HURST_LEVELS
) -> FcMatrix:
    """Pearson correlation of the nonfractal components of BOLD signals.

    Each node's memory order is estimated from its own series
    (d_i = H_i - 1/2, with H_i clamped into (0, 1)), the corresponding
    fractional difference strips the fractal component, and the remaining
    signals are correlated.
    """
    out = np.empty_like(bold.data)
    for i in range(bold.n_nodes):
        series = Series(bold.data[i], dt=bold.dt)
        estimate = estimate_hurst(series, levels)
        out[i] = fractional_difference(series, estimate.h_hat - 0.5).values
    return pearson_fc(TimeSeriesMatrix(out, dt=bold.dt, labels=bold.labels))


# ---------------------------------------------------------------------------
# Config file handling


def _apply_section(defaults, data: dict, path: str):
    allowed = {f.name for f in defaults.__dataclass_fields__.values()}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) {sorted(unknown)} in config section {path!r}; "
            f"allowed: {sorted(allowed)}"
        )
    return replace(defaults, **data)


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a validated config from a parsed JSON document.

    Unknown keys anywhere are an error, guarding against silent typos.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    raw = dict(raw)
    kwargs = {}

    connectome = raw.pop("connectome", None)
    if connectome is not None:
        if not isinstance(connectome, dict):
            raise ConfigError("'connectome' must be an object")
        connectome = dict(connectome)
        if "path" in connectome:
            kwargs["connectome_path"] = str(connectome.pop("path"))
            if connectome:
                raise ConfigError(
                    f"unexpected key(s) {sorted(connectome)} next to "
                    "'connectome.path'"
                )
        else:
            kwargs["synthetic"] = _apply_section(
                SyntheticConnectomeSpec(), connectome, "connectome"
            )

    system = raw.pop("system", None)
    if system is not None:
        if not isinstance(system, dict):
            raise ConfigError("'system' must be an object")
        unknown = set(system) - {"tau", "coupling"}
        if unknown:
            raise ConfigError(
                f"unknown key(s) {sorted(unknown)} in config section 'system'"
            )
        kwargs.update({k: float(v) for k, v in system.items()})

    sim = raw.pop("sim", None)
    if sim is not None:
        if not isinstance(sim, dict):
            raise ConfigError("'sim' must be an object")
        if "seed" in sim:
            raise ConfigError(
                "'sim.seed' is not configurable; seeds derive from base_seed"
            )
        kwargs["sim"] = _apply_section(ExperimentConfig().sim, sim, "sim")

    hrf = raw.pop("hrf", None)
    if hrf is not None:
        if not isinstance(hrf, dict):
            raise ConfigError("'hrf' must be an object")
        kwargs["hrf"] = _apply_section(RsHrfConfig(), hrf, "hrf")

    hurst = raw.pop("hurst", None)
    if hurst is not None:
        if not isinstance(hurst, dict):
            raise ConfigError("'hurst' must be an object")
        unknown = set(hurst) - {"mu", "bounds"}
        if unknown:
            raise ConfigError(
                f"unknown key(s) {sorted(unknown)} in config section 'hurst'"
            )
        if "mu" in hurst:
            kwargs["hurst_mu"] = float(hurst["mu"])
        if "bounds" in hurst:
            bounds = hurst["bounds"]
            if not isinstance(bounds, (list, tuple)) or len(bounds) != 2:
                raise ConfigError("'hurst.bounds' must be a [low, high] pair")
            kwargs["hurst_bounds"] = (float(bounds[0]), float(bounds[1]))

    simple = {
        "sigma_h_grid": lambda v: tuple(float(x) for x in v),
        "replicates": int,
        "estimators": lambda v: tuple(str(x) for x in v),
        "estimator_variant": str,
        "bins": int,
        "centrality": str,
        "centrality_threshold": float,
        "wavelet_levels": int,
        "wavelet_filter": str,
        "base_seed": int,
    }
    for key, convert in simple.items():
        if key in raw:
            kwargs[key] = convert(raw.pop(key))
    if raw:
        raise ConfigError(f"unknown top-level config key(s): {sorted(raw)}")
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    import json

    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return config_from_dict(raw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Canonical nested form, the inverse of :func:`config_from_dict`."""
    doc = {
        "connectome": (
            {"path": cfg.connectome_path}
            if cfg.connectome_path is not None
            else asdict(cfg.synthetic)
        ),
        "system": {"tau": cfg.tau, "coupling": cfg.coupling},
        "sim": {
            "dt": cfg.sim.dt,
            "record_every": cfg.sim.record_every,
            "duration": cfg.sim.duration,
            "burn_in": cfg.sim.burn_in,
            "noise_sigma": cfg.sim.noise_sigma,
        },
        "hrf": asdict(cfg.hrf),
        "hurst": {"mu": cfg.hurst_mu, "bounds": list(cfg.hurst_bounds)},
        "sigma_h_grid": list(cfg.sigma_h_grid),
        "replicates": cfg.replicates,
        "estimators": list(cfg.estimators),
        "estimator_variant": cfg.estimator_variant,
        "bins": cfg.bins,
        "centrality": cfg.centrality,
        "centrality_threshold": cfg.centrality_threshold,
        "wavelet_levels": cfg.wavelet_levels,
        "wavelet_filter": cfg.wavelet_filter,
        "base_seed": cfg.base_seed,
    }
    return doc
