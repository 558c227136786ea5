"""Functional connectivity estimators and scale-resolved wavelet correlation.

Three estimators are provided: Pearson correlation, mutual information,
and transfer entropy (one-step histories). MI and TE come in two
variants: "gaussian" (closed-form from covariances, the acceptance-test
default) and "binned" (plug-in on equiprobable rank bins with
Miller-Madow bias correction). Directed matrices follow the connectome
orientation: entry (i, j) quantifies the influence of node j on node i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sp_stats

from .errors import ConfigError, NumericalError
from .fractal import Series
from .simulate import TimeSeriesMatrix
from .wavelets import WaveletDecomposition, level_band, modwt, modwt_coefficients

VARIANTS = ("gaussian", "binned")


@dataclass(frozen=True)
class FcMatrix:
    """Estimator-tagged functional connectivity matrix.

    Pearson matrices are symmetric with unit diagonal; MI matrices are
    symmetric and nonnegative up to estimator bias; TE matrices are
    directed. The diagonal of MI/TE matrices is conventionally zeroed.
    """

    values: np.ndarray
    estimator: str
    directed: bool
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"FC matrix must be square, got {v.shape}")
        object.__setattr__(self, "values", v)
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(str(i) for i in range(v.shape[0]))
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ScaleCorrelation:
    """Per-level wavelet correlation between two series.

    Level j covers the band [1/2^(j+1), 1/2^j] cycles per sample; entries
    are NaN where a level had zero wavelet variance (flagged undefined).
    """

    levels: tuple[int, ...]
    correlations: np.ndarray
    bands: tuple[tuple[float, float], ...]

    def __iter__(self):
        return zip(self.levels, self.correlations)


def _check_rows(data: np.ndarray, labels) -> None:
    if data.shape[1] < 2:
        raise ConfigError("need at least 2 samples")
    sd = data.std(axis=1)
    if np.any(sd == 0):
        node = labels[int(np.argmax(sd == 0))]
        raise NumericalError(
            f"node {node!r} is constant; connectivity undefined"
        )


def pearson_fc(ts: TimeSeriesMatrix) -> FcMatrix:
    """Product-moment correlation between all node pairs."""
    _check_rows(ts.data, ts.labels)
    values = np.corrcoef(ts.data)
    values = np.clip(values, -1.0, 1.0)
    np.fill_diagonal(values, 1.0)
    return FcMatrix(values, estimator="pearson", directed=False, labels=ts.labels)


def _equiprobable_labels(data: np.ndarray, bins: int) -> np.ndarray:
    """Rank-quantile bin labels per row; invariant under monotone maps."""
    n = data.shape[1]
    ranks = np.apply_along_axis(
        lambda r: sp_stats.rankdata(r, method="ordinal"), 1, data
    )
    return ((ranks - 1) * bins // n).astype(np.int64)


def _entropy_mm(codes: np.ndarray, n: int) -> float:
    """Plug-in entropy of integer codes with Miller-Madow correction."""
    _, counts = np.unique(codes, return_counts=True)
    p = counts / n
    h = -np.sum(p * np.log(p))
    return float(h + (counts.size - 1) / (2.0 * n))


def _binned_mi(lx: np.ndarray, ly: np.ndarray, bins: int, n: int) -> float:
    hx = _entropy_mm(lx, n)
    hy = _entropy_mm(ly, n)
    hxy = _entropy_mm(lx * bins + ly, n)
    return hx + hy - hxy


def mutual_information_fc(
    ts: TimeSeriesMatrix, estimator: str = "gaussian", bins: int = 8
) -> FcMatrix:
    """Pairwise mutual information in nats.

    gaussian: MI = -ln(1 - rho^2) / 2 from the Pearson matrix (exact for
    jointly Gaussian data). binned: plug-in estimate on equiprobable
    marginal bins with Miller-Madow bias correction.
    """
    if estimator not in VARIANTS:
        raise ConfigError(f"unknown MI estimator {estimator!r}; use one of {VARIANTS}")
    _check_rows(ts.data, ts.labels)
    n_nodes = ts.n_nodes
    if estimator == "gaussian":
        rho = pearson_fc(ts).values
        with np.errstate(divide="ignore"):
            values = -0.5 * np.log1p(-np.clip(rho, -1, 1) ** 2)
    else:
        if bins < 2:
            raise ConfigError(f"bins must be >= 2, got {bins}")
        n = ts.n_samples
        labels = _equiprobable_labels(ts.data, bins)
        values = np.zeros((n_nodes, n_nodes))
        for i in range(n_nodes):
            for j in range(i + 1, n_nodes):
                values[i, j] = values[j, i] = _binned_mi(
                    labels[i], labels[j], bins, n
                )
    np.fill_diagonal(values, 0.0)
    return FcMatrix(values, estimator="mi", directed=False, labels=ts.labels)


def _gaussian_te_matrix(data: np.ndarray) -> np.ndarray:
    """TE(j -> i) for all pairs from lagged covariances, k = l = 1."""
    n_nodes = data.shape[0]
    present = data[:, 1:]
    past = data[:, :-1]
    cov = np.cov(np.vstack([present, past]))
    c_yy = cov[:n_nodes, :n_nodes]
    c_yz = cov[:n_nodes, n_nodes:]
    c_zz = cov[n_nodes:, n_nodes:]

    te = np.zeros((n_nodes, n_nodes))
    for i in range(n_nodes):
        var_own = c_yy[i, i] - c_yz[i, i] ** 2 / c_zz[i, i]
        for j in range(n_nodes):
            if j == i:
                continue
            s = np.array(
                [[c_zz[i, i], c_zz[i, j]], [c_zz[j, i], c_zz[j, j]]]
            )
            c = np.array([c_yz[i, i], c_yz[i, j]])
            try:
                coef = np.linalg.solve(s, c)
            except np.linalg.LinAlgError:
                coef = np.linalg.lstsq(s, c, rcond=None)[0]
            var_both = c_yy[i, i] - c @ coef
            if var_both <= 0 or var_own <= 0:
                raise NumericalError(
                    f"degenerate conditional variance for pair ({i}, {j}); "
                    "series may be deterministic duplicates"
                )
            te[i, j] = max(0.5 * np.log(var_own / var_both), 0.0)
    return te


def _binned_te(ly: np.ndarray, lx: np.ndarray, bins: int) -> float:
    """Plug-in TE(x -> y) on bin labels with per-term Miller-Madow correction."""
    y_now = ly[1:]
    y_past = ly[:-1]
    x_past = lx[:-1]
    n = y_now.size
    h_joint_own = _entropy_mm(y_now * bins + y_past, n)
    h_own = _entropy_mm(y_past, n)
    h_joint_both = _entropy_mm((y_now * bins + y_past) * bins + x_past, n)
    h_pasts = _entropy_mm(y_past * bins + x_past, n)
    return (h_joint_own - h_own) - (h_joint_both - h_pasts)


def transfer_entropy_fc(
    ts: TimeSeriesMatrix, estimator: str = "gaussian", bins: int = 8
) -> FcMatrix:
    """Directed transfer entropy with one-step histories.

    Entry (i, j) is TE(node j -> node i), matching the connectome
    orientation. gaussian: 0.5 * ln of the conditional-variance ratio
    computed from lagged covariances; binned: conditional-entropy
    difference on equiprobable bins.
    """
    if estimator not in VARIANTS:
        raise ConfigError(f"unknown TE estimator {estimator!r}; use one of {VARIANTS}")
    if ts.n_samples < 3:
        raise ConfigError("transfer entropy needs at least 3 samples")
    _check_rows(ts.data, ts.labels)
    if estimator == "gaussian":
        values = _gaussian_te_matrix(ts.data)
    else:
        if bins < 2:
            raise ConfigError(f"bins must be >= 2, got {bins}")
        labels = _equiprobable_labels(ts.data, bins)
        n_nodes = ts.n_nodes
        values = np.zeros((n_nodes, n_nodes))
        for i in range(n_nodes):
            for j in range(n_nodes):
                if j != i:
                    values[i, j] = _binned_te(labels[i], labels[j], bins)
    np.fill_diagonal(values, 0.0)
    return FcMatrix(values, estimator="te", directed=True, labels=ts.labels)


def estimate_fc(
    ts: TimeSeriesMatrix, estimator: str, variant: str = "gaussian", bins: int = 8
) -> FcMatrix:
    """Dispatch helper: estimator in {pearson, mi, te}."""
    if estimator == "pearson":
        return pearson_fc(ts)
    if estimator == "mi":
        return mutual_information_fc(ts, variant, bins)
    if estimator == "te":
        return transfer_entropy_fc(ts, variant, bins)
    raise ConfigError(f"unknown estimator {estimator!r}")


def wavelet_correlation(
    x: Series, y: Series, levels: int, filter: str = "d4"
) -> ScaleCorrelation:
    """Pearson correlation of MODWT coefficients, level by level."""
    if len(x) != len(y):
        raise ConfigError(
            f"series lengths differ: {len(x)} vs {len(y)}"
        )
    wx = modwt(x.values, levels, filter).wavelet_coeffs
    wy = modwt(y.values, levels, filter).wavelet_coeffs
    corrs = np.empty(levels)
    for j in range(levels):
        sx = wx[j].std()
        sy = wy[j].std()
        if sx == 0 or sy == 0:
            corrs[j] = np.nan
        else:
            corrs[j] = np.corrcoef(wx[j], wy[j])[0, 1]
    lev = tuple(range(1, levels + 1))
    return ScaleCorrelation(
        levels=lev,
        correlations=corrs,
        bands=tuple(level_band(j) for j in lev),
    )


def wavelet_correlation_matrices(
    ts: TimeSeriesMatrix, levels: int, filter: str = "d4"
) -> np.ndarray:
    """All-pairs wavelet correlation, shape (levels, n_nodes, n_nodes).

    Entries are NaN for node pairs where a level has zero variance.
    """
    coeffs, _ = modwt_coefficients(ts.data, levels, filter)
    out = np.empty((levels, ts.n_nodes, ts.n_nodes))
    for j in range(levels):
        block = coeffs[j]
        sd = block.std(axis=1)
        if np.any(sd == 0):
            corr = np.full((ts.n_nodes, ts.n_nodes), np.nan)
            ok = sd > 0
            if ok.any():
                corr[np.ix_(ok, ok)] = np.corrcoef(block[ok])
        else:
            corr = np.corrcoef(block)
        out[j] = np.clip(corr, -1.0, 1.0)
    return out


__all__ = [
    "FcMatrix",
    "ScaleCorrelation",
    "WaveletDecomposition",
    "estimate_fc",
    "modwt",
    "mutual_information_fc",
    "pearson_fc",
    "transfer_entropy_fc",
    "wavelet_correlation",
    "wavelet_correlation_matrices",
]
