"""Node centrality and distortion measures on functional networks.

Centrality defaults to strength (weighted degree) on the absolute FC
matrix; eigenvector centrality is available as an alternative. Distortion
between a reference (neuronal-level) and observed (BOLD-level) network is
reported per node as relative error, plus the Spearman rank correlation
of the two centrality profiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sp_stats
from scipy.sparse import csgraph, csr_matrix

from .connectivity import FcMatrix
from .errors import ConfigError, NumericalError

CENTRALITY_KINDS = ("strength", "eigenvector")


@dataclass(frozen=True)
class CentralityVector:
    """Nonnegative per-node centralities normalized to sum 1."""

    values: np.ndarray
    kind: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(v < 0):
            raise ValueError("centrality entries must be nonnegative")
        if abs(v.sum() - 1.0) > 1e-10:
            raise ValueError(f"centrality must sum to 1, got {v.sum()}")
        if self.kind not in CENTRALITY_KINDS:
            raise ValueError(f"unknown centrality kind {self.kind!r}")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class DistortionReport:
    """Per-node and summary discrepancy between two centrality profiles.

    rank_ref/rank_obs hold each node's centrality rank (1 = most central,
    ties broken by node index) in the reference and observed profiles.
    """

    per_node: np.ndarray
    mean_distortion: float
    rank_corr: float
    rank_ref: np.ndarray
    rank_obs: np.ndarray
    estimator: str = ""
    sigma_h: float = float("nan")

    def __post_init__(self):
        object.__setattr__(
            self, "per_node", np.asarray(self.per_node, dtype=float)
        )
        object.__setattr__(
            self, "rank_ref", np.asarray(self.rank_ref, dtype=int)
        )
        object.__setattr__(
            self, "rank_obs", np.asarray(self.rank_obs, dtype=int)
        )


@dataclass(frozen=True)
class EdgeDistortionReport:
    """Entrywise off-diagonal discrepancy between two FC matrices."""

    mean_abs: float
    max_abs: float
    per_node: np.ndarray
    estimator: str = ""


def _magnitude(fc: FcMatrix, threshold: float) -> np.ndarray:
    """|FC| with sub-threshold entries zeroed (exploratory option)."""
    a = np.abs(fc.values).copy()
    if threshold > 0:
        a[a < threshold] = 0.0
    return a


def strength_centrality(fc: FcMatrix, threshold: float = 0.0) -> CentralityVector:
    """Weighted degree on |FC|, normalized to sum 1.

    For directed matrices (TE) each node's strength sums both its incoming
    and outgoing entries. A positive ``threshold`` zeroes weaker entries
    first; the default keeps the dense weighted matrix.
    """
    a = _magnitude(fc, threshold)
    np.fill_diagonal(a, 0.0)
    if not np.any(a):
        raise NumericalError("all-zero FC matrix; centrality undefined")
    strength = a.sum(axis=1)
    if fc.directed:
        strength = strength + a.sum(axis=0)
    return CentralityVector(strength / strength.sum(), kind="strength")


def eigenvector_centrality(fc: FcMatrix, threshold: float = 0.0) -> CentralityVector:
    """Leading eigenvector of |FC| by power iteration, normalized to sum 1."""
    a = _magnitude(fc, threshold)
    n = fc.n
    adj = a.copy()
    np.fill_diagonal(adj, 0.0)
    n_comp, comp = csgraph.connected_components(
        csr_matrix(adj > 0), directed=False
    )
    if n_comp > 1:
        groups = [
            list(np.flatnonzero(comp == k)) for k in range(n_comp)
        ]
        raise NumericalError(
            f"FC graph is disconnected ({n_comp} components): {groups}; "
            "eigenvector centrality undefined"
        )
    v = np.full(n, 1.0 / n)
    for _ in range(10000):
        nxt = a @ v
        norm = np.linalg.norm(nxt)
        if norm == 0:
            raise NumericalError("power iteration collapsed to zero vector")
        nxt = nxt / norm
        if np.max(np.abs(nxt - v)) < 1e-10:
            v = nxt
            break
        v = nxt
    else:
        raise NumericalError(
            "power iteration did not converge within 10000 iterations"
        )
    v = np.abs(v)
    return CentralityVector(v / v.sum(), kind="eigenvector")


def compute_centrality(
    fc: FcMatrix, kind: str = "strength", threshold: float = 0.0
) -> CentralityVector:
    if kind == "strength":
        return strength_centrality(fc, threshold)
    if kind == "eigenvector":
        return eigenvector_centrality(fc, threshold)
    raise ConfigError(f"unknown centrality kind {kind!r}")


def centrality_distortion(
    c_ref: CentralityVector,
    c_obs: CentralityVector,
    estimator: str = "",
    sigma_h: float = float("nan"),
) -> DistortionReport:
    """Relative per-node centrality error plus rank stability.

    delta_i = |c_obs_i - c_ref_i| / c_ref_i; relative error keeps hub and
    peripheral nodes comparable. rank_corr is the Spearman correlation of
    the two profiles (1.0 when they are identical).
    """
    if len(c_ref) != len(c_obs):
        raise ConfigError(
            f"centrality lengths differ: {len(c_ref)} vs {len(c_obs)}"
        )
    if c_ref.kind != c_obs.kind:
        raise ConfigError(
            f"centrality kinds differ: {c_ref.kind} vs {c_obs.kind}"
        )
    ref = c_ref.values
    if np.any(ref == 0):
        raise NumericalError(
            "reference centrality has zero entries; relative distortion undefined"
        )
    delta = np.abs(c_obs.values - ref) / ref
    if np.array_equal(c_obs.values, ref):
        rank_corr = 1.0
    else:
        rank_corr = float(sp_stats.spearmanr(ref, c_obs.values).statistic)
    return DistortionReport(
        per_node=delta,
        mean_distortion=float(delta.mean()),
        rank_corr=rank_corr,
        rank_ref=_descending_ranks(ref),
        rank_obs=_descending_ranks(c_obs.values),
        estimator=estimator,
        sigma_h=sigma_h,
    )


def _descending_ranks(values: np.ndarray) -> np.ndarray:
    """1 = largest value; ties resolved by node index."""
    order = np.lexsort((np.arange(values.size), -values))
    ranks = np.empty(values.size, dtype=int)
    ranks[order] = np.arange(1, values.size + 1)
    return ranks


def edge_distortion(fc_ref: FcMatrix, fc_obs: FcMatrix) -> EdgeDistortionReport:
    """Mean/max absolute off-diagonal difference and per-node row means."""
    if fc_ref.estimator != fc_obs.estimator:
        raise ConfigError(
            f"estimator tags differ: {fc_ref.estimator!r} vs {fc_obs.estimator!r}"
        )
    if fc_ref.values.shape != fc_obs.values.shape:
        raise ConfigError(
            f"shapes differ: {fc_ref.values.shape} vs {fc_obs.values.shape}"
        )
    diff = np.abs(fc_obs.values - fc_ref.values)
    off = ~np.eye(fc_ref.n, dtype=bool)
    per_node = np.array([diff[i, off[i]].mean() for i in range(fc_ref.n)])
    return EdgeDistortionReport(
        mean_abs=float(diff[off].mean()),
        max_abs=float(diff[off].max()),
        per_node=per_node,
        estimator=fc_ref.estimator,
    )
