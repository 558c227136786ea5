"""Connectome loading, validation, and synthetic generation.

A connectome is a directed, weighted, zero-diagonal adjacency matrix over
labeled regions; entry (i, j) is the strength of the projection from node
j to node i.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class Connectome:
    """Directed weighted adjacency over labeled regions."""

    weights: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise ValueError("connectome needs at least 2 nodes")
        if not np.all(np.isfinite(w)):
            raise ValueError("connectome weights must be finite")
        if np.any(w < 0):
            raise ValueError("connectome weights must be nonnegative")
        if np.any(np.diag(w) != 0):
            raise ValueError("connectome diagonal must be zero")
        if len(self.labels) != w.shape[0]:
            raise ValueError(
                f"{len(self.labels)} labels for {w.shape[0]} nodes"
            )
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def default_labels(n: int) -> tuple[str, ...]:
    width = len(str(n - 1))
    return tuple(f"r{i:0{width}d}" for i in range(n))


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_connectome(path) -> Connectome:
    """Read a connectome from CSV.

    The file may start with one header row of region labels, followed by
    n rows of n comma-separated numeric weights. Nonzero diagonal entries
    are forced to zero with a warning; negative or non-numeric entries are
    errors that name the offending cell.
    """
    try:
        with open(path, newline="") as fh:
            rows = [
                row for row in csv.reader(fh) if row and any(c.strip() for c in row)
            ]
    except FileNotFoundError as exc:
        raise ConfigError(f"connectome file not found: {path}") from exc
    if not rows:
        raise ConfigError(f"{path}: empty connectome file")

    labels = None
    if not all(_is_number(c.strip()) for c in rows[0]):
        labels = tuple(c.strip().strip('"') for c in rows[0])
        rows = rows[1:]
    if not rows:
        raise ConfigError(f"{path}: no data rows after header")

    n_rows = len(rows)
    n_cols = len(rows[0])
    for r, row in enumerate(rows):
        if len(row) != n_cols:
            raise ConfigError(
                f"{path}: row {r + 1} has {len(row)} columns, expected {n_cols}"
            )
    if n_rows != n_cols:
        raise ConfigError(f"{path}: matrix not square ({n_rows}×{n_cols})")
    if n_rows < 2:
        raise ConfigError(f"{path}: connectome needs at least 2 nodes, got {n_rows}")

    w = np.empty((n_rows, n_cols))
    for r, row in enumerate(rows):
        for c, cell in enumerate(row):
            cell = cell.strip()
            if not _is_number(cell):
                raise ConfigError(
                    f"{path}: non-numeric entry {cell!r} at row {r + 1}, "
                    f"column {c + 1}"
                )
            value = float(cell)
            if np.isnan(value):
                raise ConfigError(
                    f"{path}: NaN entry at row {r + 1}, column {c + 1}"
                )
            if value < 0:
                raise ConfigError(
                    f"{path}: negative weight {value} at row {r + 1}, "
                    f"column {c + 1}"
                )
            w[r, c] = value

    if np.any(np.diag(w) != 0):
        warnings.warn(
            f"{path}: nonzero diagonal entries forced to zero", stacklevel=2
        )
        np.fill_diagonal(w, 0.0)

    if labels is None:
        labels = default_labels(n_rows)
    elif len(labels) != n_cols:
        raise ConfigError(
            f"{path}: header has {len(labels)} labels for {n_cols} columns"
        )
    return Connectome(w, labels)


def generate_synthetic_connectome(
    n: int, density: float, modules: int = 1, seed: int = 0
) -> Connectome:
    """Random modular directed connectome with log-normal weights.

    Within-module edges are four times as probable as between-module edges
    while the overall edge density matches ``density`` (the 4:1 ratio is
    relaxed toward lower values when it would require a probability above
    one). Draws are retried, up to 100 times, until no node is fully
    isolated.

    Deterministic given ``seed``.
    """
    if n < 2:
        raise ConfigError(f"need at least 2 nodes, got {n}")
    if not 0.0 < density <= 1.0:
        raise ConfigError(f"density must be in (0, 1], got {density}")
    if modules < 1:
        raise ConfigError(f"modules must be >= 1, got {modules}")

    module_of = np.arange(n) * modules // n
    same = module_of[:, None] == module_of[None, :]
    off_diag = ~np.eye(n, dtype=bool)
    frac_within = same[off_diag].mean()

    p_between = density / (1.0 + 3.0 * frac_within)
    p_within = 4.0 * p_between
    if p_within > 1.0:
        # Preserve total density; the modular contrast saturates.
        p_within = 1.0
        p_between = (density - frac_within) / (1.0 - frac_within)
    prob = np.where(same, p_within, p_between)

    rng = np.random.default_rng(seed)
    for _ in range(100):
        mask = (rng.random((n, n)) < prob) & off_diag
        strengths = rng.lognormal(mean=0.0, sigma=0.5, size=(n, n))
        w = np.where(mask, strengths, 0.0)
        degree = w.sum(axis=0) + w.sum(axis=1)
        if np.all(degree > 0):
            return Connectome(w, default_labels(n))
    raise ConfigError(
        f"could not draw a connectome without isolated nodes in 100 attempts "
        f"(n={n}, density={density}); increase density"
    )
