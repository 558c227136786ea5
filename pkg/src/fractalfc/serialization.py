"""CSV and JSON formats shared by the CLI and the experiment runner.

Floats are written with ``repr``, the shortest decimal that round-trips,
so reruns of a deterministic pipeline produce byte-identical files.
Comment lines start with '#' and carry scalar metadata (sampling
interval, estimator tag, summary statistics).
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .connectivity import FcMatrix
from .errors import ConfigError
from .fractal import Series
from .graph_metrics import DistortionReport
from .network import Connectome
from .simulate import TimeSeriesMatrix


def fmt(x) -> str:
    """Shortest round-trip decimal form of a float (or int passthrough)."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def series_to_csv(series: Series, path) -> None:
    """One column of samples preceded by a '# dt=<value>' comment."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# dt={fmt(series.dt)}\n")
        for v in series.values:
            fh.write(fmt(v) + "\n")


def series_from_csv(path) -> Series:
    dt = 1.0
    values = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "dt=" in line:
                    dt = float(line.split("dt=", 1)[1])
                continue
            values.append(float(line))
    return Series(np.asarray(values), dt=dt)


def timeseries_to_csv(ts: TimeSeriesMatrix, path) -> None:
    """Sample index first, one column per node, '# dt=' comment line."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# dt={fmt(ts.dt)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", *ts.labels])
        for k in range(ts.n_samples):
            writer.writerow([str(k), *(fmt(v) for v in ts.data[:, k])])


def timeseries_from_csv(path) -> TimeSeriesMatrix:
    dt = 1.0
    labels: tuple[str, ...] | None = None
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                if "dt=" in stripped:
                    dt = float(stripped.split("dt=", 1)[1])
                continue
            cells = next(csv.reader([stripped]))
            if labels is None:
                if cells[0] != "index":
                    raise ConfigError(
                        f"{path}: expected header starting with 'index', "
                        f"got {cells[0]!r}"
                    )
                labels = tuple(cells[1:])
                continue
            rows.append([float(c) for c in cells[1:]])
    if labels is None or not rows:
        raise ConfigError(f"{path}: no time series data found")
    return TimeSeriesMatrix(np.asarray(rows).T, dt=dt, labels=labels)


def connectome_to_csv(c: Connectome, path) -> None:
    """Label header row followed by n numeric rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(c.labels)
        for row in c.weights:
            writer.writerow([fmt(v) for v in row])


def fc_to_csv(fc: FcMatrix, path) -> None:
    """Label header plus n numeric rows, '# estimator=' comment line."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# estimator={fc.estimator}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fc.labels)
        for row in fc.values:
            writer.writerow([fmt(v) for v in row])


def fc_from_csv(path) -> FcMatrix:
    estimator = ""
    labels: tuple[str, ...] | None = None
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                if "estimator=" in stripped:
                    estimator = stripped.split("estimator=", 1)[1].strip()
                continue
            cells = next(csv.reader([stripped]))
            if labels is None:
                labels = tuple(cells)
                continue
            rows.append([float(c) for c in cells])
    if labels is None or not rows:
        raise ConfigError(f"{path}: no FC matrix data found")
    values = np.asarray(rows)
    if values.shape[0] != values.shape[1] or values.shape[0] != len(labels):
        raise ConfigError(
            f"{path}: FC matrix shape {values.shape} does not match "
            f"{len(labels)} labels"
        )
    return FcMatrix(
        values, estimator=estimator, directed=(estimator == "te"), labels=labels
    )


def distortion_to_csv(report: DistortionReport, labels, path) -> None:
    """One row per node plus a summary comment line with the scalars."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "label", "delta", "rank_ref", "rank_obs"])
        for i, delta in enumerate(report.per_node):
            writer.writerow(
                [
                    str(i),
                    labels[i],
                    fmt(delta),
                    str(report.rank_ref[i]),
                    str(report.rank_obs[i]),
                ]
            )
        fh.write(
            "# summary"
            f" mean_distortion={fmt(report.mean_distortion)}"
            f" rank_corr={fmt(report.rank_corr)}"
            f" estimator={report.estimator}"
            f" sigma_h={fmt(report.sigma_h)}\n"
        )


def write_json(payload: dict, path) -> None:
    """Stable-key JSON with a trailing newline."""
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
