"""Persist experiment results: CSV tables, a JSON manifest, and SVG plots.

Every writer is deterministic: rerunning the same configuration yields
byte-identical files (no timestamps, stable key order, shortest
round-trip float formatting).
"""

from __future__ import annotations

import csv
import os

from . import __version__
from .experiment import (
    ExperimentConfig,
    ScaleProfileResult,
    SweepResult,
    TrialResult,
    config_to_dict,
)
from .serialization import (
    distortion_to_csv,
    fc_to_csv,
    fmt,
    timeseries_to_csv,
    write_json,
)


def _manifest(kind: str, cfg: ExperimentConfig, seeds, extra: dict | None = None):
    doc = {
        "kind": kind,
        "version": __version__,
        "config": config_to_dict(cfg),
        "seeds": [
            {"sigma_h": s, "replicate": r, "seed": seed} for (s, r, seed) in seeds
        ],
    }
    if extra:
        doc.update(extra)
    return doc


def _write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "sigma_h",
                "estimator",
                "mean_distortion_mean",
                "mean_distortion_sd",
                "rank_corr_mean",
                "rank_corr_sd",
                "replicates",
            ]
        )
        for row in result.rows:
            writer.writerow(
                [
                    fmt(row.sigma_h),
                    row.estimator,
                    fmt(row.mean_distortion_mean),
                    fmt(row.mean_distortion_sd),
                    fmt(row.rank_corr_mean),
                    fmt(row.rank_corr_sd),
                    str(row.replicates),
                ]
            )


def _write_scales_csv(result: ScaleProfileResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "node",
                "label",
                "centrality",
                "quartile",
                "level",
                "band_low",
                "band_high",
                "wavelet_distortion",
                "centrality_distortion",
            ]
        )
        for i, label in enumerate(result.labels):
            for k, level in enumerate(result.levels):
                lo, hi = result.bands[k]
                writer.writerow(
                    [
                        str(i),
                        label,
                        fmt(result.centrality[i]),
                        str(int(result.quartile[i])),
                        str(level),
                        fmt(lo),
                        fmt(hi),
                        fmt(result.wavelet_distortion[i, k]),
                        fmt(result.centrality_distortion[i, k]),
                    ]
                )


def _write_wavelet_distortion_csv(trial: TrialResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["node", "label"]
            + [f"level_{j + 1}" for j in range(trial.wavelet_distortion.shape[1])]
        )
        for i, label in enumerate(trial.labels):
            writer.writerow(
                [str(i), label]
                + [fmt(v) for v in trial.wavelet_distortion[i]]
            )


def emit_outputs(result, outdir) -> list[str]:
    """Write the CSV/JSON/SVG file set for a result; returns the paths."""
    from . import plots

    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []

    def target(name: str) -> str:
        path = os.path.join(outdir, name)
        written.append(path)
        return path

    if isinstance(result, SweepResult):
        _write_sweep_csv(result, target("sweep.csv"))
        write_json(
            _manifest("sweep", result.config, result.seeds),
            target("manifest.json"),
        )
        plots.sweep_plot(result, target("sweep.svg"))
    elif isinstance(result, ScaleProfileResult):
        _write_scales_csv(result, target("scales.csv"))
        write_json(
            _manifest(
                "scales",
                result.config,
                result.seeds,
                {"sigma_h": result.sigma_h, "replicates": result.replicates},
            ),
            target("manifest.json"),
        )
        plots.scale_profile_plot(result, target("scales.svg"))
    elif isinstance(result, TrialResult):
        for est, outcome in result.outcomes.items():
            fc_to_csv(outcome.fc_neuronal, target(f"fc_{est}_neuronal.csv"))
            fc_to_csv(outcome.fc_bold, target(f"fc_{est}_bold.csv"))
            distortion_to_csv(
                outcome.distortion, result.labels, target(f"distortion_{est}.csv")
            )
        _write_wavelet_distortion_csv(result, target("wavelet_distortion.csv"))
        if result.neuronal is not None:
            timeseries_to_csv(result.neuronal, target("neuronal.csv"))
        if result.bold is not None:
            timeseries_to_csv(result.bold, target("bold.csv"))
        write_json(
            _manifest(
                "trial",
                result.config,
                [(result.sigma_h, result.replicate, result.seed)],
                {
                    "sigma_h": result.sigma_h,
                    "replicate": result.replicate,
                    "hurst_profile": [float(h) for h in result.profile.h],
                },
            ),
            target("manifest.json"),
        )
        plots.trial_plot(result, target("trial.svg"))
    else:
        raise TypeError(f"cannot emit outputs for {type(result).__name__}")
    return written
