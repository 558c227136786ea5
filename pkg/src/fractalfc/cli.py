"""Command-line interface.

Exit codes: 0 success, 2 configuration or input error, 3 numerical
failure, 4 I/O error.
"""

from __future__ import annotations

import sys

import click

from .errors import ConfigError, NumericalError
from .experiment import (
    ExperimentConfig,
    estimate_nonfractal_fc,
    load_config,
    run_scale_profile,
    run_sigma_sweep,
    run_trial,
)
from .network import generate_synthetic_connectome
from .outputs import emit_outputs
from .serialization import fc_to_csv, connectome_to_csv, timeseries_from_csv


@click.group()
@click.version_option()
def cli():
    """Simulate fractal hemodynamics and measure functional-network distortion."""


@cli.command("gen-connectome")
@click.option("--nodes", type=int, default=40, show_default=True)
@click.option("--density", type=float, default=0.2, show_default=True)
@click.option("--modules", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=8601, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def gen_connectome(nodes, density, modules, seed, out):
    """Write a synthetic modular connectome as CSV."""
    c = generate_synthetic_connectome(nodes, density, modules, seed)
    connectome_to_csv(c, out)
    click.echo(f"wrote {out} ({c.n} nodes)")


def _load_config_arg(path, threshold=None) -> ExperimentConfig:
    from dataclasses import replace

    cfg = ExperimentConfig() if path is None else load_config(path)
    if threshold is not None:
        cfg = replace(cfg, centrality_threshold=threshold)
    return cfg


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=False), default=None,
              help="JSON experiment config; defaults apply when omitted.")
@click.option("--sigma-h", type=float, default=None,
              help="Exponent spread; defaults to the first grid point.")
@click.option("--replicate", type=int, default=0, show_default=True)
@click.option("--threshold", type=float, default=None,
              help="Zero FC entries below this before centrality (exploratory).")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def simulate(config_path, sigma_h, replicate, threshold, out):
    """Run one trial and export time series, FC matrices, and distortions."""
    cfg = _load_config_arg(config_path, threshold)
    if sigma_h is None:
        sigma_h = cfg.sigma_h_grid[0]
    trial = run_trial(cfg, sigma_h, replicate, keep_timeseries=True)
    paths = emit_outputs(trial, out)
    click.echo("\n".join(paths))


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=False), default=None)
@click.option("--threshold", type=float, default=None,
              help="Zero FC entries below this before centrality (exploratory).")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def sweep(config_path, threshold, out):
    """Sweep sigma_h over the configured grid (Figure-1 style analysis)."""
    cfg = _load_config_arg(config_path, threshold)
    result = run_sigma_sweep(cfg)
    paths = emit_outputs(result, out)
    click.echo("\n".join(paths))


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=False), default=None)
@click.option("--sigma-h", type=float, required=True)
@click.option("--threshold", type=float, default=None,
              help="Zero FC entries below this before centrality (exploratory).")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def scales(config_path, sigma_h, threshold, out):
    """Wavelet-scale distortion profile by centrality quartile (Figure-2 style)."""
    cfg = _load_config_arg(config_path, threshold)
    result = run_scale_profile(cfg, sigma_h)
    paths = emit_outputs(result, out)
    click.echo("\n".join(paths))


@cli.command()
@click.option("--bold", "bold_path", required=True, type=click.Path(exists=False),
              help="TimeSeriesMatrix CSV of BOLD signals.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--min-level", type=int, default=2, show_default=True)
@click.option("--max-level", type=int, default=6, show_default=True)
def defractal(bold_path, out, min_level, max_level):
    """Estimate nonfractal connectivity from BOLD time series."""
    if min_level < 1 or max_level < min_level:
        raise ConfigError(
            f"invalid level range [{min_level}, {max_level}]"
        )
    try:
        ts = timeseries_from_csv(bold_path)
    except FileNotFoundError as exc:
        raise ConfigError(f"BOLD file not found: {bold_path}") from exc
    fc = estimate_nonfractal_fc(ts, range(min_level, max_level + 1))
    fc_to_csv(fc, out)
    click.echo(f"wrote {out}")


@cli.command()
def selftest():
    """Run the built-in oracle suite."""
    from .selftest import run_selftest

    if not run_selftest(click.echo):
        raise NumericalError("selftest failed")
    click.echo("all checks passed")


def main(argv=None) -> int:
    """Entry point with exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 2
    except click.exceptions.ClickException as exc:
        exc.show()
        return 2
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 2
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 3
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
