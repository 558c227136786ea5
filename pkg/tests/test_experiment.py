"""Experiment configuration, trials, sweeps, and output emission."""

import json

import numpy as np
import pytest

from fractalfc import (
    ConfigError,
    SyntheticConnectomeSpec,
    ExperimentConfig,
    RsHrfConfig,
    SimConfig,
    emit_outputs,
    estimate_nonfractal_fc,
    pearson_fc,
    run_scale_profile,
    run_sigma_sweep,
    run_trial,
)
from fractalfc.experiment import (
    config_from_dict,
    config_to_dict,
    grid_index,
    load_config,
    replicate_seed,
    trial_seed,
)
from fractalfc.simulate import TimeSeriesMatrix


def small_cfg(**overrides):
    """Fast configuration for pipeline tests (512 recorded samples)."""
    defaults = dict(
        synthetic=SyntheticConnectomeSpec(
            nodes=12, density=0.3, modules=3, seed=5
        ),
        sim=SimConfig(dt=0.05, record_every=160, duration=4296.0, burn_in=200.0),
        sigma_h_grid=(0.0, 0.1),
        replicates=2,
        wavelet_levels=4,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


CONTROL = dict(
    hurst_mu=0.5,
    hurst_bounds=(0.45, 0.55),
    sigma_h_grid=(0.0,),
    replicates=1,
)


class TestConfig:
    def test_defaults_valid(self):
        cfg = ExperimentConfig()
        assert cfg.replicates == 20
        assert cfg.sigma_h_grid == (0.0, 0.05, 0.1, 0.15, 0.2)
        assert cfg.estimators == ("pearson", "mi", "te")

    def test_grid_must_be_sorted(self):
        with pytest.raises(ConfigError, match="sorted"):
            ExperimentConfig(sigma_h_grid=(0.1, 0.0))

    def test_grid_nonnegative(self):
        with pytest.raises(ConfigError, match="nonnegative"):
            ExperimentConfig(sigma_h_grid=(-0.1, 0.0))

    def test_unknown_estimator(self):
        with pytest.raises(ConfigError, match="unknown estimators"):
            ExperimentConfig(estimators=("pearson", "coherence"))

    def test_round_trip_through_dict(self):
        cfg = small_cfg()
        assert config_from_dict(config_to_dict(cfg)) == cfg

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="bogus"):
            config_from_dict({"bogus": 1})

    def test_unknown_nested_key(self):
        with pytest.raises(ConfigError, match="sim"):
            config_from_dict({"sim": {"step_size": 0.1}})

    def test_sim_seed_rejected(self):
        with pytest.raises(ConfigError, match="seed"):
            config_from_dict({"sim": {"seed": 1}})

    def test_load_config_file(self, tmp_path):
        doc = {"replicates": 3, "sigma_h_grid": [0.0, 0.2]}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(doc))
        cfg = load_config(path)
        assert cfg.replicates == 3
        assert cfg.sigma_h_grid == (0.0, 0.2)

    def test_load_config_missing(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "none.json")

    def test_load_config_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="invalid JSON"):
            load_config(path)


class TestSeeds:
    def test_stated_rule(self):
        cfg = ExperimentConfig(base_seed=100)
        assert trial_seed(cfg, 0.0, 0) == 100
        assert trial_seed(cfg, 0.0, 2) == 100 + 2 * 1000003
        assert trial_seed(cfg, 0.1, 0) == 100 + 2 * 7919
        assert trial_seed(cfg, 0.2, 3) == 100 + 3 * 1000003 + 4 * 7919

    def test_grid_index_insertion(self):
        cfg = ExperimentConfig()
        assert grid_index(cfg, 0.15) == 3
        assert grid_index(cfg, 0.12) == 3  # insertion point, stable

    def test_replicate_seed_independent_of_grid(self):
        cfg = ExperimentConfig(base_seed=7)
        assert replicate_seed(cfg, 1) == 7 + 1000003


class TestRunTrial:
    def test_deterministic(self):
        cfg = small_cfg()
        a = run_trial(cfg, 0.1, 0)
        b = run_trial(cfg, 0.1, 0)
        assert a.seed == b.seed
        for est in cfg.estimators:
            assert np.array_equal(
                a.outcomes[est].fc_bold.values, b.outcomes[est].fc_bold.values
            )
        assert np.array_equal(a.wavelet_distortion, b.wavelet_distortion)

    def test_control_config_nullity(self):
        cfg = small_cfg(**CONTROL)
        trial = run_trial(cfg, 0.0, 0)
        for outcome in trial.outcomes.values():
            assert outcome.distortion.per_node.max() <= 1e-10
            assert outcome.distortion.rank_corr == 1.0
            assert outcome.edges.max_abs <= 1e-10
        assert trial.wavelet_distortion.max() <= 1e-10
        assert trial.level_centrality_distortion.max() <= 1e-10

    def test_default_produces_distortion(self):
        cfg = small_cfg()
        trial = run_trial(cfg, 0.15, 0)
        assert trial.outcomes["pearson"].distortion.mean_distortion > 0

    def test_errors_annotated(self):
        cfg = small_cfg(connectome_path="/does/not/exist.csv")
        with pytest.raises(ConfigError, match=r"sigma_h=0.1, replicate=3"):
            run_trial(cfg, 0.1, 3)

    def test_keep_timeseries(self):
        cfg = small_cfg()
        trial = run_trial(cfg, 0.1, 0, keep_timeseries=True)
        assert trial.neuronal is not None and trial.bold is not None
        assert trial.neuronal.n_samples == cfg.sim.n_recorded


class TestSweep:
    def test_row_structure(self):
        cfg = small_cfg()
        result = run_sigma_sweep(cfg)
        assert len(result.rows) == len(cfg.sigma_h_grid) * len(cfg.estimators)
        sigmas = [r.sigma_h for r in result.rows]
        assert sigmas == sorted(sigmas)
        assert all(r.replicates == 2 for r in result.rows)

    def test_deterministic(self):
        cfg = small_cfg()
        a = run_sigma_sweep(cfg)
        b = run_sigma_sweep(cfg)
        assert a.rows == b.rows

    def test_single_point_grid_rejected(self):
        with pytest.raises(ConfigError, match="at least 2"):
            run_sigma_sweep(small_cfg(sigma_h_grid=(0.0,)))


class TestScaleProfile:
    def test_quartiles_cover_nodes(self):
        cfg = small_cfg()
        prof = run_scale_profile(cfg, 0.1)
        assert sorted(set(prof.quartile)) == [1, 2, 3, 4]
        assert prof.wavelet_distortion.shape == (12, 4)
        assert prof.centrality_distortion.shape == (12, 4)
        assert prof.levels == (1, 2, 3, 4)

    def test_control_profile_zero(self):
        cfg = small_cfg(**CONTROL)
        prof = run_scale_profile(cfg, 0.0)
        assert prof.wavelet_distortion.max() <= 1e-10

    def test_needs_three_levels(self):
        with pytest.raises(ConfigError, match="at least 3"):
            run_scale_profile(small_cfg(wavelet_levels=2), 0.1)

    def test_band_mapping_printed(self):
        prof = run_scale_profile(small_cfg(), 0.1)
        assert prof.bands[0] == (0.25, 0.5)
        assert prof.bands[-1][0] == pytest.approx(1 / 2**5)


class TestNonfractal:
    def test_plain_white_noise_unchanged(self):
        rng = np.random.default_rng(0)
        ts = TimeSeriesMatrix(rng.standard_normal((4, 2048)), 1.0,
                              ("a", "b", "c", "d"))
        nf = estimate_nonfractal_fc(ts)
        base = pearson_fc(ts)
        assert np.abs(nf.values - base.values).max() < 0.1

    def test_heterogeneous_filtering_removed(self):
        cfg = small_cfg(sim=SimConfig(dt=0.05, record_every=160,
                                      duration=16584.0, burn_in=200.0))
        trial = run_trial(cfg, 0.15, 0, keep_timeseries=True)
        fc_n = trial.outcomes["pearson"].fc_neuronal
        fc_b = trial.outcomes["pearson"].fc_bold
        nf = estimate_nonfractal_fc(trial.bold)
        off = ~np.eye(fc_n.n, dtype=bool)
        err_bold = np.abs(fc_b.values - fc_n.values)[off].mean()
        err_nf = np.abs(nf.values - fc_n.values)[off].mean()
        assert err_nf < err_bold


class TestEmitOutputs:
    def test_sweep_files(self, tmp_path):
        result = run_sigma_sweep(small_cfg())
        paths = emit_outputs(result, tmp_path / "out")
        names = {p.split("/")[-1] for p in paths}
        assert names == {"sweep.csv", "manifest.json", "sweep.svg"}
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["kind"] == "sweep"
        assert manifest["config"]["replicates"] == 2
        assert len(manifest["seeds"]) == 4
        header = (tmp_path / "out" / "sweep.csv").read_text().splitlines()[0]
        assert header == ("sigma_h,estimator,mean_distortion_mean,"
                          "mean_distortion_sd,rank_corr_mean,rank_corr_sd,"
                          "replicates")

    def test_byte_identical_rerun(self, tmp_path):
        cfg = small_cfg()
        emit_outputs(run_sigma_sweep(cfg), tmp_path / "a")
        emit_outputs(run_sigma_sweep(cfg), tmp_path / "b")
        for name in ("sweep.csv", "manifest.json", "sweep.svg"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()

    def test_scales_files(self, tmp_path):
        result = run_scale_profile(small_cfg(), 0.1)
        paths = emit_outputs(result, tmp_path / "out")
        names = {p.split("/")[-1] for p in paths}
        assert names == {"scales.csv", "manifest.json", "scales.svg"}
        lines = (tmp_path / "out" / "scales.csv").read_text().splitlines()
        assert lines[0] == ("node,label,centrality,quartile,level,band_low,"
                            "band_high,wavelet_distortion,centrality_distortion")
        assert len(lines) == 1 + 12 * 4

    def test_trial_files(self, tmp_path):
        trial = run_trial(small_cfg(), 0.1, 0, keep_timeseries=True)
        paths = emit_outputs(trial, tmp_path / "out")
        names = {p.split("/")[-1] for p in paths}
        assert "fc_pearson_neuronal.csv" in names
        assert "fc_te_bold.csv" in names
        assert "neuronal.csv" in names and "bold.csv" in names
        assert "trial.svg" in names

    def test_unwritable_dir(self, tmp_path):
        # A path through a regular file cannot be created; the error
        # names the offending path. (Permission bits are unreliable for
        # this purpose when tests run as root.)
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        result = run_sigma_sweep(small_cfg())
        with pytest.raises(OSError, match="blocker"):
            emit_outputs(result, blocker / "sub")
