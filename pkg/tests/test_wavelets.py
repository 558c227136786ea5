"""MODWT decomposition properties."""

import numpy as np
import pytest

from fractalfc import ConfigError, generate_fgn, max_modwt_level, modwt
from fractalfc.wavelets import level_band, modwt_filters, wavelet_variances


class TestFilters:
    @pytest.mark.parametrize("name", ["haar", "d4"])
    def test_unit_dwt_norm_halved(self, name):
        h, g = modwt_filters(name)
        assert np.sum(h**2) == pytest.approx(0.5, abs=1e-12)
        assert np.sum(g**2) == pytest.approx(0.5, abs=1e-12)

    def test_wavelet_filter_sums_to_zero(self):
        h, _ = modwt_filters("d4")
        assert np.sum(h) == pytest.approx(0.0, abs=1e-12)

    def test_unknown_filter(self):
        with pytest.raises(ConfigError, match="unknown wavelet filter"):
            modwt_filters("sym8")


class TestModwt:
    @pytest.mark.parametrize("filter", ["haar", "d4"])
    @pytest.mark.parametrize("n", [256, 1000, 4096])
    def test_energy_conservation(self, filter, n):
        x = np.random.default_rng(n).standard_normal(n)
        dec = modwt(x, 5, filter)
        assert dec.energy() == pytest.approx(np.sum(x**2), rel=1e-8)

    def test_levels_capped(self):
        x = np.random.default_rng(0).standard_normal(256)
        allowed = max_modwt_level(256)
        with pytest.raises(ConfigError, match=f"maximum allowed is {allowed}"):
            modwt(x, allowed + 1)

    def test_shapes(self):
        x = np.random.default_rng(1).standard_normal(512)
        dec = modwt(x, 4)
        assert dec.wavelet_coeffs.shape == (4, 512)
        assert dec.scaling_coeffs.shape == (512,)
        assert dec.boundary == "periodic"

    def test_white_noise_flat_variance(self):
        profiles = []
        for s in range(20):
            x = np.random.default_rng(s).standard_normal(4096)
            profiles.append(wavelet_variances(x, range(1, 6)))
        mean = np.mean(profiles, axis=0)
        se = np.std(profiles, axis=0, ddof=1) / np.sqrt(20)
        # Flat profile: every level within 3 SE of the overall mean.
        assert np.all(np.abs(mean - mean.mean()) <= 3 * np.maximum(se, 1e-12) + 0.02)

    def test_fgn_variance_slope(self):
        slopes = []
        for s in range(10):
            x = generate_fgn(0.8, 4096, 1.0, seed=s)
            wv = wavelet_variances(x.values, range(1, 7))
            slopes.append(np.polyfit(np.arange(1, 7), np.log2(wv), 1)[0])
        assert np.mean(slopes) == pytest.approx(0.6, abs=0.15)


def test_level_band_convention():
    assert level_band(1) == (0.25, 0.5)
    assert level_band(3) == (0.0625, 0.125)
