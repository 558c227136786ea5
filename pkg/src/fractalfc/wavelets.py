"""Maximal-overlap discrete wavelet transform (MODWT) with periodic boundaries.

The transform is shift-invariant and energy-preserving: the squared
coefficients over all levels plus the final scaling coefficients sum to
the input energy exactly (up to floating-point rounding). Level j covers
the nominal frequency band [1/2^(j+1), 1/2^j] cycles per sample, so large
levels correspond to low frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_SQRT3 = math.sqrt(3.0)

# Orthonormal scaling (lowpass) filters; the wavelet filter follows by QMF.
_SCALING_FILTERS = {
    "haar": np.array([1.0, 1.0]) / math.sqrt(2.0),
    "d4": np.array([1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3])
    / (4.0 * math.sqrt(2.0)),
}


def modwt_filters(name: str) -> tuple[np.ndarray, np.ndarray]:
    """Return the MODWT (rescaled) wavelet and scaling filters.

    Parameters
    ----------
    name : str
        Filter family, "d4" (default elsewhere) or "haar".

    Returns
    -------
    (wavelet, scaling) : tuple of ndarray
        Unit-DWT filters divided by sqrt(2), as the MODWT requires.
    """
    try:
        g = _SCALING_FILTERS[name]
    except KeyError:
        raise ConfigError(
            f"unknown wavelet filter {name!r}; available: "
            + ", ".join(sorted(_SCALING_FILTERS))
        ) from None
    h = ((-1.0) ** np.arange(g.size)) * g[::-1]
    return h / math.sqrt(2.0), g / math.sqrt(2.0)


def max_modwt_level(n_samples: int) -> int:
    """Largest decomposition level supported for a series of given length."""
    if n_samples < 8:
        return 0
    return int(math.floor(math.log2(n_samples))) - 2


@dataclass(frozen=True)
class WaveletDecomposition:
    """MODWT of a single series.

    Attributes
    ----------
    wavelet_coeffs : ndarray, shape (levels, n)
        Wavelet coefficients, one row per level (level 1 first).
    scaling_coeffs : ndarray, shape (n,)
        Scaling coefficients at the final level.
    filter : str
        Filter family used.
    boundary : str
        Boundary rule; always "periodic".
    """

    wavelet_coeffs: np.ndarray
    scaling_coeffs: np.ndarray
    filter: str
    boundary: str = "periodic"

    @property
    def levels(self) -> int:
        return self.wavelet_coeffs.shape[0]

    def energy(self) -> float:
        """Total energy across wavelet and scaling coefficients."""
        return float(
            np.sum(self.wavelet_coeffs**2) + np.sum(self.scaling_coeffs**2)
        )


def _upsampled_spectrum(filt: np.ndarray, stride: int, n: int) -> np.ndarray:
    """DFT of the filter with ``stride - 1`` zeros inserted between taps."""
    embedded = np.zeros(n)
    idx = (np.arange(filt.size) * stride) % n
    np.add.at(embedded, idx, filt)
    return np.fft.fft(embedded)


def modwt_coefficients(
    data: np.ndarray, levels: int, filter: str = "d4"
) -> tuple[np.ndarray, np.ndarray]:
    """MODWT pyramid for one or many series at once.

    Parameters
    ----------
    data : ndarray, shape (..., n)
        Input series along the last axis.
    levels : int
        Number of decomposition levels, at most ``max_modwt_level(n)``.
    filter : str
        Filter family.

    Returns
    -------
    wavelet : ndarray, shape (levels, ..., n)
    scaling : ndarray, shape (..., n)
    """
    data = np.asarray(data, dtype=float)
    n = data.shape[-1]
    if levels < 1:
        raise ConfigError("levels must be >= 1")
    allowed = max_modwt_level(n)
    if levels > allowed:
        raise ConfigError(
            f"too many wavelet levels for {n} samples: "
            f"requested {levels}, maximum allowed is {allowed}"
        )
    h, g = modwt_filters(filter)
    v_hat = np.fft.fft(data, axis=-1)
    wavelet = np.empty((levels,) + data.shape)
    for j in range(1, levels + 1):
        stride = 2 ** (j - 1)
        h_hat = _upsampled_spectrum(h, stride, n)
        g_hat = _upsampled_spectrum(g, stride, n)
        wavelet[j - 1] = np.fft.ifft(v_hat * h_hat, axis=-1).real
        v_hat = v_hat * g_hat
    scaling = np.fft.ifft(v_hat, axis=-1).real
    return wavelet, scaling


def modwt(x: np.ndarray, levels: int, filter: str = "d4") -> WaveletDecomposition:
    """Maximal-overlap DWT of a 1-D series with periodic boundary."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ConfigError("modwt expects a one-dimensional series")
    wavelet, scaling = modwt_coefficients(x, levels, filter)
    return WaveletDecomposition(wavelet, scaling, filter)


def wavelet_variances(x: np.ndarray, levels: range, filter: str = "d4") -> np.ndarray:
    """Per-level wavelet variance, rescaled to the energy-per-scale form.

    The raw MODWT coefficient variance at level j carries a factor 2^-j
    from the filter rescaling; multiplying it back gives the
    DWT-equivalent variance, which is flat across levels for white noise
    and scales as 2^(j(2H-1)) for fGn with Hurst exponent H.

    ``levels`` is a range of level indices; the decomposition runs to the
    deepest requested level and all coefficients are retained (periodic
    boundary, no exclusion).
    """
    wanted = list(levels)
    if not wanted:
        raise ConfigError("empty level range")
    coeffs, _ = modwt_coefficients(np.asarray(x, dtype=float), max(wanted), filter)
    return np.array([2.0**j * np.mean(coeffs[j - 1] ** 2) for j in wanted])


def level_band(level: int) -> tuple[float, float]:
    """Nominal frequency band of a MODWT level, in cycles per sample."""
    return (1.0 / 2 ** (level + 1), 1.0 / 2**level)
