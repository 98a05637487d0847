"""Power-spectral analysis: periodogram and log-log power-law fit.

The spectral exponent beta (S ~ omega^-beta) is fitted by unweighted OLS on
log-log coordinates and converted to H, D, rho via the shared relations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from sklearn.base import BaseEstimator

from .core import MIN_ESTIMATION_LENGTH, ExponentSet, _as_series_array

MIN_FIT_BINS = 8


@dataclass(frozen=True)
class Spectrum:
    """One-sided periodogram: frequencies m/N (cycles/sample), m = 1..N//2."""

    frequencies: np.ndarray
    powers: np.ndarray
    n: int

    def __len__(self) -> int:
        return self.frequencies.size


@dataclass(frozen=True)
class SpectralFit:
    beta: float
    stderr: float
    fit_band: tuple[float, float]
    r_squared: float
    n_bins: int
    skipped_zero_bins: int = 0


def default_band(n: int) -> tuple[float, float]:
    """Fit band excluding the poorly-estimated lowest bins and HF rolloff."""
    return (4.0 / n, 0.125)


def periodogram(values) -> Spectrum:
    """Plain periodogram S_m = |X_m|^2 / N of the mean-centered series.

    The DC bin is excluded; summed over all DFT bins the powers satisfy
    Parseval's identity against the centered time-domain energy.
    """
    arr = _as_series_array(values)
    n = arr.size
    if n < MIN_ESTIMATION_LENGTH:
        raise ValueError("series too short")
    coeffs = np.fft.rfft(arr - arr.mean())
    powers = (coeffs.real**2 + coeffs.imag**2) / n
    m = np.arange(1, n // 2 + 1)
    return Spectrum(frequencies=m / n, powers=powers[1 : n // 2 + 1], n=n)


def fit_beta(spectrum: Spectrum, band: tuple[float, float] | None = None) -> SpectralFit:
    """OLS slope of log S vs log omega over the band; beta = -slope.

    Bins with zero power inside the band are skipped and counted.
    """
    if band is None:
        band = default_band(spectrum.n)
    lo, hi = band
    in_band = (spectrum.frequencies >= lo) & (spectrum.frequencies <= hi)
    powers = spectrum.powers[in_band]
    freqs = spectrum.frequencies[in_band]
    positive = powers > 0.0
    skipped = int(in_band.sum() - positive.sum())
    if positive.sum() < MIN_FIT_BINS:
        raise ValueError("insufficient spectral support")
    fit = stats.linregress(np.log(freqs[positive]), np.log(powers[positive]))
    return SpectralFit(
        beta=-float(fit.slope),
        stderr=float(fit.stderr),
        fit_band=(float(lo), float(hi)),
        r_squared=float(fit.rvalue**2),
        n_bins=int(positive.sum()),
        skipped_zero_bins=skipped,
    )


def bridge_detrend(values) -> np.ndarray:
    """Mean-center, then subtract the line through the first and last samples.

    Endpoint matching stops Fejer-kernel leakage from steep (beta > 2)
    spectra, which otherwise saturates the fitted slope near 2.
    """
    arr = _as_series_array(values)
    y = arr - arr.mean()
    t = np.arange(y.size) / (y.size - 1)
    return y - (y[0] + (y[-1] - y[0]) * t)


def psa_estimate(
    values, band: tuple[float, float] | None = None, detrend: bool = True
) -> ExponentSet:
    """Full PSA pipeline: detrend, periodogram, beta fit, exponent completion."""
    arr = bridge_detrend(values) if detrend else values
    fit = fit_beta(periodogram(arr), band)
    return ExponentSet.from_beta(fit.beta, fit.stderr)


class SpectralHurstEstimator(BaseEstimator):
    """Hurst estimator from the periodogram's log-log slope.

    Parameters
    ----------
    band : (low, high) frequency interval in cycles/sample, or None for the
        default [4/N, 1/8].
    detrend : apply the endpoint-matching detrend before the transform.

    Attributes after fit: spectrum_, fit_, exponents_, hurst_.
    """

    def __init__(self, band=None, detrend=True):
        self.band = band
        self.detrend = detrend

    def fit(self, X, y=None):
        self.spectrum_ = periodogram(bridge_detrend(X) if self.detrend else X)
        self.fit_ = fit_beta(self.spectrum_, self.band)
        self.exponents_ = ExponentSet.from_beta(self.fit_.beta, self.fit_.stderr)
        self.hurst_ = self.exponents_.hurst
        return self

    def predict(self, X=None):
        return self.hurst_
