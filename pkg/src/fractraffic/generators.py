"""Seeded exact generators for fractional Gaussian noise and fractional
Brownian motion.

Synthesis targets the model autocovariance

    gamma(k) = 0.5 * (|k+1|^2H - 2|k|^2H + |k-1|^2H)

exactly, via circulant embedding (Davies-Harte). If the embedding spectrum
ever goes negative the generator falls back to the Hosking recursion, which
is also exact but O(N^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries

_KINDS = ("fgn", "fbm", "white")


@dataclass(frozen=True)
class GeneratorSpec:
    hurst: float
    length: int
    seed: int
    kind: str = "fgn"

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}, expected one of {_KINDS}")
        if self.kind != "white" and not 0.0 < self.hurst < 1.0:
            raise ValueError("Hurst out of range")
        if self.length < 1:
            raise ValueError("length must be positive")


def fgn_autocovariance(lags, hurst: float) -> np.ndarray:
    """Model autocovariance of unit-variance fGn at the given lags."""
    k = np.abs(np.asarray(lags, dtype=float))
    h2 = 2.0 * hurst
    return 0.5 * ((k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)


def _davies_harte(hurst: float, n: int, rng: np.random.Generator) -> np.ndarray | None:
    # Embed gamma(0..n) in a circulant of size 2n and take the spectral root.
    gamma = fgn_autocovariance(np.arange(n + 1), hurst)
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    eig = np.fft.rfft(row).real
    if eig.min() < -1e-10 * eig.max():
        return None
    eig = np.clip(eig, 0.0, None)

    m = 2 * n
    # Hermitian-symmetric Gaussian spectrum with E|Z_j|^2 = 1.
    z = np.empty(n + 1, dtype=complex)
    z[0] = rng.standard_normal()
    z[n] = rng.standard_normal()
    re = rng.standard_normal(n - 1)
    im = rng.standard_normal(n - 1)
    z[1:n] = (re + 1j * im) / np.sqrt(2.0)
    coeffs = np.sqrt(eig / m) * z
    return np.fft.irfft(coeffs * m, n=m)[:n]


def _hosking(hurst: float, n: int, rng: np.random.Generator) -> np.ndarray:
    # Exact sequential synthesis from the conditional distributions.
    gamma = fgn_autocovariance(np.arange(n), hurst)
    out = np.empty(n)
    out[0] = rng.standard_normal()
    phi = np.zeros(n)
    v = 1.0
    for i in range(1, n):
        phi_prev = phi[: i - 1].copy()
        kappa = (gamma[i] - np.dot(phi_prev, gamma[i - 1 : 0 : -1])) / v
        phi[i - 1] = kappa
        phi[: i - 1] = phi_prev - kappa * phi_prev[::-1]
        v *= 1.0 - kappa * kappa
        mu = np.dot(phi[:i], out[i - 1 :: -1])
        out[i] = mu + np.sqrt(v) * rng.standard_normal()
    return out


def generate_fgn(spec: GeneratorSpec) -> TimeSeries:
    """Draw a zero-mean, unit-variance fGn sample with exact model covariance."""
    if not 0.0 < spec.hurst < 1.0:
        raise ValueError("Hurst out of range")
    rng = np.random.default_rng(spec.seed)
    sample = _davies_harte(spec.hurst, spec.length, rng)
    if sample is None:
        sample = _hosking(spec.hurst, spec.length, rng)
    return TimeSeries(sample, label=f"fgn(H={spec.hurst:g},N={spec.length},seed={spec.seed})")


def generate_fbm(spec: GeneratorSpec) -> TimeSeries:
    """Cumulative sum of an fGn draw; sample t has ensemble variance ~ t^2H."""
    incr = generate_fgn(spec)
    return TimeSeries(
        np.cumsum(incr.values),
        label=f"fbm(H={spec.hurst:g},N={spec.length},seed={spec.seed})",
    )


def generate_white(spec: GeneratorSpec) -> TimeSeries:
    """Seeded i.i.d. standard Gaussian baseline."""
    rng = np.random.default_rng(spec.seed)
    return TimeSeries(
        rng.standard_normal(spec.length),
        label=f"white(N={spec.length},seed={spec.seed})",
    )


def generate(spec: GeneratorSpec) -> TimeSeries:
    """Dispatch on spec.kind."""
    if spec.kind == "fgn":
        return generate_fgn(spec)
    if spec.kind == "fbm":
        return generate_fbm(spec)
    return generate_white(spec)
