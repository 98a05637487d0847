"""Shared time-series containers, the profile transform, and exponent relations.

All estimators (spectral, DFA, wavelet) funnel their result through the
closed-form relations implemented here:

    D   = 2 - H
    beta = 2H + 1 = 5 - 2D
    rho = 2^(2H-1) - 1
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

# Estimators need a few usable DFA scales (s >= 4), hence the floor.
MIN_ESTIMATION_LENGTH = 64

# Tolerance for treating H as exactly 0.5 when classifying persistence.
HURST_CLASS_TOL = 1e-9


class PersistenceClass(enum.Enum):
    PERSISTENT = "persistent"
    RANDOM_FBM = "random_fbm"
    NON_PERSISTENT = "non_persistent"


def _as_series_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size == 0:
        raise ValueError("empty input")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise ValueError(f"non-finite sample at index {bad[0]}")
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Finite real-valued sequence of frame sizes or synthetic samples."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _as_series_array(self.values))
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Profile:
    """Cumulative sum of mean-centered samples (the integrated series)."""

    values: np.ndarray
    source_mean: float

    def __len__(self) -> int:
        return self.values.size


def series_mean(values) -> float:
    """Arithmetic mean of the series."""
    return float(np.mean(_as_series_array(values)))


def profile(values) -> Profile:
    """Integrate the mean-centered series: Y(i) = sum_{k<=i} (x_k - mean).

    The last profile value is zero up to rounding.
    """
    arr = _as_series_array(values)
    mean = float(arr.mean())
    return Profile(values=np.cumsum(arr - mean), source_mean=mean)


def autocovariance(values, max_lag: int) -> np.ndarray:
    """Biased (1/N) sample autocovariance for lags 0..max_lag.

    The biased estimator keeps the sequence positive semidefinite, which is
    what the generator-fidelity checks rely on.
    """
    arr = _as_series_array(values)
    n = arr.size
    if not 0 <= max_lag < n:
        raise ValueError("lag exceeds series length")
    centered = arr - arr.mean()
    out = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        out[k] = np.dot(centered[: n - k], centered[k:]) / n
    return out


def hurst_to_dimension(hurst: float) -> float:
    """Fractal dimension of the series graph: D = 2 - H."""
    return 2.0 - hurst


def hurst_to_rho(hurst: float) -> float:
    """Correlation coefficient of successive increments: rho = 2^(2H-1) - 1."""
    return float(2.0 ** (2.0 * hurst - 1.0) - 1.0)


def classify_hurst(hurst: float, tol: float = HURST_CLASS_TOL) -> PersistenceClass:
    """Map H to its persistence class; H = 0.5 (within tol) is the fBm boundary."""
    if not np.isfinite(hurst):
        raise ValueError("hurst must be finite")
    if abs(hurst - 0.5) <= tol:
        return PersistenceClass.RANDOM_FBM
    if hurst > 0.5:
        return PersistenceClass.PERSISTENT
    return PersistenceClass.NON_PERSISTENT


@dataclass(frozen=True)
class ExponentSet:
    """The linked exponent quadruple (H, D, beta, rho) plus standard errors.

    Always built from a single exponent so the closed-form relations hold
    exactly; errors are propagated linearly.
    """

    hurst: float
    dimension: float
    beta: float
    rho: float
    hurst_err: float = 0.0
    dimension_err: float = 0.0
    beta_err: float = 0.0
    rho_err: float = 0.0
    persistence: PersistenceClass = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "persistence", classify_hurst(self.hurst))

    @classmethod
    def from_hurst(cls, hurst: float, stderr: float = 0.0) -> "ExponentSet":
        hurst = float(hurst)
        stderr = float(stderr)
        rho_slope = abs(np.log(2.0) * 2.0 ** (2.0 * hurst))  # d(rho)/dH
        return cls(
            hurst=hurst,
            dimension=hurst_to_dimension(hurst),
            beta=2.0 * hurst + 1.0,
            rho=hurst_to_rho(hurst),
            hurst_err=stderr,
            dimension_err=stderr,
            beta_err=2.0 * stderr,
            rho_err=rho_slope * stderr,
        )

    @classmethod
    def from_beta(cls, beta: float, stderr: float = 0.0) -> "ExponentSet":
        return cls.from_hurst((float(beta) - 1.0) / 2.0, float(stderr) / 2.0)

    @classmethod
    def from_dimension(cls, dimension: float, stderr: float = 0.0) -> "ExponentSet":
        return cls.from_hurst(2.0 - float(dimension), float(stderr))
