"""Detrended fluctuation analysis with bidirectional segmentation and
multi-regime (crossover) fitting.

The profile is cut into floor(N/s) windows from each end (2*Ns total), each
window is linearly detrended, and F(s) is the root mean of the per-window
residual variances. The scaling exponent alpha is the log-log slope of F(s).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from sklearn.base import BaseEstimator

from .core import Profile, _as_series_array, profile

MIN_SCALE = 4
ALPHA_CLASS_TOL = 0.02


@dataclass(frozen=True)
class SegmentGrid:
    """Window bounds at one scale: Ns from the start then Ns from the end."""

    scale: int
    n_segments: int  # Ns; total windows = 2*Ns
    bounds: tuple  # ((start, stop), ...) half-open, len 2*Ns


@dataclass(frozen=True)
class FluctuationCurve:
    scales: np.ndarray
    fluctuations: np.ndarray

    def __len__(self) -> int:
        return self.scales.size


@dataclass(frozen=True)
class Regime:
    scale_range: tuple[int, int]
    alpha: float
    stderr: float
    classification: str


@dataclass(frozen=True)
class DfaResult:
    regimes: tuple
    crossover_scales: tuple
    curve: FluctuationCurve = field(repr=False, default=None)


def classify_alpha(alpha: float, tol: float = ALPHA_CLASS_TOL) -> str:
    """Process type implied by the scaling exponent."""
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    if abs(alpha - 0.5) <= tol:
        return "white noise"
    if abs(alpha - 1.0) <= tol:
        return "1/f process"
    if alpha < 0.5:
        return "power-law anti-correlation"
    if alpha < 1.0:
        return "long-range power-law correlation"
    return "fBm process"


def segment_profile(prof: Profile, scale: int) -> SegmentGrid:
    """Bidirectional non-overlapping segmentation at one scale.

    Segmentation itself only needs s >= 2 (a line needs two points); the
    s >= 4 and s <= N/4 limits on fluctuation curves are enforced by
    fluctuation_function.
    """
    n = len(prof)
    if scale < 2:
        raise ValueError("scale below minimum")
    if scale > n // 2:
        raise ValueError("scale too large")
    ns = n // scale
    forward = [((v - 1) * scale, v * scale) for v in range(1, ns + 1)]
    backward = [(n - w * scale, n - (w - 1) * scale) for w in range(1, ns + 1)]
    return SegmentGrid(scale=scale, n_segments=ns, bounds=tuple(forward + backward))


def segment_fluctuation(prof: Profile, grid: SegmentGrid, v: int) -> float:
    """Residual variance F^2(s, v) of window v around its OLS trend line."""
    if not 1 <= v <= 2 * grid.n_segments:
        raise ValueError("segment index out of range")
    start, stop = grid.bounds[v - 1]
    y = prof.values[start:stop]
    i = np.arange(y.size, dtype=float)
    slope, intercept = np.polyfit(i, y, 1)
    resid = y - (slope * i + intercept)
    return float(np.mean(resid**2))


def _detrended_variances(y: np.ndarray, scale: int) -> np.ndarray:
    # Residual variance per window for all windows of one direction at once.
    ns = y.size // scale
    segs = y[: ns * scale].reshape(ns, scale)
    i = np.arange(scale, dtype=float)
    i_c = i - i.mean()
    denom = np.dot(i_c, i_c)
    means = segs.mean(axis=1, keepdims=True)
    slopes = (segs @ i_c)[:, None] / denom
    resid = segs - means - slopes * i_c
    return np.mean(resid**2, axis=1)


def fluctuation_function(prof: Profile, scales) -> FluctuationCurve:
    """F(s) = sqrt(mean over the 2*Ns windows of the residual variances)."""
    scales = np.asarray(list(scales), dtype=int)
    if scales.size == 0:
        raise ValueError("empty scale list")
    n = len(prof)
    if scales.min() < MIN_SCALE:
        raise ValueError("scale below minimum")
    if scales.max() > n // 4:
        raise ValueError("scale too large")
    y = prof.values
    flucts = np.empty(scales.size)
    for j, s in enumerate(scales):
        fwd = _detrended_variances(y, s)
        bwd = _detrended_variances(y[::-1], s)
        flucts[j] = np.sqrt(np.mean(np.concatenate([fwd, bwd])))
    return FluctuationCurve(scales=scales, fluctuations=flucts)


def default_scales(n: int, num: int = 20) -> np.ndarray:
    """~num log-spaced integer scales from 4 to N/4."""
    if n < 4 * MIN_SCALE:
        raise ValueError("series too short")
    grid = np.geomspace(MIN_SCALE, n // 4, num)
    return np.unique(np.round(grid).astype(int))


def fit_alpha(
    curve: FluctuationCurve, scale_range: tuple[float, float] | None = None
) -> tuple[float, float]:
    """OLS slope of log F(s) vs log s over the scale range."""
    if scale_range is None:
        scale_range = (curve.scales.min(), curve.scales.max())
    lo, hi = scale_range
    mask = (curve.scales >= lo) & (curve.scales <= hi) & (curve.fluctuations > 0)
    if mask.sum() < 5:
        raise ValueError("scale range too narrow")
    fit = stats.linregress(
        np.log(curve.scales[mask].astype(float)), np.log(curve.fluctuations[mask])
    )
    return float(fit.slope), float(fit.stderr)


def _piecewise_score(log_s, log_f, breaks):
    # Independent OLS per regime; returns (ssr, regimes as (i0, i1, slope, stderr)).
    idx = [0] + list(breaks) + [log_s.size]
    ssr = 0.0
    regimes = []
    for i0, i1 in zip(idx[:-1], idx[1:]):
        fit = stats.linregress(log_s[i0:i1], log_f[i0:i1])
        resid = log_f[i0:i1] - (fit.slope * log_s[i0:i1] + fit.intercept)
        ssr += float(np.dot(resid, resid))
        regimes.append((i0, i1, float(fit.slope), float(fit.stderr)))
    return ssr, regimes


def detect_crossovers(curve: FluctuationCurve, max_regimes: int = 3) -> DfaResult:
    """Piecewise power-law fit with conservative regime-count selection.

    Breakpoints are searched on the scale grid; each regime keeps at least 5
    points. An extra regime is accepted only if it halves the residual sum
    of squares of the simpler fit.
    """
    if not 1 <= max_regimes <= 3:
        raise ValueError("max_regimes must be 1..3")
    keep = curve.fluctuations > 0
    log_s = np.log(curve.scales[keep].astype(float))
    log_f = np.log(curve.fluctuations[keep])
    n = log_s.size
    min_pts = 5

    allowed = 1
    if n >= 12 and max_regimes >= 2:
        allowed = 2
    if n >= 18 and max_regimes >= 3:
        allowed = 3
    if allowed < max_regimes:
        warnings.warn("too few points for requested regimes; reducing", stacklevel=2)

    best_by_count = {}
    for r in range(1, allowed + 1):
        if r == 1:
            candidates = [()]
        elif r == 2:
            candidates = [(b,) for b in range(min_pts, n - min_pts + 1)]
        else:
            candidates = [
                (b1, b2)
                for b1 in range(min_pts, n - 2 * min_pts + 1)
                for b2 in range(b1 + min_pts, n - min_pts + 1)
            ]
        for breaks in candidates:
            ssr, regimes = _piecewise_score(log_s, log_f, breaks)
            if r not in best_by_count or ssr < best_by_count[r][0]:
                best_by_count[r] = (ssr, breaks, regimes)

    # A regime split is kept only when it at least halves the residual of the
    # next-simpler fit, and never once that fit is already essentially exact.
    # The breakpoint search maximizes over many candidates, so a plain
    # per-parameter variance penalty would overfit small noise wiggles.
    tss = float(np.dot(log_f - log_f.mean(), log_f - log_f.mean()))
    floor = 1e-9 * max(tss, 1.0)
    chosen = 1
    for r in range(2, allowed + 1):
        prev_ssr = best_by_count[r - 1][0]
        if prev_ssr > floor and best_by_count[r][0] < 0.5 * prev_ssr:
            chosen = r
        else:
            break
    _, breaks, regimes = best_by_count[chosen]
    scales = curve.scales[keep]
    out_regimes = tuple(
        Regime(
            scale_range=(int(scales[i0]), int(scales[i1 - 1])),
            alpha=slope,
            stderr=err,
            classification=classify_alpha(slope),
        )
        for i0, i1, slope, err in regimes
    )
    crossovers = tuple(int(scales[b]) for b in breaks)
    return DfaResult(regimes=out_regimes, crossover_scales=crossovers, curve=curve)


def dfa_estimate(values, scales=None, fit_range=None) -> tuple[float, float]:
    """Single-regime DFA exponent of a raw series (profile taken internally)."""
    arr = _as_series_array(values)
    if scales is None:
        scales = default_scales(arr.size)
    curve = fluctuation_function(profile(arr), scales)
    return fit_alpha(curve, fit_range)


class DfaHurstEstimator(BaseEstimator):
    """DFA scaling-exponent estimator with crossover detection.

    Parameters
    ----------
    scales : explicit integer scale grid, or None for ~20 log-spaced scales
        in [4, N/4].
    fit_range : (s_min, s_max) for the single-exponent fit, or None for all.
    max_regimes : regime cap for crossover detection (1..3).

    Attributes after fit: curve_, alpha_, stderr_, result_, classification_.
    """

    def __init__(self, scales=None, fit_range=None, max_regimes=3):
        self.scales = scales
        self.fit_range = fit_range
        self.max_regimes = max_regimes

    def fit(self, X, y=None):
        arr = _as_series_array(X)
        scales = self.scales if self.scales is not None else default_scales(arr.size)
        self.curve_ = fluctuation_function(profile(arr), scales)
        self.alpha_, self.stderr_ = fit_alpha(self.curve_, self.fit_range)
        self.result_ = detect_crossovers(self.curve_, self.max_regimes)
        self.classification_ = classify_alpha(self.alpha_)
        return self

    def predict(self, X=None):
        return self.alpha_
