"""Fractal and long-range-dependence analysis of network traffic time series.

Three independent Hurst-exponent estimators (power-spectral, detrended
fluctuation, and Morlet-wavelet time-scale analysis), exact seeded
fGn/fBm generators to validate them, and a CLI for trace analysis.
"""

from .core import (
    ExponentSet,
    PersistenceClass,
    Profile,
    TimeSeries,
    autocovariance,
    classify_hurst,
    hurst_to_dimension,
    hurst_to_rho,
    profile,
    series_mean,
)
from .dfa import DfaHurstEstimator, classify_alpha, dfa_estimate
from .generators import GeneratorSpec, generate, generate_fbm, generate_fgn, generate_white
from .report import AnalysisConfig, HurstReport, TraceFile, analyze, emit_report, load_trace
from .spectral import SpectralHurstEstimator, periodogram, psa_estimate
from .wavelet import WaveletHurstEstimator, WaveletSpec, morlet_cwt, tsa_report

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "DfaHurstEstimator",
    "ExponentSet",
    "GeneratorSpec",
    "HurstReport",
    "PersistenceClass",
    "Profile",
    "SpectralHurstEstimator",
    "TimeSeries",
    "TraceFile",
    "WaveletHurstEstimator",
    "WaveletSpec",
    "analyze",
    "autocovariance",
    "classify_alpha",
    "classify_hurst",
    "dfa_estimate",
    "emit_report",
    "generate",
    "generate_fbm",
    "generate_fgn",
    "generate_white",
    "hurst_to_dimension",
    "hurst_to_rho",
    "load_trace",
    "morlet_cwt",
    "periodogram",
    "profile",
    "psa_estimate",
    "series_mean",
    "tsa_report",
]
