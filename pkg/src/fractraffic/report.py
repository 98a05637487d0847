"""Trace ingestion, unified tri-method analysis, and report emission.

`analyze` runs the spectral, DFA, and wavelet estimators on one series and
assembles a single report; a method that fails contributes an error marker
instead of sinking the whole report. Spectral and wavelet analysis operate
on the integrated series (the profile), DFA integrates internally, so all
three estimate the Hurst exponent of the same increment process.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import dfa as dfa_mod
from . import spectral, wavelet
from .core import TimeSeries, _as_series_array, profile
from .dfa import DfaResult, FluctuationCurve, classify_alpha, detect_crossovers, fit_alpha
from .spectral import Spectrum, fit_beta
from .wavelet import LocalHurstTrack, WaveletSpec

MIN_ANALYZE_LENGTH = 256
MAX_FRAME_SIZE = 2**20

_FMT = ".6g"  # fixed float formatting keeps emitted reports byte-stable


def _f(value) -> float:
    return float(format(float(value), _FMT))


@dataclass(frozen=True)
class TraceFile:
    path: str
    format: str = "sizes"  # "sizes" or "timed"
    label: str = ""

    def __post_init__(self):
        if self.format not in ("sizes", "timed"):
            raise ValueError(f"unknown trace format {self.format!r}")


def _parse_size(token: str, lineno: int) -> float:
    token = token.strip()
    if not token:
        raise ValueError(f"malformed line {lineno}")
    if token.lstrip("+-").isdigit():
        # Integer tokens are frame sizes and must be plausible as such.
        size = int(token)
        if not 0 < size <= MAX_FRAME_SIZE:
            raise ValueError(f"nonpositive or oversized frame at line {lineno}")
        return float(size)
    try:
        value = float(token)
    except ValueError:
        raise ValueError(f"malformed line {lineno}") from None
    if not math.isfinite(value):
        raise ValueError(f"malformed line {lineno}")
    return value


def load_trace(trace: TraceFile, stream=None) -> TimeSeries:
    """Parse a trace file (or open stream) into a TimeSeries.

    `sizes`: one value per line. `timed`: timestamp,size per line; the
    timestamps must be nondecreasing and only the sizes are kept.
    """
    if stream is None:
        handle = open(trace.path, "r", encoding="utf-8")
    else:
        handle = stream
    values = []
    last_ts = None
    try:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            if trace.format == "timed":
                parts = line.split(",")
                if len(parts) != 2:
                    raise ValueError(f"malformed line {lineno}")
                try:
                    ts = float(parts[0])
                except ValueError:
                    raise ValueError(f"malformed line {lineno}") from None
                if last_ts is not None and ts < last_ts:
                    raise ValueError(f"timestamps decrease at line {lineno}")
                last_ts = ts
                values.append(_parse_size(parts[1], lineno))
            else:
                values.append(_parse_size(line, lineno))
    finally:
        if stream is None:
            handle.close()
    if not values:
        raise ValueError("empty trace file")
    return TimeSeries(np.array(values), label=trace.label)


@dataclass
class AnalysisConfig:
    psa_band: tuple[float, float] | None = None
    dfa_scales: list | None = None
    dfa_max_regimes: int = 3
    omega0: float = 6.0
    tsa_scales: list | None = None
    seed: int | None = None  # echoed only; analysis itself is deterministic

    def echo(self) -> dict:
        return {
            "psa_band": list(self.psa_band) if self.psa_band else "default",
            "dfa_scales": list(map(int, self.dfa_scales)) if self.dfa_scales else "default",
            "dfa_max_regimes": self.dfa_max_regimes,
            "omega0": self.omega0,
            "tsa_scales": [_f(a) for a in self.tsa_scales] if self.tsa_scales else "default",
            "seed": self.seed,
        }


@dataclass
class HurstReport:
    label: str
    psa: dict
    dfa: dict
    tsa: dict
    verdict: bool
    config: dict
    # analysis intermediates for plot-data emission (not serialized)
    spectrum: Spectrum | None = field(default=None, repr=False)
    curve: FluctuationCurve | None = field(default=None, repr=False)
    track: LocalHurstTrack | None = field(default=None, repr=False)


def _psa_block(prof_values, config: AnalysisConfig):
    spectrum = spectral.periodogram(spectral.bridge_detrend(prof_values))
    fit = fit_beta(spectrum, config.psa_band)
    exps = spectral.ExponentSet.from_beta(fit.beta, fit.stderr)
    # D, beta, rho are derived from the already-rounded H so the closed-form
    # relations hold exactly in the emitted report.
    h = _f(exps.hurst)
    block = {
        "H": h,
        "H_err": _f(exps.hurst_err),
        "D": 2.0 - h,
        "D_err": _f(exps.dimension_err),
        "beta": 2.0 * h + 1.0,
        "beta_err": _f(exps.beta_err),
        "rho": 2.0 ** (2.0 * h - 1.0) - 1.0,
        "rho_err": _f(exps.rho_err),
        "r_squared": _f(fit.r_squared),
        "fit_band": [_f(fit.fit_band[0]), _f(fit.fit_band[1])],
        "persistence": exps.persistence.value,
    }
    return block, spectrum


def _dfa_block(values, config: AnalysisConfig):
    arr = _as_series_array(values)
    scales = config.dfa_scales if config.dfa_scales is not None else dfa_mod.default_scales(arr.size)
    curve = dfa_mod.fluctuation_function(profile(arr), scales)
    alpha, stderr = fit_alpha(curve)
    result = detect_crossovers(curve, config.dfa_max_regimes)
    block = {
        "alpha": _f(alpha),
        "alpha_err": _f(stderr),
        "classification": classify_alpha(alpha),
        "regimes": [
            {
                "scale_min": r.scale_range[0],
                "scale_max": r.scale_range[1],
                "alpha": _f(r.alpha),
                "alpha_err": _f(r.stderr),
                "classification": r.classification,
            }
            for r in result.regimes
        ],
        "crossover_scales": list(result.crossover_scales),
    }
    return block, curve, result


def _tsa_block(prof_values, config: AnalysisConfig):
    scales = config.tsa_scales if config.tsa_scales is not None else wavelet.default_scales()
    spec = WaveletSpec(omega0=config.omega0, scales=np.asarray(scales, dtype=float))
    scalogram = wavelet.morlet_cwt(prof_values, spec)
    track = wavelet.local_hurst_track(scalogram)
    h = _f(track.global_hurst)
    block = {
        "H": h,
        "H_min": _f(track.minimum),
        "H_max": _f(track.maximum),
        "D": 2.0 - h,
        "n_local": len(track),
        "n_undefined": track.n_undefined,
    }
    return block, track


def analyze(values, label: str = "", config: AnalysisConfig | None = None) -> HurstReport:
    """Run all three estimators and assemble the unified report."""
    arr = _as_series_array(values)
    if arr.size < MIN_ANALYZE_LENGTH:
        raise ValueError("series too short")
    if config is None:
        config = AnalysisConfig()
    prof = profile(arr).values

    spectrum = curve = track = None
    dfa_result: DfaResult | None = None
    try:
        psa, spectrum = _psa_block(prof, config)
    except Exception as exc:
        psa = {"error": str(exc)}
    try:
        dfa, curve, dfa_result = _dfa_block(arr, config)
    except Exception as exc:
        dfa = {"error": str(exc)}
    try:
        tsa, track = _tsa_block(prof, config)
    except Exception as exc:
        tsa = {"error": str(exc)}

    # LRD verdict: spectral H significantly above 0.5 (two stderr margin, so
    # white noise straddling 0.5 stays negative) and a DFA regime in the
    # long-range band, also beyond its own noise.
    verdict = False
    if "error" not in psa and dfa_result is not None:
        lrd_psa = psa["H"] - 2.0 * psa["H_err"] > 0.5 and psa["H"] < 1.0
        lrd_dfa = any(
            r.alpha - 2.0 * r.stderr > 0.5 and r.alpha < 1.5 for r in dfa_result.regimes
        )
        verdict = lrd_psa and lrd_dfa

    return HurstReport(
        label=label,
        psa=psa,
        dfa=dfa,
        tsa=tsa,
        verdict=verdict,
        config=config.echo(),
        spectrum=spectrum,
        curve=curve,
        track=track,
    )


def report_to_dict(report: HurstReport) -> dict:
    return {
        "label": report.label,
        "psa": report.psa,
        "dfa": report.dfa,
        "tsa": report.tsa,
        "verdict": "fractal with LRD" if report.verdict else "no LRD evidence",
        "config": report.config,
    }


CSV_HEADER = (
    "label,method,H,H_err,D,beta,rho,"
    "alpha1,alpha1_err,alpha2,alpha2_err,alpha3,alpha3_err,"
    "crossovers,H_min,H_max,classification,verdict"
)


def _csv_row(cells) -> str:
    return ",".join("" if c is None else format(c, _FMT) if isinstance(c, float) else str(c) for c in cells)


def emit_report(report: HurstReport, format: str = "json") -> bytes:
    """Serialize the report; field order and float formatting are fixed."""
    if format == "json":
        return (json.dumps(report_to_dict(report), indent=2) + "\n").encode()
    verdict = "fractal with LRD" if report.verdict else "no LRD evidence"
    if format == "csv":
        rows = [CSV_HEADER]
        p, d, t = report.psa, report.dfa, report.tsa
        if "error" not in p:
            rows.append(_csv_row([report.label, "PSA", p["H"], p["H_err"], p["D"], p["beta"],
                                  p["rho"], None, None, None, None, None, None, None, None,
                                  None, p["persistence"], verdict]))
        else:
            rows.append(_csv_row([report.label, "PSA"] + [None] * 14 + ["error: " + p["error"], verdict]))
        if "error" not in d:
            alphas = []
            for i in range(3):
                if i < len(d["regimes"]):
                    alphas += [d["regimes"][i]["alpha"], d["regimes"][i]["alpha_err"]]
                else:
                    alphas += [None, None]
            rows.append(_csv_row([report.label, "DFA", None, None, None, None, None] + alphas
                                 + [";".join(map(str, d["crossover_scales"])), None, None,
                                    d["classification"], verdict]))
        else:
            rows.append(_csv_row([report.label, "DFA"] + [None] * 14 + ["error: " + d["error"], verdict]))
        if "error" not in t:
            rows.append(_csv_row([report.label, "TSA", t["H"], None, t["D"], None, None,
                                  None, None, None, None, None, None, None,
                                  t["H_min"], t["H_max"], None, verdict]))
        else:
            rows.append(_csv_row([report.label, "TSA"] + [None] * 14 + ["error: " + t["error"], verdict]))
        return ("\n".join(rows) + "\n").encode()
    if format == "table":
        return _text_table(report).encode()
    raise ValueError(f"unknown report format {format!r}")


def _text_table(report: HurstReport) -> str:
    out = io.StringIO()
    title = f"Fractal analysis report: {report.label or '(unlabeled)'}"
    out.write(title + "\n" + "=" * len(title) + "\n\n")
    p = report.psa
    out.write("PSA (power-spectral analysis)\n")
    if "error" in p:
        out.write(f"  error: {p['error']}\n")
    else:
        out.write(f"  H    {p['H']:.2f} +/- {p['H_err']:.2f}\n")
        out.write(f"  D    {p['D']:.2f} +/- {p['D_err']:.2f}\n")
        out.write(f"  beta {p['beta']:.2f} +/- {p['beta_err']:.2f}\n")
        out.write(f"  rho  {p['rho']:.2f} +/- {p['rho_err']:.2f}\n")
        out.write(f"  persistence: {p['persistence']}\n")
    d = report.dfa
    out.write("\nDFA (detrended fluctuation analysis)\n")
    if "error" in d:
        out.write(f"  error: {d['error']}\n")
    else:
        for r in d["regimes"]:
            out.write(
                f"  s in [{r['scale_min']}, {r['scale_max']}]: "
                f"alpha {r['alpha']:.2f} +/- {r['alpha_err']:.2f}  ({r['classification']})\n"
            )
        if d["crossover_scales"]:
            out.write(f"  crossovers at s = {', '.join(map(str, d['crossover_scales']))}\n")
        out.write(f"  overall alpha {d['alpha']:.2f} +/- {d['alpha_err']:.2f} ({d['classification']})\n")
    t = report.tsa
    out.write("\nTSA (time-scale analysis)\n")
    if "error" in t:
        out.write(f"  error: {t['error']}\n")
    else:
        out.write(f"  global H   {t['H']:.2f}\n")
        out.write(f"  min H(t)   {t['H_min']:.2f}\n")
        out.write(f"  max H(t)   {t['H_max']:.2f}\n")
        out.write(f"  D          {t['D']:.2f}\n")
    verdict = "fractal with LRD" if report.verdict else "no LRD evidence"
    out.write(f"\nVerdict: {verdict}\n")
    return out.getvalue()


def emit_plot_data(obj) -> bytes:
    """Plot-ready CSV: log10 curve plus fitted line, or the H(t) track."""
    lines = []
    if isinstance(obj, FluctuationCurve):
        if len(obj) == 0:
            raise ValueError("empty curve")
        alpha, _ = fit_alpha(obj)
        mask = obj.fluctuations > 0
        x = np.log10(obj.scales[mask].astype(float))
        y = np.log10(obj.fluctuations[mask])
        intercept = y.mean() - alpha * x.mean()
        lines.append("log10_s,log10_F,fit_y")
        for xi, yi in zip(x, y):
            lines.append(f"{xi:{_FMT}},{yi:{_FMT}},{alpha * xi + intercept:{_FMT}}")
    elif isinstance(obj, Spectrum):
        if len(obj) == 0:
            raise ValueError("empty spectrum")
        fit = fit_beta(obj)
        mask = obj.powers > 0
        x = np.log10(obj.frequencies[mask])
        y = np.log10(obj.powers[mask])
        slope = -fit.beta
        intercept = y.mean() - slope * x.mean()
        lines.append("log10_freq,log10_power,fit_y")
        for xi, yi in zip(x, y):
            lines.append(f"{xi:{_FMT}},{yi:{_FMT}},{slope * xi + intercept:{_FMT}}")
    elif isinstance(obj, LocalHurstTrack):
        if len(obj) == 0:
            raise ValueError("empty track")
        lines.append("t,H_t")
        for t, h in zip(obj.times, obj.values):
            lines.append(f"{t},{h:{_FMT}}")
    else:
        raise TypeError(f"cannot emit plot data for {type(obj).__name__}")
    return ("\n".join(lines) + "\n").encode()
