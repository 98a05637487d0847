"""Command-line interface: synth / analyze / validate subcommands."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import dfa as dfa_mod
from . import spectral, wavelet
from .core import ExponentSet, autocovariance, hurst_to_dimension, hurst_to_rho
from .generators import GeneratorSpec, generate, generate_fbm, generate_fgn
from .report import AnalysisConfig, TraceFile, analyze, emit_plot_data, emit_report, load_trace

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractraffic",
        description="Fractal / long-range-dependence analysis of traffic time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic fractional series")
    p_synth.add_argument("--kind", choices=["fgn", "fbm", "white"], required=True)
    p_synth.add_argument("--hurst", type=float, default=0.7)
    p_synth.add_argument("--length", type=int, required=True)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True, help="output file, one sample per line")

    p_an = sub.add_parser("analyze", help="run PSA, DFA and TSA on a trace")
    p_an.add_argument("--in", dest="infile", required=True, help="trace file or - for stdin")
    p_an.add_argument("--format", choices=["sizes", "timed"], default="sizes")
    p_an.add_argument("--label", default="")
    fmt = p_an.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_const", const="json", dest="outfmt")
    fmt.add_argument("--csv", action="store_const", const="csv", dest="outfmt")
    fmt.add_argument("--table", action="store_const", const="table", dest="outfmt")
    p_an.set_defaults(outfmt="table")
    p_an.add_argument("--plots", metavar="DIR", help="write plot-data CSVs into DIR")
    p_an.add_argument("--config", metavar="FILE", help="key = value overrides")

    sub.add_parser("validate", help="run the generator/estimator self-checks")
    return parser


def _read_config(path: str) -> AnalysisConfig:
    config = AnalysisConfig()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.split("#")[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line {lineno}")
            key, _, value = (part.strip() for part in line.partition("="))
            if key == "psa_band_low":
                lo = float(value)
                hi = config.psa_band[1] if config.psa_band else 0.125
                config.psa_band = (lo, hi)
            elif key == "psa_band_high":
                hi = float(value)
                lo = config.psa_band[0] if config.psa_band else 0.0
                config.psa_band = (lo, hi)
            elif key == "dfa_scales":
                config.dfa_scales = [int(v) for v in value.split(",")]
            elif key == "dfa_max_regimes":
                config.dfa_max_regimes = int(value)
            elif key == "omega0":
                config.omega0 = float(value)
            elif key == "tsa_smallest_scale":
                config.tsa_scales = list(wavelet.default_scales(smallest=float(value)))
            else:
                raise ValueError(f"unknown config key {key!r} at line {lineno}")
    return config


def _cmd_synth(args) -> int:
    spec = GeneratorSpec(hurst=args.hurst, length=args.length, seed=args.seed, kind=args.kind)
    series = generate(spec)
    with open(args.out, "w", encoding="utf-8") as handle:
        for value in series.values:
            handle.write(f"{float(value)!r}\n")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    config = _read_config(args.config) if args.config else AnalysisConfig()
    trace = TraceFile(path=args.infile, format=args.format, label=args.label)
    if args.infile == "-":
        series = load_trace(trace, stream=sys.stdin)
    else:
        series = load_trace(trace)
    report = analyze(series.values, label=args.label, config=config)
    sys.stdout.buffer.write(emit_report(report, args.outfmt))
    if args.plots:
        os.makedirs(args.plots, exist_ok=True)
        label = args.label or "trace"
        for name, obj in (("psa", report.spectrum), ("dfa", report.curve), ("tsa", report.track)):
            if obj is None:
                continue
            path = os.path.join(args.plots, f"{label}_{name}.csv")
            with open(path, "wb") as handle:
                handle.write(emit_plot_data(obj))
    return EXIT_OK


def _cmd_validate() -> int:
    """Quick self-check of the generators and all three estimators."""
    checks = []

    hs = np.linspace(0.05, 0.95, 19)
    ok = all(
        abs(ExponentSet.from_hurst(h).beta - (2 * h + 1)) < 1e-12
        and abs(hurst_to_dimension(h) - (2 - h)) < 1e-12
        and abs(hurst_to_rho(h) - (2 ** (2 * h - 1) - 1)) < 1e-12
        for h in hs
    )
    checks.append(("exponent identities", ok))

    n = 2**14
    fgn = generate_fgn(GeneratorSpec(0.7, n, 12345))
    acf = autocovariance(fgn.values, 1)
    checks.append(("fGn lag-1 autocorrelation", abs(acf[1] / acf[0] - 0.3195) < 0.05))

    alpha, _ = dfa_mod.dfa_estimate(fgn.values)
    checks.append(("DFA alpha on fGn(0.7)", abs(alpha - 0.7) < 0.1))

    fbm = generate_fbm(GeneratorSpec(0.7, n, 12345))
    exps = spectral.psa_estimate(fbm.values)
    checks.append(("PSA beta on fBm(0.7)", abs(exps.beta - 2.4) < 0.35))

    tsa = wavelet.tsa_report(generate_fbm(GeneratorSpec(0.5, n, 7)).values)
    checks.append(("TSA global H on fBm(0.5)", abs(tsa.hurst - 0.5) < 0.15))

    failed = False
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failed = failed or not ok
    return EXIT_INPUT if failed else EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        return _cmd_validate()
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
