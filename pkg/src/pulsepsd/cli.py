"""Command-line front end: analytic, simulate, compare, peaks-sweep.

Every command is pure with respect to its flags and seed; rerunning
writes byte-identical data files. Each run also writes a manifest JSON
recording the resolved parameters, the produced files, and the wall
clock, which is enough to reproduce the run. Output frequencies are
normalized to f0 = 1/t0 unless --hz is given. A flat key = value config
file can stand in for any flag; explicit flags win.

Exit codes: 0 success, 1 usage or validation error, 2 numerical
detection failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (
    FrequencyGrid,
    SpectrumGrid,
    bin_power,
    combine,
    continuous_psd_transition,
    discrete_lines_transition,
    psd_blank_shorten,
)
from .charfn import NearSingularError
from .io import (
    db10,
    write_compare_csv,
    write_json,
    write_lines_csv,
    write_signal_txt,
    write_spectrum_csv,
    write_sweep_csv,
    write_svg,
)
from .model import BlankLaw, TrainParams, Variant
from .peaks import (
    PeakDetectionError,
    Source,
    find_clock_peak,
    linear_fit,
    normalize_second_lobe,
    sweep_delta,
)
from .sim import SimConfig, estimate_psd, synthesize_realization

SCHEMA_VERSION = 1
DEFAULT_BAND = (0.1, 10.0)


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        raise CliUsageError(message)


def _parse_pair(text: str, what: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise CliUsageError(f"{what} must look like LO:HI, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise CliUsageError(f"{what} must hold two numbers, got {text!r}") from None
    if not lo < hi:
        raise CliUsageError(f"{what} needs LO < HI, got {text!r}")
    return lo, hi


def _parse_deltas(text: str) -> list[float]:
    text = text.strip()
    if not text:
        raise CliUsageError("--deltas must not be empty")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliUsageError(f"--deltas range must look like START:STOP:STEP, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise CliUsageError(f"--deltas range must hold numbers, got {text!r}") from None
        if step <= 0 or stop < start:
            raise CliUsageError(f"--deltas range needs STOP >= START and STEP > 0, got {text!r}")
        n = int(round((stop - start) / step))
        values = [start + i * step for i in range(n + 1) if start + i * step <= stop + 1e-9]
    else:
        try:
            values = [float(p) for p in text.split(",") if p.strip() != ""]
        except ValueError:
            raise CliUsageError(f"--deltas must be a comma list or START:STOP:STEP, got {text!r}") from None
    if not values:
        raise CliUsageError("--deltas resolved to an empty list")
    return values


def _next_pow2(n: int) -> int:
    return 1 << max(2, (n - 1).bit_length())


def _load_config_args(path: Path) -> list[str]:
    """Flat key = value lines to flag tokens; false booleans are dropped."""
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise CliUsageError(f"cannot read config file {path}: {err}") from None
    out: list[str] = []
    for ln, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise CliUsageError(f"{path}:{ln}: expected 'key = value', got {line!r}")
        key, _, value = s.partition("=")
        key = key.strip().replace("_", "-")
        value = value.strip()
        if not key:
            raise CliUsageError(f"{path}:{ln}: empty key")
        if value.lower() == "true":
            out.append(f"--{key}")
        elif value.lower() == "false":
            pass
        else:
            out.extend([f"--{key}", value])
    return out


def _expand_config(argv: list[str]) -> list[str]:
    """Splice config-file flags right after the subcommand so CLI flags win."""
    if not argv or argv[0].startswith("-"):
        return argv
    head, rest = argv[0], argv[1:]
    passthrough: list[str] = []
    from_config: list[str] = []
    i = 0
    while i < len(rest):
        tok = rest[i]
        if tok == "--config":
            if i + 1 >= len(rest):
                raise CliUsageError("--config needs a file path")
            from_config.extend(_load_config_args(Path(rest[i + 1])))
            i += 2
        elif tok.startswith("--config="):
            from_config.extend(_load_config_args(Path(tok.split("=", 1)[1])))
            i += 1
        else:
            passthrough.append(tok)
            i += 1
    return [head] + from_config + passthrough


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=["transition", "blank"], required=True)
    p.add_argument("--t0", type=int, required=True, help="samples per nominal symbol")
    p.add_argument("--delta", type=float, default=0.0, help="predistortion, samples")
    p.add_argument("--p", dest="prob_one", type=float, default=0.5, help="P(symbol = 1)")
    p.add_argument("--allow-biased", action="store_true",
                   help="permit prob_one != 0.5 for the blank model")
    p.add_argument("--law", choices=["paper", "generator"], default="paper",
                   help="blank-model front-interval shortening law")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out-dir", type=Path, default=Path("."))
    p.add_argument("--hz", action="store_true",
                   help="emit absolute cycles/sample instead of f/f0")
    p.add_argument("--svg", action="store_true", help="also write a quick-look chart")
    p.add_argument("--config", type=Path, default=None,
                   help="flat key = value file mirroring any flag (flags win)")


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fft", type=int, default=None, help="FFT size, power of two")
    p.add_argument("--symbols", type=int, default=None, help="symbols per realization")
    p.add_argument("--realizations", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None,
                   help="worker threads (PULSEPSD_THREADS caps; never changes results)")


def _variant(args) -> Variant:
    return Variant.TRANSITION_STRETCH if args.model == "transition" else Variant.BLANK_SHORTEN


def _blank_law(args) -> BlankLaw:
    return BlankLaw.PAPER_K_DELTA if args.law == "paper" else BlankLaw.GENERATOR_K_MINUS_ONE_DELTA


def _train_params(args) -> TrainParams:
    if float(args.delta) != int(args.delta):
        raise CliUsageError(f"--delta must be an integer sample count here, got {args.delta!r}")
    try:
        return TrainParams(
            variant=_variant(args),
            t0=args.t0,
            delta=int(args.delta),
            prob_one=args.prob_one,
            blank_law=_blank_law(args),
            allow_biased=args.allow_biased,
        )
    except ValueError as err:
        raise CliUsageError(str(err)) from None


def _sim_config(args, params: TrainParams) -> SimConfig:
    if args.fft is None and args.symbols is None:
        raise CliUsageError("provide --fft, --symbols, or both")
    fft = args.fft if args.fft is not None else _next_pow2(args.symbols * params.t0)
    symbols = args.symbols if args.symbols is not None else max(1, fft // params.t0)
    try:
        return SimConfig(
            n_symbols=symbols,
            n_realizations=args.realizations,
            fft_size=fft,
            seed=args.seed,
            params=params,
        )
    except ValueError as err:
        raise CliUsageError(str(err)) from None


def _manifest(args, command: str, outputs: list[Path], started: float) -> None:
    params = {}
    for key, value in vars(args).items():
        if key in ("func", "config"):
            continue
        if isinstance(value, Path):
            value = str(value)
        params[key.replace("_", "-")] = value
    payload = {
        "schema_version": SCHEMA_VERSION,
        "tool": "pulsepsd",
        "version": __version__,
        "command": command,
        "params": params,
        "outputs": [p.name for p in outputs],
        "duration_s": round(time.perf_counter() - started, 6),
    }
    write_json(args.out_dir / f"{command.replace('-', '_')}_manifest.json", payload)


def _svg_of_spectrum(path: Path, spectrum: SpectrumGrid, t0: float, hz: bool, title: str) -> None:
    x = spectrum.freqs if hz else spectrum.freqs * t0
    write_svg(path, x, db10(spectrum.psd), title,
              "frequency (cycles/sample)" if hz else "f / f0", "PSD (dB)")


def cmd_analytic(args) -> list[Path]:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []
    t0 = float(args.t0)
    if _variant(args) is Variant.TRANSITION_STRETCH:
        params = _train_params(args)
        fmax_norm = args.fmax_norm if args.fmax_norm is not None else 10.0
        points = args.points if args.points is not None else 4096
        grid = FrequencyGrid.offset_linspace(fmax_norm / t0, points)
        spectrum = continuous_psd_transition(grid, params, scale=args.scale)
        k_in_span = int(np.floor(grid.values[-1] * t0))
        k_max = args.k_max if args.k_max is not None else max(1, min(40, k_in_span))
        lines = discrete_lines_transition(k_max, params)
        spectrum_path = args.out_dir / "analytic_spectrum.csv"
        lines_path = args.out_dir / "analytic_lines.csv"
        write_spectrum_csv(spectrum_path, spectrum, t0, hz=args.hz)
        write_lines_csv(lines_path, lines, t0, hz=args.hz)
        outputs += [spectrum_path, lines_path]
    else:
        if not 0 <= args.delta < args.t0:
            raise CliUsageError(
                f"--delta must satisfy 0 <= delta < t0, got delta={args.delta}, t0={args.t0}"
            )
        if args.prob_one != 0.5 and not args.allow_biased:
            raise CliUsageError("the blank model assumes --p 0.5; pass --allow-biased to override")
        fmax_norm = args.fmax_norm if args.fmax_norm is not None else 3.0
        points = args.points if args.points is not None else 20001
        if args.k_scale is None and fmax_norm < 2.0:
            raise CliUsageError(
                "default second-lobe normalization needs --fmax-norm >= 2; pass --k-scale to skip"
            )
        grid = FrequencyGrid.offset_linspace(fmax_norm / t0, points)
        spectrum = psd_blank_shorten(
            grid, t0, float(args.delta), law=_blank_law(args),
            k_scale=args.k_scale if args.k_scale is not None else 1.0,
        )
        if args.k_scale is None:
            spectrum = normalize_second_lobe(spectrum, t0)
        spectrum_path = args.out_dir / "analytic_spectrum.csv"
        write_spectrum_csv(spectrum_path, spectrum, t0, hz=args.hz)
        outputs.append(spectrum_path)
    if args.svg:
        svg_path = args.out_dir / "analytic_spectrum.svg"
        _svg_of_spectrum(svg_path, spectrum, t0, args.hz, f"analytic {args.model} PSD")
        outputs.append(svg_path)
    return outputs


def cmd_simulate(args) -> list[Path]:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    params = _train_params(args)
    config = _sim_config(args, params)
    spectrum = estimate_psd(config, workers=args.workers)
    outputs = []
    spectrum_path = args.out_dir / "simulated_spectrum.csv"
    write_spectrum_csv(spectrum_path, spectrum, float(params.t0), hz=args.hz)
    outputs.append(spectrum_path)
    if args.dump_first_signal is not None:
        write_signal_txt(args.dump_first_signal, synthesize_realization(config, 0))
        outputs.append(args.dump_first_signal)
    if args.svg:
        svg_path = args.out_dir / "simulated_spectrum.svg"
        _svg_of_spectrum(svg_path, spectrum, float(params.t0), args.hz,
                         f"simulated {args.model} PSD")
        outputs.append(svg_path)
    return outputs


def analytic_on_fft_grid(params: TrainParams, fft_size: int, k_max: int | None = None) -> SpectrumGrid:
    """Binned analytic spectrum on the simulator's one-sided FFT bins.

    For the transition model the discrete lines are folded into the
    nearest retained bin, mirroring how an averaged periodogram receives
    them; harmonic bins themselves are dropped by the continuum
    evaluation (removable singularities), so line power lands one bin
    over, inside any sensible null-exclusion band.
    """
    grid = FrequencyGrid.fft_bins(fft_size)
    if params.variant is Variant.TRANSITION_STRETCH:
        binned = bin_power(continuous_psd_transition(grid, params))
        k_in_span = int(np.floor(binned.freqs[-1] * params.t0))
        k_use = max(1, min(k_max if k_max is not None else 40, k_in_span))
        return combine(binned, discrete_lines_transition(k_use, params))
    blank = psd_blank_shorten(
        grid, float(params.t0), float(params.delta), law=params.blank_law
    )
    return bin_power(blank)


def compare_on_common_bins(
    analytic_spec: SpectrumGrid,
    simulated: SpectrumGrid,
    t0: float,
    band: tuple[float, float],
    fft_size: int,
) -> tuple[list[tuple[float, float, float, float]], dict]:
    """Join analytic and simulated spectra bin for bin and summarize.

    The summary's max |diff| is taken over the normalized band and skips
    bins within 2 bin widths of a continuum null (integer f/f0). Rows
    are emitted for every retained bin, excluded or not.
    """
    f_a = analytic_spec.freqs
    idx = np.round(f_a * fft_size).astype(int) - 1
    if np.any(idx < 0) or np.any(idx >= len(simulated.freqs)):
        raise ValueError(
            f"grid mismatch: analytic axis spans {f_a[0]}..{f_a[-1]}, "
            f"simulated spans {simulated.freqs[0]}..{simulated.freqs[-1]}"
        )
    f_s = simulated.freqs[idx]
    if np.max(np.abs(f_s - f_a)) > 1e-12:
        raise ValueError(
            f"grid mismatch: analytic axis spans {f_a[0]}..{f_a[-1]} "
            f"but nearest simulated bins span {f_s[0]}..{f_s[-1]}"
        )
    a_db = db10(analytic_spec.psd)
    s_db = db10(simulated.psd[idx])
    diff = a_db - s_db
    x = f_a * t0
    bin_width_norm = t0 / fft_size
    near_null = (np.round(x) >= 1.0) & (np.abs(x - np.round(x)) <= 2.0 * bin_width_norm + 1e-12)
    in_band = (x > band[0]) & (x < band[1])
    use = in_band & ~near_null
    rows = [
        (float(x[i]), float(a_db[i]), float(s_db[i]), float(diff[i])) for i in range(len(x))
    ]
    stats = {
        "band_norm": [band[0], band[1]],
        "bins_in_band": int(np.count_nonzero(in_band)),
        "bins_used": int(np.count_nonzero(use)),
        "max_abs_diff_db": float(np.max(np.abs(diff[use]))) if np.any(use) else None,
        "mean_abs_diff_db": float(np.mean(np.abs(diff[use]))) if np.any(use) else None,
    }
    return rows, stats


def cmd_compare(args) -> list[Path]:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    params = _train_params(args)
    config = _sim_config(args, params)
    simulated = estimate_psd(config, workers=args.workers)
    analytic_spec = analytic_on_fft_grid(params, config.fft_size, args.k_max)
    band = _parse_pair(args.band, "--band") if isinstance(args.band, str) else args.band
    rows, stats = compare_on_common_bins(
        analytic_spec, simulated, float(params.t0), band, config.fft_size
    )
    if stats["max_abs_diff_db"] is not None and stats["max_abs_diff_db"] > 1.0:
        stats["note"] = "resolution-limited: analytic and simulated disagree beyond 1 dB"
    outputs = []
    csv_path = args.out_dir / "compare.csv"
    write_compare_csv(csv_path, rows)
    outputs.append(csv_path)
    summary_path = args.out_dir / "compare_summary.json"
    write_json(summary_path, {"schema_version": SCHEMA_VERSION, **stats})
    outputs.append(summary_path)
    if args.svg:
        svg_path = args.out_dir / "compare.svg"
        x = [r[0] for r in rows]
        write_svg(svg_path, x, [r[3] for r in rows], "analytic minus simulated",
                  "f / f0", "diff (dB)")
        outputs.append(svg_path)
    print(
        f"compare: max |analytic - simulated| = {stats['max_abs_diff_db']:.3f} dB "
        f"over f/f0 in ({band[0]}, {band[1]}), {stats['bins_used']} bins"
        + ("; " + stats["note"] if "note" in stats else "")
    )
    return outputs


def cmd_peaks_sweep(args) -> list[Path]:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    deltas = _parse_deltas(args.deltas)
    window = _parse_pair(args.window, "--window")
    lobe_window = _parse_pair(args.lobe_window, "--lobe-window")
    source = Source.ANALYTIC if args.source == "analytic" else Source.SIMULATED
    try:
        base = TrainParams(
            variant=Variant.BLANK_SHORTEN,
            t0=args.t0,
            delta=0,
            prob_one=args.prob_one,
            blank_law=_blank_law(args),
            allow_biased=args.allow_biased,
        )
    except ValueError as err:
        raise CliUsageError(str(err)) from None
    sim_config = None
    if source is Source.SIMULATED:
        if any(float(d) != int(d) for d in deltas):
            raise CliUsageError("simulated sweeps need integer --deltas")
        sim_config = _sim_config(args, dataclasses.replace(base, delta=int(deltas[0])))
    results = sweep_delta(
        base, deltas, source, sim=sim_config, window=window, lobe_window=lobe_window
    )
    rows = [
        (d, r.center_freq_norm, r.amplitude_linear, r.fwhm_norm) for d, r in results
    ]
    centers = [r.center_freq_norm for _, r in results]
    heights = [r.peak_height for _, r in results]
    ratios = [r.amplitude_linear for _, r in results]
    widths = [r.fwhm_norm for _, r in results]
    fit = linear_fit([d for d, _ in results], centers) if len(results) >= 3 else None
    report = {
        "schema_version": SCHEMA_VERSION,
        "source": args.source,
        "t0": args.t0,
        "law": args.law,
        "deltas": [d for d, _ in results],
        "window_norm": list(window),
        "lobe_window_norm": list(lobe_window),
        "items": [
            {
                "delta": d,
                "center_freq_norm": r.center_freq_norm,
                "amplitude_linear": r.amplitude_linear,
                "fwhm_norm": r.fwhm_norm,
                "second_lobe_max": r.second_lobe_max,
                "peak_height": r.peak_height,
            }
            for d, r in results
        ],
        "monotonicity": {
            "peak_height_nonincreasing": _nonincreasing(heights),
            "amplitude_linear_nonincreasing": _nonincreasing(ratios),
            "fwhm_nondecreasing": _nonincreasing([-w for w in widths]),
        },
        "center_fit": None
        if fit is None
        else {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared},
    }
    if source is Source.SIMULATED:
        report["sim"] = {
            "fft_size": sim_config.fft_size,
            "n_symbols": sim_config.n_symbols,
            "n_realizations": sim_config.n_realizations,
            "seed": sim_config.seed,
        }
    outputs = []
    csv_path = args.out_dir / "sweep.csv"
    write_sweep_csv(csv_path, rows)
    outputs.append(csv_path)
    report_path = args.out_dir / "sweep_report.json"
    write_json(report_path, report)
    outputs.append(report_path)
    if args.svg:
        svg_path = args.out_dir / "sweep.svg"
        write_svg(svg_path, [d for d, _ in results], centers,
                  "clock-peak center vs delta", "delta (samples)", "center f / f0")
        outputs.append(svg_path)
    return outputs


def _nonincreasing(seq: list[float]) -> dict:
    diffs = np.diff(np.asarray(seq, dtype=float))
    return {
        "holds": bool(np.all(diffs <= 0.0)),
        "ties": int(np.count_nonzero(diffs == 0.0)),
        "violations": int(np.count_nonzero(diffs > 0.0)),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pulsepsd", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"pulsepsd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form spectra to CSV")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--fmax-norm", type=float, default=None,
                   help="grid extent as f/f0 (default 10 transition, 3 blank)")
    p.add_argument("--points", type=int, default=None,
                   help="grid size (default 4096 transition, 20001 blank)")
    p.add_argument("--scale", type=float, default=1.0,
                   help="transition continuum scale (0.25 for quarter-amplitude convention)")
    p.add_argument("--k-scale", type=float, default=None,
                   help="blank spectrum scale K; omit for second-lobe normalization")
    p.add_argument("--k-max", type=int, default=None, help="highest line harmonic")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="averaged-periodogram estimate to CSV")
    _add_model_flags(p)
    _add_output_flags(p)
    _add_sim_flags(p)
    p.add_argument("--dump-first-signal", type=Path, default=None,
                   help="also write realization 0 as one sample per line")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="binned analytic vs simulated, joined CSV")
    _add_model_flags(p)
    _add_output_flags(p)
    _add_sim_flags(p)
    p.add_argument("--band", default="0.1:10", help="normalized band LO:HI for the summary")
    p.add_argument("--k-max", type=int, default=None, help="highest line harmonic")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("peaks-sweep", help="clock-peak measurements across deltas")
    p.add_argument("--t0", type=int, required=True)
    p.add_argument("--deltas", required=True, help="comma list or START:STOP:STEP, samples")
    p.add_argument("--source", choices=["analytic", "simulated"], default="analytic")
    p.add_argument("--p", dest="prob_one", type=float, default=0.5)
    p.add_argument("--allow-biased", action="store_true")
    p.add_argument("--law", choices=["paper", "generator"], default="paper")
    p.add_argument("--window", default="0.8:1.3", help="peak search window, f/f0")
    p.add_argument("--lobe-window", default="1.0:2.0", help="second lobe window, f/f0")
    _add_output_flags(p)
    _add_sim_flags(p)
    p.set_defaults(func=cmd_peaks_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    try:
        argv = _expand_config(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        outputs = args.func(args)
        _manifest(args, args.command, outputs, started)
    except CliUsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (PeakDetectionError, NearSingularError, RuntimeError) as err:
        print(f"detection failure: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
