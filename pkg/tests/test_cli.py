"""Command-line front end: subcommands, files, exit codes, determinism."""

import csv
import json

import numpy as np
import pytest

from pulsepsd import (
    FrequencyGrid,
    SpectrumGrid,
    TrainParams,
    Variant,
    __version__,
    discrete_lines_transition,
)
from pulsepsd.cli import analytic_on_fft_grid, compare_on_common_bins, main


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def _load(path):
    return json.loads(path.read_text())


# --- analytic subcommand ---


def test_analytic_transition_writes_spectrum_lines_and_manifest(tmp_path):
    out = tmp_path / "run"
    code = main(
        [
            "analytic", "--model", "transition", "--t0", "64", "--delta", "3",
            "--p", "0.55", "--fmax-norm", "10", "--points", "1024",
            "--out-dir", str(out), "--svg",
        ]
    )
    assert code == 0
    spectrum = _read_csv(out / "analytic_spectrum.csv")
    assert spectrum[0] == ["f_normalized", "psd_linear", "psd_db", "kind"]
    assert {r[3] for r in spectrum[1:]} == {"continuous"}
    lines = _read_csv(out / "analytic_lines.csv")
    assert {r[3] for r in lines[1:]} == {"line"}
    assert float(lines[1][0]) == 1.0
    manifest = _load(out / "analytic_manifest.json")
    assert manifest["schema_version"] == 1
    assert manifest["tool"] == "pulsepsd"
    assert manifest["version"] == __version__
    assert manifest["command"] == "analytic"
    assert "analytic_spectrum.csv" in manifest["outputs"]
    assert manifest["duration_s"] >= 0.0
    assert (out / "analytic_spectrum.svg").exists()


def test_analytic_hz_flag_switches_the_frequency_axis(tmp_path):
    norm_dir, hz_dir = tmp_path / "norm", tmp_path / "hz"
    for argv_extra, out in ((), norm_dir), (("--hz",), hz_dir):
        code = main(
            [
                "analytic", "--model", "transition", "--t0", "64", "--delta", "3",
                "--p", "0.55", "--points", "256", "--out-dir", str(out), *argv_extra,
            ]
        )
        assert code == 0
    f_norm = float(_read_csv(norm_dir / "analytic_spectrum.csv")[1][0])
    f_hz = float(_read_csv(hz_dir / "analytic_spectrum.csv")[1][0])
    assert f_hz == pytest.approx(f_norm / 64.0, rel=1e-12)


def test_analytic_blank_normalizes_to_the_second_lobe(tmp_path):
    out = tmp_path / "blank"
    code = main(
        [
            "analytic", "--model", "blank", "--t0", "100", "--delta", "10",
            "--points", "6001", "--out-dir", str(out),
        ]
    )
    assert code == 0
    rows = _read_csv(out / "analytic_spectrum.csv")[1:]
    f = np.array([float(r[0]) for r in rows])
    s = np.array([float(r[1]) for r in rows])
    lobe = (f > 1.25) & (f < 2.0)
    assert s[lobe].max() == pytest.approx(1.0, rel=1e-9)
    assert s.max() > 1.5  # the clock peak rises above the normalized lobe


def test_analytic_blank_needs_room_for_the_reference_window(tmp_path, capsys):
    code = main(
        [
            "analytic", "--model", "blank", "--t0", "100", "--delta", "10",
            "--fmax-norm", "1.5", "--out-dir", str(tmp_path / "x"),
        ]
    )
    assert code == 1
    assert "--k-scale" in capsys.readouterr().err


# --- simulate subcommand ---


def test_simulate_is_byte_identical_across_worker_counts(tmp_path, monkeypatch):
    base = [
        "simulate", "--model", "transition", "--t0", "16", "--delta", "2",
        "--p", "0.55", "--fft", "2048", "--realizations", "70", "--seed", "13",
    ]
    outs = [tmp_path / name for name in ("w1", "w3", "env2")]
    assert main(base + ["--workers", "1", "--out-dir", str(outs[0])]) == 0
    assert main(base + ["--workers", "3", "--out-dir", str(outs[1])]) == 0
    monkeypatch.setenv("PULSEPSD_THREADS", "2")
    assert main(base + ["--out-dir", str(outs[2])]) == 0
    ref = (outs[0] / "simulated_spectrum.csv").read_bytes()
    assert (outs[1] / "simulated_spectrum.csv").read_bytes() == ref
    assert (outs[2] / "simulated_spectrum.csv").read_bytes() == ref


def test_simulate_writes_manifest_and_optional_signal_dump(tmp_path):
    out = tmp_path / "sim"
    dump = tmp_path / "first.txt"
    code = main(
        [
            "simulate", "--model", "transition", "--t0", "16", "--delta", "2",
            "--p", "0.55", "--fft", "1024", "--symbols", "32", "--realizations", "4",
            "--seed", "3", "--out-dir", str(out), "--dump-first-signal", str(dump),
        ]
    )
    assert code == 0
    rows = _read_csv(out / "simulated_spectrum.csv")
    assert rows[0] == ["f_normalized", "psd_linear", "psd_db", "kind"]
    assert {r[3] for r in rows[1:]} == {"simulated"}
    assert len(rows) == 1 + 512
    assert len(dump.read_text().splitlines()) == 32 * 16
    manifest = _load(out / "simulate_manifest.json")
    assert manifest["command"] == "simulate"
    assert "first.txt" in manifest["outputs"]


# --- compare subcommand ---


def test_compare_runs_end_to_end(tmp_path, capsys):
    out = tmp_path / "cmp"
    code = main(
        [
            "compare", "--model", "transition", "--t0", "64", "--delta", "3",
            "--p", "0.55", "--fft", "8192", "--realizations", "300", "--seed", "21",
            "--out-dir", str(out),
        ]
    )
    assert code == 0
    assert "max |analytic - simulated|" in capsys.readouterr().out
    rows = _read_csv(out / "compare.csv")
    assert rows[0] == ["f_normalized", "analytic_db", "simulated_db", "diff_db"]
    summary = _load(out / "compare_summary.json")
    assert summary["schema_version"] == 1
    assert summary["bins_used"] > 100
    assert summary["max_abs_diff_db"] < 3.0  # loose: 300 runs on a coarse fft


def test_compare_join_of_identical_spectra_is_zero():
    fft = 1024
    grid = FrequencyGrid.fft_bins(fft)
    psd = np.linspace(1.0, 2.0, len(grid))
    left = SpectrumGrid(grid=grid, psd=psd)
    right = SpectrumGrid(grid=grid, psd=psd.copy())
    rows, stats = compare_on_common_bins(left, right, 64.0, (0.1, 10.0), fft)
    assert stats["max_abs_diff_db"] == 0.0
    assert all(r[3] == 0.0 for r in rows)
    assert stats["bins_used"] < stats["bins_in_band"]  # null neighborhoods skipped


def test_compare_rejects_mismatched_grids():
    sim_grid = FrequencyGrid.fft_bins(256)
    sim = SpectrumGrid(grid=sim_grid, psd=np.ones(len(sim_grid)))
    ana = analytic_on_fft_grid(
        TrainParams(Variant.TRANSITION_STRETCH, t0=64, delta=3, prob_one=0.55), 8192
    )
    with pytest.raises(ValueError, match="grid mismatch"):
        compare_on_common_bins(ana, sim, 64.0, (0.1, 10.0), 8192)


def test_analytic_on_fft_grid_keeps_line_power(tmp_path):
    params = TrainParams(Variant.TRANSITION_STRETCH, t0=64, delta=3, prob_one=0.55)
    spec = analytic_on_fft_grid(params, 4096)
    assert spec.meta["kind"] == "combined"
    # the bin nearest the clock frequency carries the k=1 line power plus
    # a deep-null continuum sliver, so it is line-dominated
    f = spec.freqs
    i_line = int(np.argmin(np.abs(f - 1.0 / 64.0)))
    line = discrete_lines_transition(1, params).power[0]
    assert spec.psd[i_line] == pytest.approx(line, rel=0.05)
    assert spec.psd[i_line] > 4 * spec.psd[i_line - 3]


# --- peaks-sweep subcommand ---


def test_peaks_sweep_analytic_writes_report_and_csv(tmp_path):
    out = tmp_path / "sweep"
    code = main(
        [
            "peaks-sweep", "--t0", "100", "--deltas", "2,6,10", "--source", "analytic",
            "--law", "generator", "--out-dir", str(out),
        ]
    )
    assert code == 0
    rows = _read_csv(out / "sweep.csv")
    assert rows[0] == ["delta", "center_freq_norm", "amplitude_linear", "fwhm_norm"]
    assert [float(r[0]) for r in rows[1:]] == [2.0, 6.0, 10.0]
    report = _load(out / "sweep_report.json")
    assert report["schema_version"] == 1
    assert report["monotonicity"]["peak_height_nonincreasing"]["holds"] is True
    assert report["monotonicity"]["fwhm_nondecreasing"]["holds"] is True
    assert report["center_fit"]["r_squared"] > 0.9
    item = report["items"][-1]
    assert item["delta"] == 10.0
    assert item["amplitude_linear"] == pytest.approx(2.1586283777211532, rel=1e-6)
    assert item["peak_height"] == pytest.approx(
        item["amplitude_linear"] * item["second_lobe_max"], rel=1e-12
    )
    assert (out / "peaks_sweep_manifest.json").exists()


def test_peaks_sweep_simulated_matches_frozen_reference(tmp_path):
    out = tmp_path / "psim"
    code = main(
        [
            "peaks-sweep", "--t0", "32", "--deltas", "3", "--source", "simulated",
            "--fft", "32768", "--realizations", "150", "--symbols", "512",
            "--seed", "5", "--out-dir", str(out),
        ]
    )
    assert code == 0
    report = _load(out / "sweep_report.json")
    assert report["sim"]["fft_size"] == 32768
    item = report["items"][0]
    assert item["center_freq_norm"] == pytest.approx(1.0478515625, abs=1e-9)
    assert item["amplitude_linear"] == pytest.approx(1.6732495563322902, rel=1e-9)


# --- config files and precedence ---


def test_config_file_fills_defaults_and_flags_win(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text(
        "# simulation preset\n"
        "model = transition\n"
        "t0 = 16\n"
        "delta = 2\n"
        "p = 0.55\n"
        "fft = 1024\n"
        "realizations = 20\n"
        "seed = 4\n"
    )
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert main(["simulate", "--config", str(conf), "--out-dir", str(a)]) == 0
    assert main(["simulate", "--config", str(conf), "--out-dir", str(b)]) == 0
    assert main(["simulate", "--config", str(conf), "--seed", "5", "--out-dir", str(c)]) == 0
    ref = (a / "simulated_spectrum.csv").read_bytes()
    assert (b / "simulated_spectrum.csv").read_bytes() == ref
    assert (c / "simulated_spectrum.csv").read_bytes() != ref


# --- exit codes ---


def test_usage_errors_exit_one(tmp_path, capsys):
    assert main([]) == 1
    assert main(["analytic", "--model", "transition", "--t0", "64", "--bogus"]) == 1
    code = main(
        ["analytic", "--model", "transition", "--t0", "64", "--delta", "70",
         "--out-dir", str(tmp_path / "x")]
    )
    assert code == 1
    assert "delta" in capsys.readouterr().err


def test_detection_failures_exit_two(tmp_path, capsys):
    code = main(
        ["peaks-sweep", "--t0", "100", "--deltas", "0", "--source", "analytic",
         "--out-dir", str(tmp_path / "x")]
    )
    assert code == 2
    assert "detection failure" in capsys.readouterr().err
