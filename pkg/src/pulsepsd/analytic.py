"""Closed-form power spectral densities and their per-bin integration.

All spectra are one-sided with the factor-2 convention and carry linear
power units; dB conversion happens only at the output layer. Frequencies
are cycles/sample (the sample rate is fixed at 1), angular frequency
w = 2 pi f. The transition-stretch continuum is

    S_c(f) = 2 / (w^2 <G>) * Re[(1 - theta1)(1 - theta2) / (1 - theta1 theta2)]

with <G> = t0 (2 + p/q + q/p), and its discrete part puts the line power

    (sin(pi k delta / t0) * p q / (k pi))^2

on each clock harmonic k/t0. The blank-shorten density is
K |F(w)|^2 Re[(1 + theta)/(1 - theta)] for a rectangular pulse of width
t0. Values exactly on clock harmonics are removable 0/0 forms; such grid
points are dropped and reported, never interpolated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import charfn
from .model import BlankLaw, TrainParams, Variant, interval_stats

__all__ = [
    "FrequencyGrid",
    "SpectrumGrid",
    "DiscreteLineSet",
    "continuous_psd_transition",
    "discrete_lines_transition",
    "rect_pulse_energy_spectrum",
    "psd_blank_shorten",
    "bin_power",
    "combine",
]

HARMONIC_TOL = 1e-9
SINGULAR_TOL = 1e-9
# fraction of grid points allowed to need a negative->0 clamp (float noise only)
CLAMP_BUDGET = 1e-3


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing positive frequencies in cycles/sample."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or len(v) == 0:
            raise ValueError("frequency grid must be a non-empty 1-D array")
        if v[0] <= 0.0:
            raise ValueError(f"frequency grid must start above 0, got {v[0]!r}")
        if np.any(np.diff(v) <= 0.0):
            raise ValueError("frequency grid must be strictly increasing")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def offset_linspace(cls, f_max: float, n_points: int) -> "FrequencyGrid":
        """n_points bins over (0, f_max], each centered half a step in.

        The half-step offset keeps every point away from exact clock
        harmonics for any integer t0 dividing n_points or not.
        """
        if n_points < 1 or f_max <= 0:
            raise ValueError("need n_points >= 1 and f_max > 0")
        step = f_max / n_points
        return cls((np.arange(1, n_points + 1) - 0.5) * step)

    @classmethod
    def fft_bins(cls, fft_size: int) -> "FrequencyGrid":
        """One-sided FFT bin centers k/fft_size, k = 1 .. fft_size/2."""
        if fft_size < 4:
            raise ValueError(f"fft_size too small: {fft_size}")
        k = np.arange(1, fft_size // 2 + 1)
        return cls(k / float(fft_size))


@dataclass(frozen=True, eq=False)
class SpectrumGrid:
    """A frequency grid, aligned nonnegative linear-power values, and meta.

    ``meta`` carries the parameter echo, a normalization tag under
    ``kind``, the dropped near-singular frequencies, and the count of
    float-noise negative values clamped to zero.
    """

    grid: FrequencyGrid
    psd: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        p = np.asarray(self.psd, dtype=np.float64)
        if p.shape != (len(self.grid),):
            raise ValueError(
                f"psd length {p.shape} does not match grid length {len(self.grid)}"
            )
        if not np.all(np.isfinite(p)):
            raise ValueError("psd values must be finite")
        if np.any(p < 0.0):
            raise ValueError("psd values must be >= 0")
        object.__setattr__(self, "psd", p)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def freqs(self) -> np.ndarray:
        return self.grid.values


@dataclass(frozen=True, eq=False)
class DiscreteLineSet:
    """Clock-harmonic line frequencies and powers for k = 1 .. k_max."""

    k: np.ndarray
    freq: np.ndarray
    power: np.ndarray

    def __post_init__(self) -> None:
        k = np.asarray(self.k, dtype=np.int64)
        f = np.asarray(self.freq, dtype=np.float64)
        p = np.asarray(self.power, dtype=np.float64)
        if not (k.shape == f.shape == p.shape):
            raise ValueError("k, freq, power must have identical shapes")
        if np.any(p < 0.0):
            raise ValueError("line powers must be >= 0")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "freq", f)
        object.__setattr__(self, "power", p)

    def __len__(self) -> int:
        return len(self.k)


def _clamp_noise(values: np.ndarray, n_grid: int) -> tuple[np.ndarray, int]:
    neg = values < 0.0
    n_neg = int(np.count_nonzero(neg))
    if n_neg >= CLAMP_BUDGET * n_grid and n_neg > 0:
        raise RuntimeError(
            f"{n_neg} of {n_grid} grid points came out negative; "
            "that exceeds the float-noise clamping budget and signals a formula error"
        )
    if n_neg:
        values = np.where(neg, 0.0, values)
    return values, n_neg


def _harmonic_mask(freqs: np.ndarray, t0: float) -> np.ndarray:
    """True where a grid point sits within HARMONIC_TOL of some k/t0, k >= 1."""
    k_near = np.round(freqs * t0)
    return (k_near >= 1.0) & (np.abs(freqs - k_near / t0) < HARMONIC_TOL)


def continuous_psd_transition(
    grid: FrequencyGrid, params: TrainParams, scale: float = 1.0
) -> SpectrumGrid:
    """Continuous PSD of the transition-stretch train on the given grid.

    Points within 1e-9 of a clock harmonic are dropped (the closed form
    is a removable 0/0 there) and reported in ``meta["dropped_freqs"]``.
    ``scale`` multiplies all values; 1.0 keeps the unit-amplitude,
    factor-2 one-sided convention, 0.25 reproduces the quarter-amplitude
    convention some references use.
    """
    if params.variant is not Variant.TRANSITION_STRETCH:
        raise ValueError("continuous_psd_transition needs the transition-stretch variant")
    f = grid.values
    drop = _harmonic_mask(f, params.t0)
    keep = ~drop
    fk = f[keep]
    w = 2.0 * np.pi * fk
    t1 = charfn.theta1(w, params)
    t2 = charfn.theta2(w, params)
    g_mean = interval_stats(params).mean_g
    ratio = (1.0 - t1) * (1.0 - t2) / (1.0 - t1 * t2)
    values = scale * 2.0 / (w * w * g_mean) * np.real(ratio)
    values, n_clamped = _clamp_noise(values, len(fk))
    meta = {
        "kind": "continuous",
        "model": params.variant.value,
        "t0": params.t0,
        "delta": params.delta,
        "prob_one": params.prob_one,
        "scale": scale,
        "dropped_freqs": tuple(float(x) for x in f[drop]),
        "clamped_points": n_clamped,
    }
    return SpectrumGrid(grid=FrequencyGrid(fk), psd=values, meta=meta)


def discrete_lines_transition(k_max: int, params: TrainParams) -> DiscreteLineSet:
    """Discrete line powers at clock harmonics k/t0 for k = 1 .. k_max.

    Powers are exactly zero whenever k*delta is a multiple of t0 (the
    sine factor vanishes), in particular for delta = 0 at every k.
    """
    if params.variant is not Variant.TRANSITION_STRETCH:
        raise ValueError("discrete_lines_transition needs the transition-stretch variant")
    if k_max <= 0:
        raise ValueError(f"k_max must be positive, got {k_max}")
    k = np.arange(1, k_max + 1, dtype=np.int64)
    p = params.prob_one
    q = params.prob_zero
    amp = np.sin(np.pi * k * params.delta / params.t0) * p * q / (k * np.pi)
    power = amp * amp
    power[(k * params.delta) % params.t0 == 0] = 0.0
    return DiscreteLineSet(k=k, freq=k / float(params.t0), power=power)


def rect_pulse_energy_spectrum(omega, width: float):
    """|F(w)|^2 of a unit rectangular pulse of the given width.

    Equals (2 sin(w width / 2) / w)^2, with the w = 0 removable limit
    width^2 returned explicitly.
    """
    if width <= 0:
        raise ValueError(f"width must be positive, got {width!r}")
    w = np.asarray(omega, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(w == 0.0, float(width) ** 2, (2.0 * np.sin(w * width / 2.0) / w) ** 2)
    return float(out) if np.isscalar(omega) else out


def psd_blank_shorten(
    grid: FrequencyGrid,
    t0: float,
    delta: float,
    law: BlankLaw = BlankLaw.PAPER_K_DELTA,
    k_scale: float = 1.0,
) -> SpectrumGrid:
    """Blank-shorten PSD: k_scale * |F|^2 * Re[(1 + theta)/(1 - theta)].

    Grid points where |1 - theta| < 1e-9 (exactly the clock harmonics
    whose shortening cancels a whole number of slots) are dropped and
    reported in ``meta["dropped_freqs"]``.
    """
    if k_scale <= 0:
        raise ValueError(f"k_scale must be positive, got {k_scale!r}")
    f = grid.values
    w = 2.0 * np.pi * f
    theta = charfn.theta_blank(w, t0, delta, law)
    one_minus = 1.0 - theta
    drop = np.abs(one_minus) < SINGULAR_TOL
    keep = ~drop
    phi = np.real((1.0 + theta[keep]) / one_minus[keep])
    values = k_scale * rect_pulse_energy_spectrum(w[keep], t0) * phi
    values, n_clamped = _clamp_noise(values, int(keep.sum()))
    meta = {
        "kind": "continuous",
        "model": Variant.BLANK_SHORTEN.value,
        "t0": t0,
        "delta": delta,
        "law": law.value,
        "k_scale": k_scale,
        "dropped_freqs": tuple(float(x) for x in f[drop]),
        "clamped_points": n_clamped,
    }
    return SpectrumGrid(grid=FrequencyGrid(f[keep]), psd=values, meta=meta)


def bin_power(spectrum: SpectrumGrid) -> SpectrumGrid:
    """Integrate a density into per-bin power on the same axis.

    Bin k receives S(f_k) * (f_k - f_{k-1}) with f_0 = 0, the Hz form of
    the angular rule S(w_k)(w_k - w_{k-1}) / (2 pi). Matches the
    |X_k / L|^2 normalization of the averaged periodogram bin for bin.
    """
    f = spectrum.freqs
    if len(f) < 2:
        raise ValueError("bin_power needs a grid with at least 2 points")
    widths = np.empty_like(f)
    widths[0] = f[0]
    widths[1:] = np.diff(f)
    meta = dict(spectrum.meta)
    meta["kind"] = "binned"
    return SpectrumGrid(grid=spectrum.grid, psd=spectrum.psd * widths, meta=meta)


def combine(binned_continuous: SpectrumGrid, lines: DiscreteLineSet) -> SpectrumGrid:
    """Add each discrete line's power into the nearest continuous bin.

    Every line frequency must lie within the grid span; offenders are
    reported together by their harmonic index k.
    """
    f = binned_continuous.freqs
    outside = (lines.freq < f[0]) | (lines.freq > f[-1])
    if np.any(outside):
        bad = ", ".join(str(int(k)) for k in lines.k[outside])
        raise ValueError(f"line frequencies outside the grid span for k = {bad}")
    psd = binned_continuous.psd.copy()
    idx = np.searchsorted(f, lines.freq)
    idx = np.clip(idx, 1, len(f) - 1)
    left_closer = (lines.freq - f[idx - 1]) <= (f[idx] - lines.freq)
    nearest = np.where(left_closer, idx - 1, idx)
    np.add.at(psd, nearest, lines.power)
    meta = dict(binned_continuous.meta)
    meta["kind"] = "combined"
    meta["lines_k_max"] = int(lines.k.max()) if len(lines) else 0
    return SpectrumGrid(grid=binned_continuous.grid, psd=psd, meta=meta)
