"""Asymmetric-transmission figures of merit and the attenuation/noise studies.

All attenuation arguments are per-bond values (Gamma_A/2) in Np. The
balanced ring puts that value on each bond; the unbalanced variant puts
the doubled total on the gyrator bond only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .netlist import RingParams, build_ring
from .pulse import PulseSpec, gaussian_pulse, propagate, pulse_asymmetry
from .sweep import FrequencyGrid, FrequencySpectrum, sweep

__all__ = [
    "AsymmetryCurve",
    "NoiseReport",
    "asymmetry_spectrum",
    "band_average",
    "attenuation_sweep",
    "pulse_band_grid",
    "noise_transmission",
]


def asymmetry_spectrum(spectrum: FrequencySpectrum) -> np.ndarray:
    """Pointwise transmission probability difference |S21|^2 - |S12|^2."""
    if spectrum.n_ports != 2:
        raise ValueError("asymmetry is defined for 2-port spectra")
    return np.abs(spectrum.s(2, 1)) ** 2 - np.abs(spectrum.s(1, 2)) ** 2


def band_average(values: np.ndarray, grid: FrequencyGrid, f_lo: float,
                 f_hi: float) -> float:
    """Arithmetic mean of a per-frequency series over [f_lo, f_hi]."""
    f = grid.frequencies
    mask = (f >= f_lo) & (f <= f_hi)
    if not np.any(mask):
        raise ValueError(f"band [{f_lo:.4e}, {f_hi:.4e}] contains no grid points")
    return float(np.mean(np.asarray(values)[mask]))


@dataclass
class AsymmetryCurve:
    gamma_half: np.ndarray   # per-bond Gamma_A/2, Np
    values: np.ndarray       # <P21 - P12> or pulse asymmetry, in [-1, 1]
    mode: str                # "frequency" | "time" | "noise"
    argmax_gamma: float
    rises_then_falls: bool   # single interior maximum on the sampled grid


def _bell_certificate(gammas: np.ndarray, values: np.ndarray) -> tuple[float, bool]:
    k = int(np.argmax(values))
    interior = 0 < k < len(values) - 1
    n_local_max = sum(
        1 for i in range(1, len(values) - 1)
        if values[i] > values[i - 1] and values[i] > values[i + 1]
    )
    return float(gammas[k]), bool(interior and n_local_max == 1)


def pulse_band_grid(fc: float, fwhm: float, sample_rate: float, n_samples: int,
                    half_width: float | None = None) -> FrequencyGrid:
    """Sweep grid aligned with the FFT bins of an n_samples record, wide
    enough around fc to keep the pulse's out-of-band energy negligible."""
    if half_width is None:
        half_width = max(1.75e9 * (1e-9 / fwhm), 6.0 / fwhm)
    df = sample_rate / n_samples
    k_lo = max(1, int(np.ceil((fc - half_width) / df)))
    k_hi = int(np.floor((fc + half_width) / df))
    return FrequencyGrid(k_lo * df, k_hi * df, k_hi - k_lo + 1)


def attenuation_sweep(ring_params: RingParams, gamma_half_grid, band: tuple,
                      mode: str = "frequency", balanced: bool = True,
                      band_points: int = 501, pulse: PulseSpec | None = None,
                      sample_rate: float = 64e9, duration: float = 64e-9,
                      workers: int | None = None) -> AsymmetryCurve:
    """Asymmetry versus per-bond attenuation.

    mode "frequency" rebuilds and sweeps the ring at each attenuation and
    band-averages P21-P12 over [band]; mode "time" sends a 1 ns Gaussian
    pulse at the band center through both directions and forms the peak
    power asymmetry. The unbalanced variant (balanced=False) places the
    full doubled attenuation on the gyrator bond.
    """
    gammas = np.asarray(list(gamma_half_grid), dtype=float)
    if np.any(np.diff(gammas) <= 0):
        raise ValueError("gamma_half_grid must be ascending")
    f_lo, f_hi = band
    if mode not in ("frequency", "time"):
        raise ValueError("mode must be 'frequency' or 'time'")

    if mode == "time":
        if pulse is None:
            pulse = PulseSpec(fc=0.5 * (f_lo + f_hi), fwhm=1e-9)
        vin = gaussian_pulse(pulse, sample_rate, duration)
        grid = pulse_band_grid(pulse.fc, pulse.fwhm, sample_rate, len(vin.samples))
    else:
        grid = FrequencyGrid(f_lo, f_hi, band_points)

    values = np.empty(len(gammas))
    for i, g in enumerate(gammas):
        if balanced:
            params = ring_params.with_gamma(g, g)
        else:
            params = ring_params.with_gamma(0.0, 2.0 * g)
        spectrum = sweep(build_ring(params), grid, workers=workers)
        if mode == "frequency":
            values[i] = band_average(asymmetry_spectrum(spectrum), grid, f_lo, f_hi)
        else:
            v21 = propagate(spectrum, vin, from_port=1, to_port=2)
            v12 = propagate(spectrum, vin, from_port=2, to_port=1)
            values[i] = pulse_asymmetry(v21, v12, vin)

    argmax_gamma, bell = _bell_certificate(gammas, values)
    return AsymmetryCurve(gammas, values, mode, argmax_gamma, bell)


@dataclass
class NoiseReport:
    """Transmitted power response to a flat incoherent source.

    In a linear network the transmitted noise power spectral density is
    |S_ij|^2 times the source PSD, so the deterministic traces need no
    sampling; the seeded stochastic mode averages |S_ij x|^2 over complex
    Gaussian spectral amplitudes x and converges to the deterministic
    result as realizations grow.
    """
    grid: FrequencyGrid
    block: int
    np21: np.ndarray
    np12: np.ndarray
    np21_blocked: np.ndarray
    np12_blocked: np.ndarray
    ratio: np.ndarray
    ratio_blocked: np.ndarray
    mean_ratio: float
    realizations: int = 0
    seed: int | None = None
    stochastic_mean_ratio: float | None = None


def _block_average(values: np.ndarray, block: int) -> np.ndarray:
    out = np.empty_like(values, dtype=float)
    for start in range(0, len(values), block):
        seg = slice(start, min(start + block, len(values)))
        out[seg] = float(np.mean(values[seg]))
    return out


def noise_transmission(ring_params: RingParams, grid: FrequencyGrid, block: int,
                       source_psd: float = 1.0, realizations: int = 0,
                       seed: int | None = None,
                       workers: int | None = None) -> NoiseReport:
    """Directional noise power transmission with block averaging (block >= 1)."""
    if block < 1:
        raise ValueError("block must be >= 1")
    spectrum = sweep(build_ring(ring_params), grid, workers=workers)
    np21 = np.abs(spectrum.s(2, 1)) ** 2 * source_psd
    np12 = np.abs(spectrum.s(1, 2)) ** 2 * source_psd
    ratio = np21 / np12
    report = NoiseReport(
        grid=grid,
        block=block,
        np21=np21,
        np12=np12,
        np21_blocked=_block_average(np21, block),
        np12_blocked=_block_average(np12, block),
        ratio=ratio,
        ratio_blocked=_block_average(ratio, block),
        mean_ratio=float(np.mean(ratio)),
        realizations=realizations,
        seed=seed,
    )
    if realizations > 0:
        rng = np.random.default_rng(seed)
        nf = grid.n_points
        acc21 = np.zeros(nf)
        acc12 = np.zeros(nf)
        chunk = max(1, min(realizations, int(2e7) // nf))
        done = 0
        while done < realizations:
            r = min(chunk, realizations - done)
            for acc in (acc21, acc12):
                re = rng.standard_normal((r, nf))
                im = rng.standard_normal((r, nf))
                acc += np.sum(re * re + im * im, axis=0) / 2.0
            done += r
        stoch21 = np21 * acc21 / realizations
        stoch12 = np12 * acc12 / realizations
        report.stochastic_mean_ratio = float(np.mean(stoch21 / stoch12))
    return report
