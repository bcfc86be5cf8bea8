"""Time-domain pulse propagation through a swept network (spectral method).

The network is linear and time invariant, so a pulse is propagated by
multiplying its spectrum with the relevant S-parameter trace on the FFT
bins. S-matrices in this package follow the e^{+i omega t} field
convention while numpy's inverse FFT synthesizes on e^{-i omega t} for
real signals, so the trace enters conjugated; a matched delay line then
shifts the pulse later in time, as it must.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks, hilbert

from .sweep import FrequencySpectrum

__all__ = [
    "TimeSeries",
    "PulseSpec",
    "PulseMetrics",
    "BandMismatchError",
    "AmbiguousPulseError",
    "gaussian_pulse",
    "propagate",
    "pulse_metrics",
    "pulse_asymmetry",
]

OUT_OF_BAND_LIMIT = 1e-6
AMBIGUITY_RATIO = 0.5
DEFAULT_SAMPLE_RATE = 64e9
DEFAULT_DURATION = 64e-9


class BandMismatchError(ValueError):
    """Pulse spectral content falls outside the swept band."""


class AmbiguousPulseError(RuntimeError):
    """A trace has several comparable envelope peaks."""


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real voltage trace."""

    sample_rate: float
    t0: float
    samples: np.ndarray

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be > 0")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self.samples)) / self.sample_rate

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def scaled(self, k: float) -> "TimeSeries":
        return TimeSeries(self.sample_rate, self.t0, k * self.samples)


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian-modulated carrier: fc carrier frequency, fwhm the amplitude
    envelope full width at half maximum."""

    fc: float
    fwhm: float
    amplitude: float = 1.0
    t_center: float = 8e-9

    def __post_init__(self):
        if self.fc <= 0 or self.fwhm <= 0:
            raise ValueError("fc and fwhm must be > 0")


def gaussian_pulse(spec: PulseSpec, sample_rate: float = DEFAULT_SAMPLE_RATE,
                   duration: float = DEFAULT_DURATION) -> TimeSeries:
    """s(t) = A exp(-4 ln2 (t-tc)^2 / fwhm^2) cos(2 pi fc (t-tc))."""
    if sample_rate <= 2.0 * (spec.fc + 3.0 / spec.fwhm):
        raise ValueError(
            f"sample rate {sample_rate:.3e} undersamples fc={spec.fc:.3e} "
            f"plus the 3/fwhm bandwidth margin")
    if spec.t_center - 5.0 * spec.fwhm < 0 or spec.t_center + 5.0 * spec.fwhm > duration:
        raise ValueError("duration must cover t_center +/- 5 fwhm")
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    dt = t - spec.t_center
    env = spec.amplitude * np.exp(-4.0 * np.log(2.0) * (dt / spec.fwhm) ** 2)
    return TimeSeries(sample_rate, 0.0, env * np.cos(2.0 * np.pi * spec.fc * dt))


def propagate(spectrum: FrequencySpectrum, ts: TimeSeries, from_port: int,
              to_port: int) -> TimeSeries:
    """Send ts into from_port and return the wave emerging at to_port.

    The S trace is linearly interpolated (Re/Im) onto the FFT bins inside
    the swept band; bins outside the band are zeroed, and the input must
    keep its out-of-band energy below 1e-6 of the total.
    """
    x = ts.samples
    n = len(x)
    spec_x = np.fft.rfft(x)
    fbins = np.fft.rfftfreq(n, d=1.0 / ts.sample_rate)
    grid = spectrum.grid
    inband = (fbins >= grid.f_start) & (fbins <= grid.f_stop)

    total = float(np.sum(np.abs(spec_x) ** 2))
    out_frac = 1.0 - float(np.sum(np.abs(spec_x[inband]) ** 2)) / total if total > 0 else 0.0
    if out_frac > OUT_OF_BAND_LIMIT:
        raise BandMismatchError(
            f"{out_frac:.3e} of the pulse energy lies outside the swept band "
            f"[{grid.f_start:.4e}, {grid.f_stop:.4e}] Hz (limit {OUT_OF_BAND_LIMIT:.0e})")

    trace = spectrum.s(to_port, from_port)
    h = np.zeros(len(fbins), dtype=complex)
    h[inband] = (np.interp(fbins[inband], grid.frequencies, trace.real)
                 + 1j * np.interp(fbins[inband], grid.frequencies, trace.imag))
    y = np.fft.irfft(spec_x * np.conj(h), n=n)
    return TimeSeries(ts.sample_rate, ts.t0, y)


@dataclass
class PulseMetrics:
    arrival: float      # envelope-maximum time, parabolic-refined
    peak_amp: float     # envelope maximum
    ambiguous: bool     # another peak within AMBIGUITY_RATIO of the maximum
    peaks: list         # [(time, envelope amplitude), ...] sorted by time


def pulse_metrics(ts: TimeSeries, min_rel_height: float = 0.02) -> PulseMetrics:
    """Arrival time and peak amplitude of the dominant pulse.

    The envelope is the magnitude of the analytic signal, which makes the
    result insensitive to carrier phase. All envelope peaks above
    min_rel_height of the maximum are reported; the result is flagged
    ambiguous when a secondary peak exceeds half the maximum.
    """
    env = np.abs(hilbert(ts.samples))
    emax = float(env.max())
    if emax == 0.0:
        raise ValueError("trace is identically zero")
    idx, _ = find_peaks(env, height=min_rel_height * emax, prominence=min_rel_height * emax)
    if len(idx) == 0:
        idx = np.array([int(env.argmax())])

    def refine(i: int) -> float:
        if 0 < i < len(env) - 1:
            denom = env[i - 1] - 2.0 * env[i] + env[i + 1]
            if denom < 0:
                return i + 0.5 * (env[i - 1] - env[i + 1]) / denom
        return float(i)

    peaks = sorted(((ts.t0 + refine(i) / ts.sample_rate, float(env[i])) for i in idx),
                   key=lambda p: p[0])
    main_t, main_a = max(peaks, key=lambda p: p[1])
    ambiguous = sum(1 for _, a in peaks if a > AMBIGUITY_RATIO * main_a) > 1
    return PulseMetrics(arrival=main_t, peak_amp=main_a, ambiguous=ambiguous, peaks=peaks)


def pulse_asymmetry(v21: TimeSeries, v12: TimeSeries, vin: TimeSeries) -> float:
    """(|V21|^2 - |V12|^2) / |Vin|^2 from peak envelope amplitudes.

    All three traces must come from the same pulse shape; ambiguous peak
    structure in any trace raises rather than returning a misleading value.
    """
    metrics = [pulse_metrics(t) for t in (v21, v12, vin)]
    names = ("v21", "v12", "vin")
    bad = [n for n, m in zip(names, metrics) if m.ambiguous]
    if bad:
        raise AmbiguousPulseError(f"ambiguous envelope peaks in: {', '.join(bad)}")
    m21, m12, mref = metrics
    return (m21.peak_amp ** 2 - m12.peak_amp ** 2) / mref.peak_amp ** 2
