"""Complex time delays from S-matrix spectra.

The complex transmission delay of a trace S(f) is

    tau(f) = -(i / 2 pi) * (dS/df) / S

(the derivative is taken with respect to angular frequency, so values come
out in seconds: a matched line of electrical length L_e gives Re tau =
L_e/c). The complex Wigner-Smith delay generalizes this to the full
matrix via det S with a 1/M prefactor. Derivatives use second-order
central differences on the grid; the two endpoints fall back to one-sided
differences and are flagged invalid for statistics.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sweep import FrequencyGrid, FrequencySpectrum

__all__ = ["ComplexDelaySpectrum", "transmission_delay", "wigner_smith_delay", "band_mean"]

MAGNITUDE_FLOOR = 1e-14


@dataclass
class ComplexDelaySpectrum:
    grid: FrequencyGrid
    values: np.ndarray  # complex seconds, NaN where invalid
    valid: np.ndarray   # bool mask
    kind: str           # "transmission(i->j)" or "wigner_smith"

    def __post_init__(self):
        if len(self.values) != self.grid.n_points or len(self.valid) != self.grid.n_points:
            raise ValueError("delay arrays must match the grid length")


def _quotient_delay(trace: np.ndarray, grid: FrequencyGrid, scale: float,
                    kind: str) -> ComplexDelaySpectrum:
    h = grid.step
    n = len(trace)
    deriv = np.empty(n, dtype=complex)
    deriv[1:-1] = (trace[2:] - trace[:-2]) / (2.0 * h)
    deriv[0] = (trace[1] - trace[0]) / h
    deriv[-1] = (trace[-1] - trace[-2]) / h

    valid = np.abs(trace) > MAGNITUDE_FLOOR
    values = np.full(n, np.nan + 1j * np.nan, dtype=complex)
    np.divide(deriv, trace, out=values, where=valid)
    values *= -1j * scale / (2.0 * np.pi)
    valid = valid & np.isfinite(values)
    # one-sided endpoints are kept but excluded from statistics
    valid[0] = valid[-1] = False
    return ComplexDelaySpectrum(grid, values, valid, kind)


def transmission_delay(spectrum: FrequencySpectrum, from_port: int,
                       to_port: int) -> ComplexDelaySpectrum:
    """Complex transmission delay of S_{to,from} (1-based ports)."""
    trace = spectrum.s(to_port, from_port)
    return _quotient_delay(trace, spectrum.grid, 1.0,
                           f"transmission({from_port}->{to_port})")


def wigner_smith_delay(spectrum: FrequencySpectrum) -> ComplexDelaySpectrum:
    """Complex Wigner-Smith delay -(i / 2 pi M) d/df log det S."""
    det = np.linalg.det(spectrum.matrices)
    m = spectrum.n_ports
    return _quotient_delay(det, spectrum.grid, 1.0 / m, "wigner_smith")


def band_mean(delay: ComplexDelaySpectrum, f_lo: float | None = None,
              f_hi: float | None = None) -> complex:
    """Arithmetic mean of the delay over [f_lo, f_hi], skipping invalid points."""
    f = delay.grid.frequencies
    lo = delay.grid.f_start if f_lo is None else f_lo
    hi = delay.grid.f_stop if f_hi is None else f_hi
    mask = delay.valid & (f >= lo) & (f <= hi)
    if not np.any(mask):
        raise ValueError("no valid delay points in the requested band")
    return complex(np.mean(delay.values[mask]))
