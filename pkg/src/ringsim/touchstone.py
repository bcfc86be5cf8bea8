"""Touchstone v1 reader/writer (HZ / S / RI only).

The writer emits 2-port .s2p files in the canonical S11 S21 S12 S22 column
order with 12 significant digits. The reader additionally accepts .s1p
and .s3p (the bundled ideal-circulator fixture is a 3-port file); data may
wrap across lines. Frequencies must be ascending and uniformly spaced so
the result maps onto a FrequencyGrid.
"""
from __future__ import annotations

import os

import numpy as np

from .sweep import FrequencyGrid, FrequencySpectrum

__all__ = ["UnsupportedFormatError", "read_touchstone", "write_touchstone"]


class UnsupportedFormatError(ValueError):
    pass


def _port_count(path: str) -> int:
    ext = os.path.splitext(path)[1].lower()
    if len(ext) == 4 and ext.startswith(".s") and ext.endswith("p") and ext[2].isdigit():
        n = int(ext[2])
        if n > 3:
            raise UnsupportedFormatError(f"unsupported: {n}-port file {path!r} (max 3 ports)")
        if n >= 1:
            return n
    raise UnsupportedFormatError(f"cannot infer port count from extension of {path!r}")


def _check_option_line(tokens: list[str]) -> None:
    # Touchstone option line: # <freq unit> <parameter> <format> R <n>
    allowed = {"HZ", "S", "RI", "R"}
    for tok in tokens:
        up = tok.upper()
        if up in allowed:
            continue
        try:
            float(tok)
            continue  # reference resistance value
        except ValueError:
            pass
        raise UnsupportedFormatError(f"unsupported: {tok}")


def read_touchstone(path: str) -> FrequencySpectrum:
    n = _port_count(path)
    values: list[float] = []
    saw_options = False
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("!", 1)[0].strip()
            if not line:
                continue
            if line.startswith("#"):
                _check_option_line(line[1:].split())
                saw_options = True
                continue
            values.extend(float(tok) for tok in line.split())
    if not saw_options:
        raise UnsupportedFormatError(f"missing '#' option line in {path!r}")

    per_point = 1 + 2 * n * n
    if not values or len(values) % per_point:
        raise UnsupportedFormatError(
            f"{path!r}: expected multiples of {per_point} values per frequency point")
    data = np.asarray(values).reshape(-1, per_point)
    freqs = data[:, 0]
    if np.any(np.diff(freqs) <= 0):
        raise UnsupportedFormatError(f"{path!r}: frequencies must be strictly ascending")
    steps = np.diff(freqs)
    if len(steps) and not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise UnsupportedFormatError(f"{path!r}: frequency grid is not uniform")

    pairs = data[:, 1:].reshape(-1, n * n, 2)
    cplx = pairs[:, :, 0] + 1j * pairs[:, :, 1]
    mats = np.empty((len(freqs), n, n), dtype=complex)
    if n == 2:
        # 2-port files order the pairs S11 S21 S12 S22
        mats[:, 0, 0] = cplx[:, 0]
        mats[:, 1, 0] = cplx[:, 1]
        mats[:, 0, 1] = cplx[:, 2]
        mats[:, 1, 1] = cplx[:, 3]
    else:
        mats[:] = cplx.reshape(-1, n, n)

    grid = FrequencyGrid(float(freqs[0]), float(freqs[-1]), len(freqs))
    return FrequencySpectrum(grid, mats)


def write_touchstone(spectrum: FrequencySpectrum, path: str) -> None:
    if spectrum.n_ports != 2:
        raise UnsupportedFormatError(
            f"only 2-port spectra are written as Touchstone, got {spectrum.n_ports} ports")
    m = spectrum.matrices
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("! 2-port scattering data\n")
        fh.write("# HZ S RI R 50\n")
        for f, s in zip(spectrum.grid.frequencies, m):
            row = [f, s[0, 0].real, s[0, 0].imag, s[1, 0].real, s[1, 0].imag,
                   s[0, 1].real, s[0, 1].imag, s[1, 1].real, s[1, 1].imag]
            fh.write(" ".join(f"{v:.12e}" for v in row) + "\n")
