"""Frequency sweeps: evaluate a netlist over a uniform grid."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .netlist import Netlist, assemble_batch

__all__ = ["FrequencyGrid", "FrequencySpectrum", "sweep", "default_workers"]

WORKERS_ENV = "RINGSIM_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency grid (non-uniform sampling is rejected up front)."""

    f_start: float
    f_stop: float
    n_points: int

    def __post_init__(self):
        if not (self.f_stop > self.f_start > 0):
            raise ValueError("need f_stop > f_start > 0")
        if self.n_points < 2:
            raise ValueError("need at least 2 grid points")

    @property
    def step(self) -> float:
        return (self.f_stop - self.f_start) / (self.n_points - 1)

    @property
    def frequencies(self) -> np.ndarray:
        return np.linspace(self.f_start, self.f_stop, self.n_points)

    def index_of(self, f: float) -> int:
        """Nearest grid index to f."""
        return int(round((f - self.f_start) / self.step))


# Desk-scale default: the 7-12.4 GHz hardware band at ~168.75 kHz steps.
DEFAULT_GRID = FrequencyGrid(7e9, 12.4e9, 32001)


@dataclass
class FrequencySpectrum:
    """Per-frequency external S-matrices, ordered by frequency."""

    grid: FrequencyGrid
    matrices: np.ndarray  # (F, E, E) complex

    def __post_init__(self):
        m = np.asarray(self.matrices)
        if m.ndim != 3 or m.shape[0] != self.grid.n_points or m.shape[1] != m.shape[2]:
            raise ValueError(f"matrices shape {m.shape} does not match grid "
                             f"({self.grid.n_points} points)")
        self.matrices = m.astype(complex)

    @property
    def n_ports(self) -> int:
        return self.matrices.shape[1]

    def s(self, to_port: int, from_port: int) -> np.ndarray:
        """S_{to,from} trace over the grid (1-based port numbers)."""
        return self.matrices[:, to_port - 1, from_port - 1]


def sweep(netlist: Netlist, grid: FrequencyGrid, workers: int | None = None) -> FrequencySpectrum:
    """Evaluate the netlist at every grid point.

    Work may be sharded across threads (the dense solves release the GIL);
    results are identical to a serial evaluation and are reassembled in
    grid order.
    """
    freqs = grid.frequencies
    workers = default_workers() if workers is None else max(1, int(workers))
    netlist.layout()  # validate once before any worker starts
    if workers == 1 or grid.n_points < 4 * workers:
        return FrequencySpectrum(grid, assemble_batch(netlist, freqs))

    bounds = np.linspace(0, grid.n_points, workers + 1).astype(int)
    chunks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    out = None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [(a, b, pool.submit(assemble_batch, netlist, freqs[a:b]))
                   for a, b in chunks]
        for a, b, fut in futures:
            block = fut.result()
            if out is None:
                e = block.shape[1]
                out = np.empty((grid.n_points, e, e), dtype=complex)
            out[a:b] = block
    return FrequencySpectrum(grid, out)
