"""Report figures. Imported only by the CLI report path, never by the
computation modules."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_spectrum",
    "plot_delays",
    "plot_asymmetry_curve",
    "plot_time_traces",
    "plot_noise",
    "plot_pz_trajectories",
]


def _save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spectrum(spectrum, path: str) -> str:
    f = spectrum.grid.frequencies / 1e9
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.plot(f, np.abs(spectrum.s(2, 1)), label="|S21|")
    ax1.plot(f, np.abs(spectrum.s(1, 2)), label="|S12|", ls="--")
    ax1.set_ylabel("|S|")
    ax1.legend()
    p = np.abs(spectrum.s(2, 1)) ** 2 - np.abs(spectrum.s(1, 2)) ** 2
    ax2.plot(f, p, color="green")
    ax2.axhline(p.mean(), color="green", ls="--", lw=1)
    ax2.set_ylabel("P21 - P12")
    ax2.set_xlabel("frequency (GHz)")
    return _save(fig, path)


def plot_delays(delays: dict, path: str) -> str:
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, d in delays.items():
        f = d.grid.frequencies[d.valid] / 1e9
        tau = d.values[d.valid].real / 1e-9
        ax.plot(f, tau, label=label)
        ax.axhline(tau.mean(), ls="--", lw=1, color=ax.lines[-1].get_color())
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("Re delay (ns)")
    ax.legend()
    return _save(fig, path)


def plot_asymmetry_curve(curve, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(curve.gamma_half, curve.values, marker="o", ms=3)
    ax.axvline(curve.argmax_gamma, ls=":", lw=1, color="gray")
    ax.set_xlabel("per-bond attenuation (Np)")
    ylabel = "<P21 - P12>" if curve.mode == "frequency" else "pulse asymmetry"
    ax.set_ylabel(ylabel)
    return _save(fig, path)


def plot_time_traces(traces: dict, path: str) -> str:
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, ts in traces.items():
        ax.plot(ts.times / 1e-9, ts.samples, label=label, lw=0.8)
    ax.set_xlabel("time (ns)")
    ax.set_ylabel("voltage (V)")
    ax.legend()
    return _save(fig, path)


def plot_noise(report, path: str) -> str:
    f = report.grid.frequencies / 1e9
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    ax1.plot(f, report.np21_blocked, label="NP21 (blocked)")
    ax1.plot(f, report.np12_blocked, label="NP12 (blocked)", ls="--")
    ax1.set_ylabel("transmitted power")
    ax1.legend()
    ax2.plot(f, report.ratio_blocked, color="purple")
    ax2.axhline(report.mean_ratio, color="purple", ls="--", lw=1)
    ax2.set_ylabel("NP21 / NP12")
    ax2.set_xlabel("frequency (GHz)")
    return _save(fig, path)


def plot_pz_trajectories(scan, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    cmap = plt.get_cmap("viridis")
    n = len(scan.gamma_half)
    for k, fit in enumerate(scan.fits):
        color = cmap(k / max(n - 1, 1))
        pzs = fit.pole_zero_set
        zr = [m.z_re / 1e9 for m in pzs.modes]
        zi = [(m.z_im - pzs.eta) / 1e9 for m in pzs.modes]
        pr = [m.f_n / 1e9 for m in pzs.modes]
        pi = [-(m.gamma_n + pzs.eta) / 1e9 for m in pzs.modes]
        ax.plot(zr, zi, "d", color=color, ms=4)
        ax.plot(pr, pi, "s", color=color, ms=4)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("Re f (GHz)")
    ax.set_ylabel("Im f (GHz)")
    ax.set_title("zeros (diamonds) and poles (squares) vs attenuation")
    return _save(fig, path)
