"""Pole/zero mode model for the complex Wigner-Smith delay, and its fitter.

Each resonant mode n contributes a zero at Re[z_n] + i(Im[z_n] - eta) and a
pole at f_n - i(Gamma_n + eta) in the complex frequency plane (eta is the
uniform-attenuation offset in Hz, Gamma_n > 0 for a passive system). The
delay model is a sum of the corresponding Lorentzians:

  Re tau = k * sum_n [ (Im z_n - eta) / ((f - Re z_n)^2 + (Im z_n - eta)^2)
                       + (Gamma_n + eta) / ((f - f_n)^2 + (Gamma_n + eta)^2) ]
  Im tau = -k * sum_n [ (f - Re z_n) / ((f - Re z_n)^2 + (Im z_n - eta)^2)
                        - (f - f_n)  / ((f - f_n)^2  + (Gamma_n + eta)^2) ]

with k = 1/(2 pi M), matching the seconds-valued delays produced by the
delays module. Fitting is damped least squares (Levenberg-Marquardt) on
the stacked real/imaginary residuals with the analytic Jacobian.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import find_peaks

from .delays import ComplexDelaySpectrum, wigner_smith_delay
from .netlist import RingParams, build_ring
from .sweep import FrequencyGrid, sweep

__all__ = [
    "Mode",
    "PoleZeroSet",
    "FitResult",
    "ZeroCrossingScan",
    "model_delay",
    "fit_delay",
    "zero_crossing_scan",
]

MAX_ITER = 200
REL_TOL = 1e-10
LAMBDA0 = 1e-3
MAX_STEP = 0.02          # per-iteration parameter move, fraction of the band span
MACHINE_COST = 1e-18     # normalized cost treated as an exact fit


@dataclass(frozen=True)
class Mode:
    """One resonance: pole (f_n, Gamma_n) and zero (z_re, z_im), all in Hz."""

    f_n: float
    gamma_n: float
    z_re: float
    z_im: float


@dataclass(frozen=True)
class PoleZeroSet:
    modes: tuple
    eta: float = 0.0  # uniform attenuation offset, Hz
    m_ports: int = 2

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))

    def sorted(self) -> "PoleZeroSet":
        return replace(self, modes=tuple(sorted(self.modes, key=lambda m: m.f_n)))

    def to_vector(self) -> np.ndarray:
        return np.array([v for m in self.modes
                         for v in (m.f_n, m.gamma_n, m.z_re, m.z_im)])

    @classmethod
    def from_vector(cls, vec: np.ndarray, eta: float, m_ports: int) -> "PoleZeroSet":
        vec = np.asarray(vec, dtype=float)
        modes = tuple(Mode(*vec[4 * k:4 * k + 4]) for k in range(len(vec) // 4))
        return cls(modes, eta, m_ports)


def _terms(pzs: PoleZeroSet, f: np.ndarray):
    f = np.atleast_1d(np.asarray(f, dtype=float))
    vec = pzs.to_vector().reshape(-1, 4)
    u = f[None, :] - vec[:, 0:1]          # f - f_n
    wp = (vec[:, 1:2] + pzs.eta)          # Gamma_n + eta
    v = f[None, :] - vec[:, 2:3]          # f - Re z_n
    wz = (vec[:, 3:4] - pzs.eta)          # Im z_n - eta
    dp = u * u + wp * wp
    dz = v * v + wz * wz
    if np.any(dp == 0.0) or np.any(dz == 0.0):
        raise ValueError("pole or zero lies exactly on an evaluation frequency")
    return u, wp, dp, v, wz, dz


def model_delay(pzs: PoleZeroSet, f) -> np.ndarray | complex:
    """Complex Wigner-Smith delay (seconds) of the mode set at frequency f."""
    u, wp, dp, v, wz, dz = _terms(pzs, f)
    k = 1.0 / (2.0 * np.pi * pzs.m_ports)
    re = k * np.sum(wz / dz + wp / dp, axis=0)
    im = -k * np.sum(v / dz - u / dp, axis=0)
    out = re + 1j * im
    return complex(out[0]) if np.ndim(f) == 0 else out


def _jacobian(pzs: PoleZeroSet, f: np.ndarray, free_eta: bool) -> np.ndarray:
    """Analytic Jacobian of stacked [Re tau; Im tau] w.r.t. the parameter vector."""
    u, wp, dp, v, wz, dz = _terms(pzs, f)
    k = 1.0 / (2.0 * np.pi * pzs.m_ports)
    n_modes, nf = u.shape
    n_par = 4 * n_modes + (1 if free_eta else 0)
    jac = np.zeros((2 * nf, n_par))

    d_re_fn = k * 2.0 * u * wp / dp**2
    d_re_g = k * (u * u - wp * wp) / dp**2
    d_re_zre = k * 2.0 * v * wz / dz**2
    d_re_zim = k * (v * v - wz * wz) / dz**2
    # Im tau = k * sum(-v/dz + u/dp)
    d_im_fn = k * (u * u - wp * wp) / dp**2
    d_im_g = -k * 2.0 * u * wp / dp**2
    d_im_zre = k * (wz * wz - v * v) / dz**2
    d_im_zim = k * 2.0 * v * wz / dz**2

    for m in range(n_modes):
        jac[:nf, 4 * m + 0] = d_re_fn[m]
        jac[:nf, 4 * m + 1] = d_re_g[m]
        jac[:nf, 4 * m + 2] = d_re_zre[m]
        jac[:nf, 4 * m + 3] = d_re_zim[m]
        jac[nf:, 4 * m + 0] = d_im_fn[m]
        jac[nf:, 4 * m + 1] = d_im_g[m]
        jac[nf:, 4 * m + 2] = d_im_zre[m]
        jac[nf:, 4 * m + 3] = d_im_zim[m]
    if free_eta:
        # d wz/d eta = -1, d wp/d eta = +1
        jac[:nf, -1] = np.sum(-d_re_zim + d_re_g, axis=0)
        jac[nf:, -1] = np.sum(-d_im_zim + d_im_g, axis=0)
    return jac


@dataclass
class FitResult:
    pole_zero_set: PoleZeroSet
    residual_norm: float
    cost_history: list = field(default_factory=list)
    converged: bool = False
    n_iter: int = 0
    message: str = ""
    pole_confidence: tuple = ()   # per mode, False when |Im z| < 2 grid steps
    collinear: bool = False


def _auto_init(f: np.ndarray, re_tau: np.ndarray, n_modes: int, eta: float,
               m_ports: int) -> PoleZeroSet:
    """Place poles at the tallest Re tau peaks (min separation half a mode
    spacing), zeros at the conjugate positions."""
    span = f[-1] - f[0]
    step = f[1] - f[0]
    distance = max(1, int(round(span / (2 * n_modes) / step)))
    peaks, props = find_peaks(re_tau, distance=distance, height=0.0)
    if len(peaks) < n_modes:
        raise ValueError(f"auto-init found only {len(peaks)} peaks for {n_modes} modes")
    order = np.argsort(props["peak_heights"])[::-1][:n_modes]
    chosen = np.sort(peaks[order])
    modes = []
    for idx in chosen:
        width = 1.0 / (np.pi * m_ports * re_tau[idx])  # peak = 2k/width for a conjugate pair
        width = max(width, step)
        modes.append(Mode(f_n=f[idx], gamma_n=max(width - eta, 0.25 * step),
                          z_re=f[idx], z_im=width + eta))
    return PoleZeroSet(tuple(modes), eta, m_ports)


def fit_delay(delay: ComplexDelaySpectrum, n_modes: int,
              init: PoleZeroSet | None = None, eta: float = 0.0,
              free_eta: bool = False, max_iter: int = MAX_ITER) -> FitResult:
    """Least-squares fit of the mode model to a complex delay spectrum.

    eta is a known constant by default (pass free_eta=True to fit it). On
    non-convergence the best parameters so far are returned with a
    diagnostic message rather than an exception.
    """
    f_all = delay.grid.frequencies
    mask = delay.valid & np.isfinite(delay.values.real) & np.isfinite(delay.values.imag)
    f = f_all[mask]
    data = delay.values[mask]
    if len(f) < 8 * n_modes:
        raise ValueError("not enough valid points to constrain the fit")
    m_ports = 2 if delay.kind == "wigner_smith" else 1
    if init is None:
        pzs = _auto_init(f, data.real, n_modes, eta, m_ports)
    else:
        if len(init.modes) != n_modes:
            raise ValueError(f"init has {len(init.modes)} modes, expected {n_modes}")
        m_ports = init.m_ports
        pzs = PoleZeroSet(init.modes, eta, m_ports)

    target = np.concatenate([data.real, data.imag])
    f_scale = f[-1] - f[0]
    r_scale = max(float(np.sqrt(np.mean(np.abs(data) ** 2))), 1e-300)

    def residual(vec: np.ndarray) -> np.ndarray:
        trial = PoleZeroSet.from_vector(vec[:4 * n_modes], eta=vec[-1] if free_eta else eta,
                                        m_ports=m_ports)
        tau = model_delay(trial, f)
        return (np.concatenate([tau.real, tau.imag]) - target) / r_scale

    def in_bounds(vec: np.ndarray) -> bool:
        # keep modes near the band; runaway parameters make Lorentzians
        # vanish and let the cost decrease by effectively dropping a mode
        pars = vec[:4 * n_modes].reshape(-1, 4)
        centers_ok = np.all(np.abs(pars[:, [0, 2]] - f[0]) < 2.0 * f_scale + (f[-1] - f[0]))
        widths_ok = np.all(np.abs(pars[:, [1, 3]]) < 2.0 * f_scale)
        return bool(centers_ok and widths_ok)

    x = pzs.to_vector()
    if free_eta:
        x = np.append(x, eta)
    r = residual(x)
    cost = float(r @ r)
    history = [cost]
    lam = LAMBDA0
    converged = False
    collinear = False
    message = "iteration cap reached"
    it = 0

    for it in range(1, max_iter + 1):
        trial_set = PoleZeroSet.from_vector(x[:4 * n_modes],
                                            eta=x[-1] if free_eta else eta, m_ports=m_ports)
        with np.errstate(over="ignore", invalid="ignore"):
            jac = _jacobian(trial_set, f, free_eta) * (f_scale / r_scale)
        hess = jac.T @ jac
        grad = jac.T @ r
        diag = np.diag(hess).copy()
        if not np.all(np.isfinite(hess)):
            message = "non-finite Jacobian"
            break
        hess_cond = np.linalg.cond(hess)
        if not np.isfinite(hess_cond) or hess_cond > 1e14:
            collinear = True
        diag[diag <= 0] = 1.0

        accepted = False
        while lam < 1e14:
            try:
                step = np.linalg.solve(hess + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            biggest = float(np.max(np.abs(step)))
            if biggest > MAX_STEP:
                step = step * (MAX_STEP / biggest)
            x_new = x + step * f_scale
            if not in_bounds(x_new):
                lam *= 10.0
                continue
            try:
                r_new = residual(x_new)
            except ValueError:
                lam *= 10.0
                continue
            c_new = float(r_new @ r_new)
            if np.isfinite(c_new) and c_new < cost:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            if cost <= MACHINE_COST:
                converged = True
                message = "converged (machine precision)"
            else:
                message = "no further descent (damping exhausted)"
            break

        drop = cost - c_new
        x, r, cost = x_new, r_new, c_new
        history.append(cost)
        lam = max(lam * 0.3, 1e-12)
        if drop <= REL_TOL * max(cost, 1e-300):
            converged = True
            message = "converged"
            break

    final_eta = x[-1] if free_eta else eta
    result_set = PoleZeroSet.from_vector(x[:4 * n_modes], eta=final_eta,
                                         m_ports=m_ports).sorted()
    step_hz = delay.grid.step
    confidence = tuple(abs(m.z_im) >= 2.0 * step_hz for m in result_set.modes)
    return FitResult(
        pole_zero_set=result_set,
        residual_norm=float(np.sqrt(cost)) * r_scale,
        cost_history=history,
        converged=converged,
        n_iter=it,
        message=message,
        pole_confidence=confidence,
        collinear=collinear,
    )


@dataclass
class ZeroCrossingScan:
    gamma_half: np.ndarray
    fits: list
    mean_z_im: np.ndarray
    crossing_np: float | None
    monotone: bool
    max_re_drift_rel: float


def _comb_count(band: tuple, spacing: float) -> int:
    lo, hi = band
    half = spacing / 2.0
    n_lo = int(np.ceil(lo / half))
    n_hi = int(np.floor(hi / half))
    return max(0, n_hi - n_lo + 1)


def zero_crossing_scan(ring_params: RingParams, gamma_half_grid, band: tuple,
                       n_modes: int | None = None, grid_points: int = 3501,
                       workers: int | None = None) -> ZeroCrossingScan:
    """Track fitted zero/pole trajectories while sweeping the per-bond
    attenuation, and locate where the mean zero height crosses the real axis.

    Fits run in ascending gamma order, each warm-started from the previous
    solution (the first uses peak-picking auto-init). Returns the linearly
    interpolated crossing in Np, or None (monotone=True) when the scanned
    range contains no sign change.
    """
    gammas = np.asarray(list(gamma_half_grid), dtype=float)
    if len(gammas) < 2 or np.any(np.diff(gammas) <= 0):
        raise ValueError("gamma_half_grid must be ascending with at least 2 entries")
    if n_modes is None:
        n_modes = _comb_count(band, ring_params.comb_spacing)
    if n_modes < 1:
        raise ValueError("band contains no resonance combs")
    grid = FrequencyGrid(band[0], band[1], grid_points)

    fits: list[FitResult] = []
    for k, g in enumerate(gammas):
        netlist = build_ring(ring_params.with_gamma(g, g))
        spectrum = sweep(netlist, grid, workers=workers)
        delay = wigner_smith_delay(spectrum)

        inits: list[PoleZeroSet | None] = [None if k == 0 else fits[-1].pole_zero_set]
        if k >= 2:
            # secant continuation lets zero heights cross the real axis
            # without the fit having to squeeze through the Im z = 0 barrier
            prev, prev2 = fits[-1].pole_zero_set, fits[-2].pole_zero_set
            frac = (g - gammas[k - 1]) / (gammas[k - 1] - gammas[k - 2])
            vec = prev.to_vector() + frac * (prev.to_vector() - prev2.to_vector())
            inits.append(PoleZeroSet.from_vector(vec, prev.eta, prev.m_ports))

        best: FitResult | None = None
        for init in inits:
            try:
                res = fit_delay(delay, n_modes, init=init)
            except ValueError:
                continue
            if best is None or res.residual_norm < best.residual_norm:
                best = res
        if best is None:
            raise ValueError(f"no usable fit at gamma_half = {g} Np")
        fits.append(best)

    mean_z_im = np.array([np.mean([m.z_im for m in r.pole_zero_set.modes]) for r in fits])

    crossing = None
    for k in range(len(gammas) - 1):
        a, b = mean_z_im[k], mean_z_im[k + 1]
        if a > 0 >= b or a >= 0 > b:
            crossing = float(gammas[k] + (gammas[k + 1] - gammas[k]) * a / (a - b))
            break

    ref = fits[0].pole_zero_set.modes
    drift = 0.0
    for r in fits[1:]:
        for m0, m in zip(ref, r.pole_zero_set.modes):
            drift = max(drift, abs(m.f_n - m0.f_n) / abs(m0.f_n),
                        abs(m.z_re - m0.z_re) / abs(m0.z_re))
    return ZeroCrossingScan(
        gamma_half=gammas,
        fits=fits,
        mean_z_im=mean_z_im,
        crossing_np=crossing,
        monotone=crossing is None,
        max_re_drift_rel=float(drift),
    )
