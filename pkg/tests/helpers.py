"""Independent oracles used by the tests.

These rebuild the ring response from first principles (multiple-scattering
winding sums) instead of the block-interconnection solve, so agreement is
a genuine cross-check, not a tautology.
"""
from __future__ import annotations

import numpy as np
from scipy.constants import c as C0

from ringsim.elements import CoaxSpec, attenuation_rate


def bond_factor(f: float, electrical_length: float, coax: CoaxSpec | None,
                uniform_loss: bool) -> complex:
    """One-way transmission of a matched bond of the given electrical length."""
    eta = attenuation_rate(f, coax) if uniform_loss else 0.0
    return np.exp((1j * 2.0 * np.pi * f - eta) * electrical_length / C0)


def ring_path_sum(f: float, ell_e: float, gamma_upper: float, gamma_lower: float,
                  coax: CoaxSpec | None = None, uniform_loss: bool = False,
                  gyrator_phase: float = np.pi, max_windings: int = 64,
                  tol: float = 1e-12) -> np.ndarray:
    """2x2 ring S-matrix by explicit winding iteration.

    Launch a unit wave into one port, split it at the tee, bounce the two
    branch amplitudes back and forth between the tees (each tee applies its
    reflection -1/3 / cross-coupling 2/3), and accumulate whatever leaks out
    of the external ports. Stops when the circulating amplitude drops below
    tol or after max_windings round trips.
    """
    z = bond_factor(f, ell_e, coax, uniform_loss)
    gu = np.exp(-gamma_upper)
    gl = np.exp(-gamma_lower)
    up = z * gu                       # upper bond, either direction
    down_lr = z * gl                  # lower bond, left -> right
    down_rl = np.exp(1j * gyrator_phase) * z * gl  # lower bond, right -> left

    tee = np.array([[-1.0, 2.0], [2.0, -1.0]]) / 3.0
    out_row = np.array([2.0, 2.0]) / 3.0  # leak into the external lead

    def response(inject_left: bool) -> tuple[complex, complex]:
        # amplitudes arriving at the far tee on (upper, lower)
        if inject_left:
            arriving = (2.0 / 3.0) * np.array([up, down_lr])
        else:
            arriving = (2.0 / 3.0) * np.array([up, down_rl])
        transmitted = 0.0 + 0.0j
        reflected = -1.0 / 3.0 + 0.0j
        toward_far = True  # the launched wave reaches the far tee first
        for _ in range(2 * max_windings):
            if np.max(np.abs(arriving)) < tol:
                break
            if toward_far:
                transmitted += out_row @ arriving
            else:
                reflected += out_row @ arriving
            sent = tee @ arriving
            if toward_far:
                # heading back toward the injection side
                prop = np.array([up, down_rl if inject_left else down_lr])
            else:
                prop = np.array([up, down_lr if inject_left else down_rl])
            arriving = prop * sent
            toward_far = not toward_far
        return transmitted, reflected

    s21, s11 = response(inject_left=True)
    s12, s22 = response(inject_left=False)
    return np.array([[s11, s12], [s21, s22]])


def balanced_ring_closed_form(f, ell_e: float, gamma_half: float,
                              coax: CoaxSpec | None = None,
                              uniform_loss: bool = False) -> np.ndarray:
    """Closed-form balanced ring with a pi gyrator (winding geometric series
    summed analytically): S21 = (8/9) z g / (1 - (zg)^4 / 9), S12 = (zg)^2 S21,
    S11 = S22 = ((zg)^4 - 1) / (3 (1 - (zg)^4 / 9))."""
    f = np.asarray(f, dtype=float)
    z = bond_factor(f, ell_e, coax, uniform_loss)
    g = np.exp(-gamma_half)
    w = (z * g) ** 2
    denom = 1.0 - w**2 / 9.0
    s21 = (8.0 / 9.0) * z * g / denom
    s12 = w * s21
    s11 = (w**2 - 1.0) / (3.0 * denom)
    out = np.empty(f.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = s11
    out[..., 0, 1] = s12
    out[..., 1, 0] = s21
    out[..., 1, 1] = s11
    return out
