import numpy as np
import pytest

from helpers import balanced_ring_closed_form
from ringsim import (
    FrequencyGrid,
    RingParams,
    asymmetry_spectrum,
    attenuation_sweep,
    band_average,
    build_ring,
    noise_transmission,
    sweep,
)


class TestAsymmetrySpectrum:
    def test_reciprocal_network_identically_zero(self):
        params = RingParams(0.3, gamma_upper=0.2, gamma_lower=0.2,
                            gyrator_mode="ideal", gyrator_phase=0.0)
        spectrum = sweep(build_ring(params), FrequencyGrid(8e9, 9e9, 301))
        assert np.max(np.abs(asymmetry_spectrum(spectrum))) < 1e-12

    def test_unitary_ring_zero_pointwise(self, lossless_spectrum):
        assert np.max(np.abs(asymmetry_spectrum(lossless_spectrum))) < 1e-12

    def test_bounded(self, ring_params_06):
        spectrum = sweep(build_ring(ring_params_06.with_gamma(0.5, 0.5)),
                         FrequencyGrid(7e9, 12.4e9, 501))
        p = asymmetry_spectrum(spectrum)
        assert np.all(p <= 1.0) and np.all(p >= -1.0)

    def test_band_mean_at_018_np(self, ring_params_06):
        grid = FrequencyGrid(8.25e9, 8.75e9, 1001)
        spectrum = sweep(build_ring(ring_params_06.with_gamma(0.18, 0.18)), grid)
        mean = band_average(asymmetry_spectrum(spectrum), grid, 8.25e9, 8.75e9)
        assert mean == pytest.approx(0.28, abs=0.03)

    def test_requires_two_ports(self):
        from ringsim import Netlist, PortRef, Termination
        net = Netlist([("t", Termination("open"))], [], [PortRef("t", 0)])
        spectrum = sweep(net, FrequencyGrid(8e9, 9e9, 11))
        with pytest.raises(ValueError):
            asymmetry_spectrum(spectrum)


class TestBandAverage:
    def test_constant_series(self):
        grid = FrequencyGrid(8e9, 9e9, 101)
        assert band_average(np.full(101, 0.37), grid, 8.2e9, 8.8e9) == pytest.approx(0.37)

    def test_empty_band_rejected(self):
        grid = FrequencyGrid(8e9, 9e9, 101)
        with pytest.raises(ValueError):
            band_average(np.zeros(101), grid, 9.5e9, 9.6e9)

    def test_translation_invariance_over_one_period(self, ring_params_06):
        # averaging a periodic series over exactly one period barely moves
        # when the window slides by a quarter period
        params = ring_params_06.with_gamma(0.18, 0.18)
        delta = params.comb_spacing
        grid = FrequencyGrid(8e9, 10e9, 4001)
        p = asymmetry_spectrum(sweep(build_ring(params), grid))
        a = band_average(p, grid, 8.3e9, 8.3e9 + delta)
        b = band_average(p, grid, 8.3e9 + delta / 4, 8.3e9 + 5 * delta / 4)
        assert abs(a - b) < 0.01 * abs(a)


class TestAttenuationSweep:
    def test_frequency_mode_bell_curve(self, ring_params_06):
        gammas = np.arange(0.0, 0.91, 0.05)
        curve = attenuation_sweep(ring_params_06, gammas, (8.25e9, 8.75e9),
                                  mode="frequency", band_points=301)
        assert curve.values[0] == pytest.approx(0.0, abs=1e-10)
        assert curve.rises_then_falls
        assert curve.argmax_gamma == pytest.approx(0.3, abs=0.07)
        assert np.all(curve.values[1:] > 0)

    def test_uniform_loss_gives_head_start(self, ring_params_06):
        from dataclasses import replace
        params = replace(ring_params_06, uniform_loss_on=True)
        curve = attenuation_sweep(params, [0.0, 0.1], (8.25e9, 8.75e9),
                                  mode="frequency", band_points=201)
        assert curve.values[0] > 0.05

    def test_unbalanced_variant_places_total_on_one_bond(self, ring_params_06):
        gammas = [0.1, 0.2]
        curve = attenuation_sweep(ring_params_06, gammas, (8.25e9, 8.75e9),
                                  mode="frequency", balanced=False, band_points=201)
        # spot check against a hand-built unbalanced ring at gamma_half = 0.2
        grid = FrequencyGrid(8.25e9, 8.75e9, 201)
        manual = sweep(build_ring(ring_params_06.with_gamma(0.0, 0.4)), grid)
        expected = band_average(asymmetry_spectrum(manual), grid, 8.25e9, 8.75e9)
        assert curve.values[1] == pytest.approx(expected, rel=1e-12)

    def test_time_mode_tracks_frequency_mode(self, ring_params_06):
        gammas = [0.0, 0.15, 0.3, 0.6]
        freq = attenuation_sweep(ring_params_06, gammas, (8.25e9, 8.75e9),
                                 mode="frequency", band_points=301)
        time = attenuation_sweep(ring_params_06, gammas, (8.25e9, 8.75e9), mode="time")
        assert np.max(np.abs(freq.values - time.values)) < 0.03

    def test_rejects_unsorted_gammas(self, ring_params_06):
        with pytest.raises(ValueError):
            attenuation_sweep(ring_params_06, [0.3, 0.1], (8.25e9, 8.75e9))


class TestNoise:
    def test_reciprocal_network_ratio_one(self):
        params = RingParams(0.3, gamma_upper=0.2, gamma_lower=0.2,
                            gyrator_mode="ideal", gyrator_phase=0.0,
                            uniform_loss_on=True)
        report = noise_transmission(params, FrequencyGrid(8e9, 9e9, 201), block=10)
        assert np.allclose(report.ratio, 1.0, atol=1e-12)
        assert report.mean_ratio == pytest.approx(1.0, abs=1e-12)

    def test_block_one_is_identity(self, experiment_params):
        report = noise_transmission(experiment_params, FrequencyGrid(8e9, 9e9, 101),
                                    block=1)
        assert np.array_equal(report.np21_blocked, report.np21)

    def test_block_averaging_replaces_groups_with_their_mean(self, experiment_params):
        report = noise_transmission(experiment_params, FrequencyGrid(8e9, 9e9, 120),
                                    block=50)
        for start in (0, 50, 100):
            seg = slice(start, min(start + 50, 120))
            assert np.allclose(report.np21_blocked[seg], np.mean(report.np21[seg]))

    def test_incoherent_ratio_equals_coherent_ratio_pointwise(self, experiment_params):
        grid = FrequencyGrid(8e9, 9e9, 301)
        report = noise_transmission(experiment_params, grid, block=50)
        spectrum = sweep(build_ring(experiment_params), grid)
        coherent = np.abs(spectrum.s(2, 1)) ** 2 / np.abs(spectrum.s(1, 2)) ** 2
        assert np.allclose(report.ratio, coherent, rtol=1e-12)

    def test_uniform_loss_ratio_matches_closed_form(self, experiment_params):
        # |S12| = |w| |S21| for the balanced ring, so the ratio is the
        # squared two-bond uniform-loss factor
        grid = FrequencyGrid(8e9, 9e9, 101)
        report = noise_transmission(experiment_params, grid, block=50)
        s = balanced_ring_closed_form(grid.frequencies, 0.43855, 0.0,
                                      uniform_loss=True)
        expected = np.abs(s[:, 1, 0]) ** 2 / np.abs(s[:, 0, 1]) ** 2
        assert np.allclose(report.ratio, expected, rtol=1e-10)

    def test_stochastic_mode_is_seeded_and_converges(self, experiment_params):
        grid = FrequencyGrid(8e9, 9e9, 101)
        a = noise_transmission(experiment_params, grid, block=10,
                               realizations=2000, seed=7)
        b = noise_transmission(experiment_params, grid, block=10,
                               realizations=2000, seed=7)
        assert a.stochastic_mean_ratio == b.stochastic_mean_ratio
        assert a.stochastic_mean_ratio == pytest.approx(a.mean_ratio, rel=0.05)

    def test_block_must_be_positive(self, experiment_params):
        with pytest.raises(ValueError):
            noise_transmission(experiment_params, FrequencyGrid(8e9, 9e9, 11), block=0)
