import numpy as np
import pytest
from scipy.constants import c as C0
from scipy.signal import hilbert

from ringsim import (
    DEFAULT_COAX,
    FrequencyGrid,
    Line,
    LineSpec,
    Netlist,
    PortRef,
    PulseSpec,
    RingParams,
    band_mean,
    build_ring,
    gaussian_pulse,
    propagate,
    pulse_asymmetry,
    pulse_metrics,
    sweep,
    transmission_delay,
)
from ringsim.metrics import pulse_band_grid
from ringsim.pulse import AmbiguousPulseError, BandMismatchError, TimeSeries


def _line_netlist(ell, lossless=True):
    spec = LineSpec.from_electrical(DEFAULT_COAX, ell, lossless_override=lossless)
    return Netlist([("l", Line(spec))], [], [PortRef("l", 0), PortRef("l", 1)])


def _wideband_spectrum(netlist):
    return sweep(netlist, FrequencyGrid(0.1e9, 31e9, 4001))


STD_PULSE = PulseSpec(fc=8.5e9, fwhm=1e-9, t_center=8e-9)


class TestGaussianPulse:
    def test_peak_value_at_center(self):
        ts = gaussian_pulse(STD_PULSE)
        i = int(round(8e-9 * ts.sample_rate))
        assert ts.samples[i] == pytest.approx(1.0, rel=1e-12)

    def test_envelope_half_maximum_at_half_width(self):
        ts = gaussian_pulse(STD_PULSE)
        env = np.abs(hilbert(ts.samples))
        for sign in (-1, 1):
            i = int(round((8e-9 + sign * 0.5e-9) * ts.sample_rate))
            assert env[i] == pytest.approx(0.5, rel=0.01)

    def test_spectrum_peaks_at_carrier_with_about_one_ghz_bandwidth(self):
        ts = gaussian_pulse(STD_PULSE)
        mag = np.abs(np.fft.rfft(ts.samples))
        f = np.fft.rfftfreq(len(ts.samples), 1.0 / ts.sample_rate)
        assert f[np.argmax(mag)] == pytest.approx(8.5e9, abs=2 * f[1])
        above = f[mag > 0.5 * mag.max()]
        fwhm = above.max() - above.min()
        assert 0.7e9 < fwhm < 1.1e9

    def test_undersampled_rate_rejected(self):
        with pytest.raises(ValueError):
            gaussian_pulse(STD_PULSE, sample_rate=16e9)

    def test_duration_must_cover_five_widths(self):
        with pytest.raises(ValueError):
            gaussian_pulse(PulseSpec(fc=8.5e9, fwhm=1e-9, t_center=2e-9), duration=4e-9)
        with pytest.raises(ValueError):
            gaussian_pulse(PulseSpec(fc=8.5e9, fwhm=1e-9, t_center=62e-9), duration=64e-9)


class TestPropagate:
    def test_identity_network_returns_the_input(self):
        spectrum = _wideband_spectrum(_line_netlist(0.0))
        vin = gaussian_pulse(STD_PULSE)
        out = propagate(spectrum, vin, 1, 2)
        assert np.max(np.abs(out.samples - vin.samples)) < 1e-9

    def test_lossless_line_shifts_arrival_by_transit_time(self):
        spectrum = _wideband_spectrum(_line_netlist(0.3))
        vin = gaussian_pulse(STD_PULSE)
        out = propagate(spectrum, vin, 1, 2)
        shift = pulse_metrics(out).arrival - pulse_metrics(vin).arrival
        assert shift == pytest.approx(0.3 / C0, rel=1e-3)
        assert pulse_metrics(out).peak_amp == pytest.approx(1.0, rel=1e-6)

    def test_linearity_exact_for_power_of_two_scale(self):
        spectrum = _wideband_spectrum(_line_netlist(0.3))
        vin = gaussian_pulse(STD_PULSE)
        a = propagate(spectrum, vin.scaled(2.0), 1, 2)
        b = propagate(spectrum, vin, 1, 2)
        assert np.array_equal(a.samples, 2.0 * b.samples)

    def test_linearity_general_scale(self):
        spectrum = _wideband_spectrum(_line_netlist(0.3))
        vin = gaussian_pulse(STD_PULSE)
        a = propagate(spectrum, vin.scaled(0.37), 1, 2)
        b = propagate(spectrum, vin, 1, 2)
        assert np.allclose(a.samples, 0.37 * b.samples, rtol=1e-12, atol=1e-15)

    def test_out_of_band_energy_rejected(self):
        narrow = sweep(_line_netlist(0.3), FrequencyGrid(8.4e9, 8.6e9, 101))
        vin = gaussian_pulse(STD_PULSE)
        with pytest.raises(BandMismatchError) as err:
            propagate(narrow, vin, 1, 2)
        assert "energy" in str(err.value)

    def test_passive_network_cannot_gain_energy(self, ring_params_06):
        vin = gaussian_pulse(STD_PULSE)
        grid = pulse_band_grid(8.5e9, 1e-9, vin.sample_rate, len(vin.samples))
        spectrum = sweep(build_ring(ring_params_06.with_gamma(0.1, 0.1)), grid)
        out = propagate(spectrum, vin, 1, 2)
        assert np.sum(out.samples**2) <= np.sum(vin.samples**2)

    def test_reflection_port_works(self, ring_params_06):
        vin = gaussian_pulse(STD_PULSE)
        grid = pulse_band_grid(8.5e9, 1e-9, vin.sample_rate, len(vin.samples))
        spectrum = sweep(build_ring(ring_params_06), grid)
        refl = propagate(spectrum, vin, 1, 1)
        m = pulse_metrics(refl)
        # the tee reflects -1/3 of the incident wave with no delay
        assert m.arrival == pytest.approx(8e-9, abs=0.05e-9)
        assert m.peak_amp == pytest.approx(1.0 / 3.0, rel=0.05)


class TestPulseMetrics:
    def test_on_the_pulse_itself(self):
        m = pulse_metrics(gaussian_pulse(STD_PULSE))
        assert m.arrival == pytest.approx(8e-9, abs=1e-12)
        assert m.peak_amp == pytest.approx(1.0, rel=1e-6)
        assert not m.ambiguous

    def test_two_comparable_pulses_flag_ambiguity(self):
        rate, n = 64e9, 4096
        t = np.arange(n) / rate
        def burst(t0, amp):
            return amp * np.exp(-4 * np.log(2) * ((t - t0) / 1e-9) ** 2) \
                * np.cos(2 * np.pi * 8.5e9 * (t - t0))
        ts = TimeSeries(rate, 0.0, burst(8e-9, 1.0) + burst(20e-9, 0.8))
        m = pulse_metrics(ts)
        assert m.ambiguous
        assert len(m.peaks) == 2

    def test_zero_trace_rejected(self):
        with pytest.raises(ValueError):
            pulse_metrics(TimeSeries(64e9, 0.0, np.zeros(1024)))

    def test_attenuated_transit_amplitude(self):
        """Peak reduction through a 0.35 Np single pass matches the
        band-mean |S21| of the swept network (frequency-domain oracle)."""
        from ringsim import Attenuator
        spec = LineSpec.from_electrical(DEFAULT_COAX, 0.3, lossless_override=True)
        net = Netlist(
            [("l", Line(spec)), ("a", Attenuator(0.35))],
            [(PortRef("l", 1), PortRef("a", 0))],
            [PortRef("l", 0), PortRef("a", 1)],
        )
        vin = gaussian_pulse(STD_PULSE)
        grid = pulse_band_grid(8.5e9, 1e-9, vin.sample_rate, len(vin.samples))
        spectrum = sweep(net, grid)
        out = propagate(spectrum, vin, 1, 2)
        ratio = pulse_metrics(out).peak_amp / pulse_metrics(vin).peak_amp
        oracle = float(np.mean(np.abs(spectrum.s(2, 1))))
        assert ratio == pytest.approx(np.exp(-0.35), rel=0.05)
        assert ratio == pytest.approx(oracle, rel=0.05)


class TestPulseAsymmetry:
    def test_reciprocal_network_is_symmetric(self):
        spectrum = _wideband_spectrum(_line_netlist(0.3))
        vin = gaussian_pulse(STD_PULSE)
        v21 = propagate(spectrum, vin, 1, 2)
        v12 = propagate(spectrum, vin, 2, 1)
        assert pulse_asymmetry(v21, v12, vin) == pytest.approx(0.0, abs=1e-12)

    def test_lossless_ring_is_symmetric(self, ring_params_06):
        vin = gaussian_pulse(STD_PULSE)
        grid = pulse_band_grid(8.5e9, 1e-9, vin.sample_rate, len(vin.samples))
        spectrum = sweep(build_ring(ring_params_06), grid)
        v21 = propagate(spectrum, vin, 1, 2)
        v12 = propagate(spectrum, vin, 2, 1)
        assert abs(pulse_asymmetry(v21, v12, vin)) < 1e-9

    def test_ambiguity_propagates(self):
        rate, n = 64e9, 4096
        t = np.arange(n) / rate
        two = np.cos(2 * np.pi * 8.5e9 * t) * (
            np.exp(-4 * np.log(2) * ((t - 8e-9) / 1e-9) ** 2)
            + 0.9 * np.exp(-4 * np.log(2) * ((t - 20e-9) / 1e-9) ** 2))
        bad = TimeSeries(rate, 0.0, two)
        good = gaussian_pulse(STD_PULSE)
        with pytest.raises(AmbiguousPulseError):
            pulse_asymmetry(bad, good, good)


def test_arrival_difference_matches_band_mean_delay_difference(ring_params_06):
    """Time-frequency consistency: pulse arrivals reproduce the band-mean
    transmission delays within 3%."""
    vin = gaussian_pulse(STD_PULSE)
    grid = pulse_band_grid(8.5e9, 1e-9, vin.sample_rate, len(vin.samples))
    spectrum = sweep(build_ring(ring_params_06), grid)
    v21 = propagate(spectrum, vin, 1, 2)
    v12 = propagate(spectrum, vin, 2, 1)
    dt_pulse = pulse_metrics(v12).arrival - pulse_metrics(v21).arrival

    lo, hi = 8.5e9 - 0.5e9, 8.5e9 + 0.5e9
    m12 = band_mean(transmission_delay(spectrum, 2, 1), lo, hi).real
    m21 = band_mean(transmission_delay(spectrum, 1, 2), lo, hi).real
    assert dt_pulse == pytest.approx(m12 - m21, rel=0.03)
