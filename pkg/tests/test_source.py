import numpy as np
import pandas as pd
import pytest
from scipy import integrate, stats

from helpers.errors import DomainError, UndefinedStatisticError
from source import (
    CaptureModel,
    CaptureSimulator,
    DephasingModel,
    TradeoffModel,
    brightness,
    brightness_vs_power,
    calibrate_charge_noise,
    g2_vs_temperature,
    hom_indistinguishability,
    hom_vs_time_bin,
    intrinsic_overlap,
    operating_point,
    pump_probability,
    simulate_g2,
    stream_seed,
    tradeoff,
)


class TestCapture:
    """Multiple-capture Monte Carlo"""

    def test_quasi_resonant_g2_below_target(self):
        model = CaptureModel.quasi_resonant(r_x=1.0, seed=3)
        result = simulate_g2(model, 100_000)
        assert result.g2 + 3 * result.g2_err < 0.08
        assert result.mean_photons == pytest.approx(1.0, abs=0.05)

    def test_single_exciton_never_coincides(self):
        model = CaptureModel(n_qw=0.0, r_qw=1.0, r_cap=1.0, r_x=1.0, r_xx=2.0, qd_injection=1.0, seed=1)
        result = simulate_g2(model, 2_000)
        assert result.g2 == 0.0
        assert result.mean_photons == 1.0

    def test_histogram_layout(self):
        model = CaptureModel(n_qw=2.0, r_qw=0.5, r_cap=1.0, r_x=1.0, r_xx=2.0, seed=5, side_peaks=6)
        result = simulate_g2(model, 5_000)
        hist = result.histogram
        assert list(hist['separation']) == list(range(-6, 7))
        assert hist['delay_ns'].iloc[-1] == pytest.approx(6 * model.period)
        assert hist['coincidences'].iloc[0] == hist['coincidences'].iloc[-1]

    def test_seeded_runs_are_identical(self):
        model = CaptureModel(n_qw=1.5, r_qw=0.5, r_cap=1.0, r_x=1.0, r_xx=2.0, seed=9)
        first = simulate_g2(model, 10_000, n_streams=3)
        second = simulate_g2(model, 10_000, n_streams=3)
        assert first.g2 == second.g2
        pd.testing.assert_frame_equal(first.histogram, second.histogram)

    def test_streams_are_independent(self):
        assert stream_seed(1, 0) != stream_seed(1, 1)
        assert stream_seed(1, 0) == stream_seed(1, 0)

    def test_emission_record(self):
        model = CaptureModel(n_qw=1.0, r_qw=0.5, r_cap=1.0, r_x=1.0, r_xx=2.0, seed=2)
        record = CaptureSimulator(model).records(1_000)[0]
        assert len(record.photons) == record.counts.sum()
        assert (record.photons['t_ns'] >= record.photons['pulse'] * model.period).all()

    def test_no_photons(self):
        model = CaptureModel(n_qw=0.0, r_qw=1.0, r_cap=1.0, r_x=1.0, r_xx=2.0, seed=1)
        with pytest.raises(UndefinedStatisticError):
            simulate_g2(model, 100)

    def test_invalid_model(self):
        with pytest.raises(DomainError):
            CaptureModel(n_qw=-1.0, r_qw=1.0, r_cap=1.0, r_x=1.0, r_xx=2.0)
        with pytest.raises(DomainError):
            CaptureModel(n_qw=1.0, r_qw=1.0, r_cap=1.0, r_x=1.0, r_xx=2.0, side_peaks=2)

    def test_faster_exciton_raises_g2(self):
        g2 = [simulate_g2(CaptureModel(n_qw=1.0, r_qw=1.0, r_cap=1.0, r_x=r_x, r_xx=2 * r_x, seed=6), 20_000).g2
              for r_x in (0.1, 0.3, 1.0, 3.0, 10.0)]
        # a fast exciton empties before the barrier does and gets recaptured
        assert np.all(np.diff(g2) > 0)

    def test_rescaled_model_is_the_same_experiment(self):
        model = CaptureModel(n_qw=1.5, r_qw=0.5, r_cap=1.0, r_x=1.0, r_xx=2.0, seed=8)
        faster = model.rescaled(2.0)
        slow, fast = simulate_g2(model, 5_000), simulate_g2(faster, 5_000)
        assert fast.g2 == slow.g2
        assert (fast.histogram['delay_ns'] == slow.histogram['delay_ns'] / 2).all()
        t_slow = CaptureSimulator(model).records(2_000)[0].photons['t_ns']
        t_fast = CaptureSimulator(faster).records(2_000)[0].photons['t_ns']
        assert (t_fast == t_slow / 2).all()

    def test_g2_vs_temperature_columns(self):
        model = CaptureModel.quasi_resonant(r_x=1.0, seed=4)
        table = g2_vs_temperature(model, [5.0, 30.0], r_qw=lambda T: 1.0, r_cap=lambda T: 1.0 + T / 30,
                                  r_x=lambda T: 1.0, n_pulses=5_000, r_x_planar=lambda T: 0.2)
        assert list(table.columns) == ['temperature', 'r_x', 'g2', 'g2_err', 'g2_planar', 'g2_planar_err']
        assert len(table) == 2


class TestHom:
    """Two-photon overlap"""

    def test_noiseless_overlap_is_one(self):
        assert hom_indistinguishability(DephasingModel(), T1=0.5, delay=12.2).M == 1.0

    def test_pure_dephasing_closed_form(self):
        T1, gamma_star = 0.5, 0.3
        result = hom_indistinguishability(DephasingModel(gamma_star=gamma_star), T1, 12.2)
        assert result.M == pytest.approx(intrinsic_overlap(T1, gamma_star), rel=1e-12)
        assert result.M == pytest.approx(2.0 / (2.0 + 0.6), rel=1e-12)

    def test_fast_spectral_diffusion(self):
        sigma = 0.5
        deph = DephasingModel(kappa_sd=1e3, sigma_sd=sigma, seed=21)
        result = hom_indistinguishability(deph, T1=1.0, delay=12.2, n_photon_pairs=100_000)
        spread = np.sqrt(2) * sigma
        expected, _ = integrate.quad(lambda d: stats.norm.pdf(d, scale=spread) / (1 + d ** 2), -np.inf, np.inf)
        assert abs(result.M - expected) < 3 * result.M_err
        assert result.M < 1.0

    def test_slow_spectral_diffusion_is_harmless(self):
        deph = DephasingModel(kappa_sd=0.0, sigma_sd=2.0, seed=21)
        result = hom_indistinguishability(deph, T1=1.0, delay=12.2, n_photon_pairs=1_000)
        assert result.M == pytest.approx(1.0)

    def test_time_bin_post_selection(self):
        deph = DephasingModel(gamma_star=0.2, kappa_sd=1.0, sigma_sd=1.0, seed=8)
        table = hom_vs_time_bin(deph, T1=0.5, delay=12.2, time_bins=[0.1, 0.25, 0.5, 1.0, 2.0, np.inf],
                                n_photon_pairs=20_000)
        M, err = table['M'].to_numpy(), table['M_err'].to_numpy()
        assert np.all(np.diff(M) <= 3 * np.maximum(err[:-1], err[1:]))
        assert M[0] > M[-1]

    def test_jitter_lowers_accepted_pairs(self):
        deph = DephasingModel(jitter_rate=2.0, seed=3)
        result = hom_indistinguishability(deph, T1=0.5, delay=12.2, time_bin=0.3, n_photon_pairs=5_000)
        assert result.accepted < result.n_pairs

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            hom_indistinguishability(DephasingModel(), T1=0.0, delay=1.0)
        with pytest.raises(DomainError):
            hom_indistinguishability(DephasingModel(), T1=1.0, delay=1.0, time_bin=0.0)
        with pytest.raises(DomainError):
            DephasingModel(gamma_star=-1.0)


class TestBrightness:
    """Brightness accounting and the pumping trade-off"""

    def test_product(self):
        assert brightness(0.95, 0.8, 0.9, 0.5) == pytest.approx(0.95 * 0.8 * 0.9 * 0.5)
        with pytest.raises(DomainError):
            brightness(1.2, 0.5)

    def test_pump_probability(self):
        assert pump_probability(0.0) == 0.0
        assert pump_probability(np.log(2)) == pytest.approx(0.5)
        with pytest.raises(DomainError):
            pump_probability(-1.0)

    def test_brightness_vs_power(self):
        table = brightness_vs_power(0.95, 0.8, 1.0, [0.0, 1.0, 10.0], g2=0.19)
        assert table['B'].is_monotonic_increasing
        assert table['B_corrected'].to_numpy() == pytest.approx(0.9 * table['B'].to_numpy())

    @pytest.fixture
    def model(self):
        return TradeoffModel(beta=0.95, eta_top=0.8, p_state=1.0, T1=0.1, gamma_star=0.01,
                             n_pairs=2_000, seed=17)

    def test_zero_power_is_intrinsic(self, model):
        point = operating_point(model, 'barrier', 0.0)
        assert point['B'] == 0.0
        assert point['M'] == pytest.approx(intrinsic_overlap(model.T1, model.gamma_star))

    def test_two_colour_beats_barrier_at_high_power(self, model):
        table = tradeoff(model, [2.0])
        by_scheme = table.set_index('scheme')['M']
        assert by_scheme['two_colour'] > by_scheme['barrier']
        assert list(table.columns) == ['scheme', 'power', 'p_pump', 'B', 'M', 'M_err', 'sigma_sd']

    def test_unknown_scheme(self, model):
        with pytest.raises(DomainError):
            operating_point(model, 'resonant', 1.0)

    def test_calibration_hits_target(self, model):
        calibrated = calibrate_charge_noise(model, target_M=0.92, target_B=0.53)
        power = calibrated.power_for_brightness(0.53)
        point = operating_point(calibrated, 'two_colour', power)
        assert point['B'] == pytest.approx(0.53)
        assert point['M'] == pytest.approx(0.92, abs=1e-6)

    def test_unreachable_brightness(self, model):
        with pytest.raises(DomainError):
            model.power_for_brightness(0.9)
