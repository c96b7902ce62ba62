import numpy as np
import pandas as pd
import pytest
from scipy.integrate import quad

from helpers.errors import DegenerateOutputError, DomainError, SolverError, ThresholdUndefinedError
from helpers.units import ueV_to_rad_ns
from hilbert import HilbertConfig
from qedcore import DeviceParams
from reflectivity import (
    DriveSpec,
    Spectrum,
    TuningCurves,
    cw_spectrum,
    jones_vector,
    kerr_rotation,
    linear_reflection_amplitude,
    measured_reflectivity,
    orthogonality_search,
    polariton_branches,
    power_sweep,
    pulsed_curve,
    pulsed_response,
    resonant_reflectivity,
    temperature_map,
    threshold,
    threshold_vs_eta_top,
)


@pytest.fixture
def two_sided_device():
    """Symmetric mirrors, no side loss, C >> 1 and g well above kappa/4"""
    return DeviceParams.from_ueV(g=40.0, kappa_top=10.0, kappa_bottom=10.0, kappa_loss=0.0,
                                 gamma_sp=0.5, eta_in=0.9)


@pytest.fixture
def fitted_device():
    """Fitted nonlinear device: C = 2.5, eta_top = 0.08, eta_in = 0.95"""
    g, kappa, gamma_sp = ueV_to_rad_ns(16.0), ueV_to_rad_ns(46.0), ueV_to_rad_ns(0.5)
    gamma_star = g ** 2 / (2.5 * kappa) - gamma_sp / 2
    return DeviceParams.from_figures(2.5, 0.08, 0.95, g, gamma_sp, gamma_star)


class TestDrive:
    """Drive descriptions"""

    def test_pulse_carries_requested_photons(self):
        drive = DriveSpec.pulsed(8.0, bandwidth=ueV_to_rad_ns(46.0))
        b_in = drive.envelope()
        photons, _ = quad(lambda t: abs(b_in(t)) ** 2, 0.0, 2 * drive.pulse_center, limit=200)
        assert photons == pytest.approx(8.0, rel=1e-6)

    def test_invalid_drives(self):
        with pytest.raises(DomainError):
            DriveSpec(mode='square')
        with pytest.raises(DomainError):
            DriveSpec.cw(-1.0)
        with pytest.raises(DomainError):
            DriveSpec.pulsed(1.0, bandwidth=0.0)

    def test_spectrum_rejects_unphysical_reflectivity(self):
        frame = pd.DataFrame({'detuning': [0.0, 1.0], 'reflectivity': [1.01, 0.5]})
        with pytest.raises(SolverError):
            Spectrum(frame)
        with pytest.raises(SolverError):
            Spectrum(pd.DataFrame({'detuning': [0.0], 'reflectivity': [0.5], 'reflectivity_coherent': [-1e-3]}))

    def test_spectrum_rounds_within_slack(self):
        frame = pd.DataFrame({'detuning': [0.0, 1.0], 'reflectivity': [1.0 + 5e-7, -5e-7]})
        spectrum = Spectrum(frame)
        assert spectrum.reflectivity.tolist() == [1.0, 0.0]

    def test_tuning_crossing(self):
        tuning = TuningCurves(d_omega_qd=-2.0, d_omega_c=-1.0, t_ref=10.0)
        # omega_qd starts 5 above omega_c and closes in at 1 per K
        assert tuning.crossing_temperature(5.0) == pytest.approx(15.0)
        assert TuningCurves(1.0, 1.0).crossing_temperature(5.0) is None


class TestLinearResponse:
    """Closed-form reflection"""

    def test_empty_cavity_on_resonance(self, strong_device):
        r = linear_reflection_amplitude(strong_device, 0.0, qd_active=False)
        assert r == pytest.approx(1 - 2 * strong_device.eta_top)

    def test_resonant_formula(self, fitted_device):
        r = linear_reflection_amplitude(fitted_device, 0.0)
        assert abs(r) ** 2 == pytest.approx(resonant_reflectivity(2.5, 0.08), rel=1e-10)

    def test_far_detuned_light_is_reflected(self, strong_device):
        assert measured_reflectivity(strong_device, 1e6) == pytest.approx(1.0, abs=1e-4)

    def test_lossless_single_sided_cavity_is_a_mirror(self):
        params = DeviceParams(g=0.0, kappa_top=5.0, kappa_bottom=0.0, kappa_loss=0.0, gamma_sp=1.0)
        detunings = np.linspace(-20, 20, 101)
        assert np.abs(linear_reflection_amplitude(params, detunings)) == pytest.approx(np.ones(101))


class TestCwSpectra:
    """Steady-state spectra from the master equation"""

    def test_ground_state_spectrum_has_polariton_dips(self, two_sided_device):
        g = two_sided_device.g
        spectrum = cw_spectrum(two_sided_device, DriveSpec.cw(1e-6), np.linspace(-2 * g, 2 * g, 401),
                               HilbertConfig(n_max=2))
        dips = spectrum.dips()
        assert len(dips) == 2
        assert dips == pytest.approx(np.array([-g, g]), abs=0.02 * g)
        assert spectrum.frame['reflectivity'].to_numpy() == pytest.approx(
            spectrum.frame['reflectivity_linear'].to_numpy(), abs=1e-4)

    def test_saturated_spectrum_single_dip(self, two_sided_device):
        detunings = np.linspace(-100, 100, 401)
        saturated = measured_reflectivity(two_sided_device, detunings, qd_active=False)
        assert np.argmin(saturated) == 200
        assert saturated.min() == pytest.approx(1 - two_sided_device.eta_in, abs=1e-3)

    def test_provenance(self, weak_device):
        spectrum = cw_spectrum(weak_device, DriveSpec.cw(1e-6), [-1.0, 0.0, 1.0], HilbertConfig(n_max=2))
        assert spectrum.provenance['params_hash'] == weak_device.hash()
        assert spectrum.provenance['n_max'] == 2
        assert {'reflectivity_coherent', 'incoherent', 'reflectivity_empty'} <= set(spectrum.frame.columns)

    def test_pulsed_drive_rejected(self, weak_device):
        with pytest.raises(DomainError):
            cw_spectrum(weak_device, DriveSpec.pulsed(1.0, 1.0), [0.0])

    def test_power_saturates_towards_empty_cavity(self, weak_device):
        table = power_sweep(weak_device, [1e-6, 100.0], [0.0], HilbertConfig(n_max=4))
        empty = float(measured_reflectivity(weak_device, 0.0, qd_active=False))
        low, high = table['reflectivity'].to_numpy()
        assert list(table['flux']) == [1e-6, 100.0]
        assert abs(high - empty) < 0.2 * abs(low - empty)

    def test_resonant_reflectivity_falls_with_power(self, weak_device):
        fluxes = np.logspace(-3, 3, 10)
        table = power_sweep(weak_device, fluxes, [0.0], HilbertConfig(n_max=4), converge=True)
        R = table['reflectivity'].to_numpy()
        assert len(R) == 10
        assert np.all(np.diff(R) < 0)
        assert R[0] - R[-1] > 0.4


class TestTemperatureMap:
    """Linear maps over temperature and laser frequency"""

    def test_anticrossing(self, two_sided_device):
        g = two_sided_device.g
        params = DeviceParams(**{**vars(two_sided_device), 'omega_qd': 4 * g})
        tuning = TuningCurves(d_omega_qd=-g, d_omega_c=0.0)
        temperatures = np.linspace(0.0, 8.0, 9)
        frequencies = np.linspace(-8 * g, 8 * g, 1601)
        table = temperature_map(params, tuning, temperatures, frequencies)
        assert len(table) == 9 * 1601
        branches = polariton_branches(table)
        assert branches.attrs['min_temperature'] == pytest.approx(4.0)
        assert branches.attrs['min_splitting'] == pytest.approx(2 * g, rel=0.05)

    def test_needs_frequency_grid(self, strong_device):
        with pytest.raises(DomainError):
            temperature_map(strong_device, TuningCurves(1.0, 0.0), [0.0], [0.0, 1.0])


class TestThreshold:
    """Midpoint crossing of R(N)"""

    def test_logistic_curve(self):
        N = np.logspace(-2, 3, 51)
        R = 0.2 + 0.6 / (1 + (8.0 / N) ** 2)
        assert threshold((N, R)) == pytest.approx(8.0, rel=0.05)

    def test_decreasing_curve(self):
        N = np.logspace(-2, 3, 51)
        R = 0.9 - 0.5 / (1 + (3.0 / N))
        assert threshold(pd.DataFrame({'N': N, 'R': R})) == pytest.approx(3.0, rel=0.05)

    def test_step_curve_gives_first_sample_past_the_jump(self):
        assert threshold(([1.0, 5.0, 10.0, 20.0], [0.2, 0.2, 0.8, 0.8])) == 10.0
        assert threshold(([1.0, 5.0, 10.0, 20.0], [0.8, 0.8, 0.2, 0.2])) == 10.0

    def test_flat_curve(self):
        with pytest.raises(ThresholdUndefinedError):
            threshold(([1.0, 10.0, 100.0], [0.5, 0.5, 0.5]))

    def test_non_monotone_curve(self):
        with pytest.raises(ThresholdUndefinedError):
            threshold(([1.0, 10.0, 100.0, 1000.0], [0.1, 0.9, 0.2, 0.8]))


class TestPulsed:
    """Pulsed response"""

    def test_lossless_empty_cavity_reflects_everything(self):
        params = DeviceParams(g=0.0, kappa_top=40.0, kappa_bottom=0.0, kappa_loss=0.0, gamma_sp=1.0)
        result = pulsed_response(params, DriveSpec.pulsed(0.1, bandwidth=40.0), HilbertConfig(n_max=1),
                                 converge=False)
        assert result.reflectivity == pytest.approx(1.0, abs=1e-4)
        assert result.trace_drift < 1e-7

    def test_weak_pulse_matches_two_sided_empty_cavity(self):
        params = DeviceParams(g=0.0, kappa_top=20.0, kappa_bottom=20.0, kappa_loss=0.0, gamma_sp=1.0)
        result = pulsed_response(params, DriveSpec.pulsed(0.1, bandwidth=4.0), HilbertConfig(n_max=1),
                                 converge=False)
        # narrow pulse spectrum on the resonance of a balanced cavity: nearly all transmitted
        assert result.reflectivity < 0.05

    @pytest.mark.slow
    def test_fitted_device_threshold(self, fitted_device):
        cfg = HilbertConfig(n_max=4, truncation_tol=1e-4)
        photons = np.logspace(-2, 3, 26)
        table = threshold_vs_eta_top(fitted_device, [0.08, 0.48], photons, cfg)
        N_th = table['N_th'].to_numpy()
        # midpoint of a kappa-wide Gaussian pulse: about 45 photons at eta_top 0.08
        assert 30.0 <= N_th[0] <= 65.0
        assert 3.0 <= table['ratio'].iloc[1] <= 8.0
        # at eta_top 0.48 the coherent part dips below its saturated value on the way
        assert np.isnan(table['N_th_coherent'].iloc[1])

    @pytest.mark.slow
    def test_saturation_lowers_reflectivity(self, fitted_device):
        curve = pulsed_curve(fitted_device, np.logspace(-2, 3, 6), HilbertConfig(n_max=4))
        R = curve['R'].to_numpy()
        # the saturated dot stops cancelling the cavity dip
        assert np.all(np.diff(R) <= 1e-3)
        assert R[-1] < R[0] - 0.01


class TestKerr:
    """Spin-conditioned polarisation rotation"""

    def test_uncoupled_spin_gives_identical_outputs(self, strong_device):
        params = DeviceParams(**{**vars(strong_device), 'g': 0.0})
        result = kerr_rotation(params, params, 0.0, 'H')
        assert abs(result.overlap_normalized) == pytest.approx(1.0)
        assert result.distinguishability == pytest.approx(0.0, abs=1e-12)

    def test_symmetric_powers_for_linear_input(self, strong_device):
        result = kerr_rotation(strong_device, strong_device, 0.3, 'H')
        assert result.power_up == pytest.approx(result.power_down)
        assert np.linalg.norm(result.psi_up) == pytest.approx(1.0)

    def test_absorbed_output(self):
        params = DeviceParams(g=5.0, kappa_top=10.0, kappa_bottom=10.0, kappa_loss=0.0, gamma_sp=0.1)
        with pytest.raises(DegenerateOutputError):
            kerr_rotation(params, params, 0.0, 'R')

    def test_jones_labels(self):
        assert np.vdot(jones_vector('D'), jones_vector('A')) == pytest.approx(0.0)
        with pytest.raises(DomainError):
            jones_vector('X')

    def test_orthogonality_search_sorted(self):
        g, gamma_sp = ueV_to_rad_ns(20.0), ueV_to_rad_ns(0.5)
        table = orthogonality_search([0.5, 2.0, 10.0], [0.2, 0.5], [0.0, ueV_to_rad_ns(5.0)], g, gamma_sp)
        assert len(table) == 12
        assert table['overlap_normalized_abs'].is_monotonic_increasing
        assert (table['distinguishability'] == 1 - table['overlap_normalized_abs']).all()

    def test_orthogonal_outputs_exist(self):
        g, gamma_sp = ueV_to_rad_ns(20.0), ueV_to_rad_ns(0.5)
        table = orthogonality_search([1.0, 5.0, 20.0], [0.3, 0.4, 0.5], [0.0, ueV_to_rad_ns(5.0)], g, gamma_sp)
        best = table.iloc[0]
        assert best['overlap_normalized_abs'] < 1e-3
        assert best['eta_top'] == 0.5
        assert best['detuning'] == 0.0
