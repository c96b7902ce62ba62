from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from helpers.errors import DomainError
from sensing import (
    EMPTY,
    LOADED,
    TelegraphModel,
    TelegraphSimulator,
    analytic_error,
    binned_dwells,
    classify,
    dwell_statistics,
    error_curve,
    histogram,
    levels_from_frequency_jump,
    optimal_threshold,
    simulate_trace,
)


class TestTelegraphModel:
    """Validation and derived count levels"""

    def test_default_levels(self):
        model = TelegraphModel()
        assert model.counts_loaded == pytest.approx(200.0)
        assert model.counts_empty == pytest.approx(300.0)
        assert model.occupancy_loaded + model.occupancy_empty == pytest.approx(1.0)

    @pytest.mark.parametrize('kwargs', [
        {'k_cap': 0.0},
        {'k_rel': -1.0},
        {'R_L': 1.2},
        {'eta_det': -0.1},
        {'dt': 0.0},
        {'flux': -5.0},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(DomainError):
            TelegraphModel(**kwargs)

    def test_equal_levels_need_opt_in(self):
        with pytest.raises(DomainError):
            TelegraphModel(R_L=0.5, R_E=0.5)
        assert TelegraphModel(R_L=0.5, R_E=0.5, allow_equal_levels=True).R_L == 0.5


class TestTrace:
    """Binning of state trajectories and reproducibility"""

    def test_short_loaded_event_is_recovered(self, telegraph_model):
        sim = TelegraphSimulator(telegraph_model)
        trace = sim.trace_from_switches([100.0, 106.0], EMPTY, 200.0)
        truth = trace.truth
        assert trace.n_bins == 200
        assert truth[100:106].tolist() == [LOADED] * 6
        assert truth[:100].sum() == 0 and truth[106:].sum() == 0
        states = classify(trace).states
        assert states[100:106].tolist() == [LOADED] * 6

    def test_intra_bin_switch(self, telegraph_model):
        trace = TelegraphSimulator(telegraph_model).trace_from_switches([10.5], EMPTY, 20.0)
        fractions = trace.frame['loaded_fraction'].to_numpy()
        assert fractions[10] == pytest.approx(0.5)
        assert fractions[11] == 1.0 and fractions[9] == 0.0
        assert not trace.pure[10]
        assert trace.truth[10] == LOADED

    def test_duration_shorter_than_bin(self, telegraph_model):
        with pytest.raises(DomainError):
            TelegraphSimulator(telegraph_model).trace_from_switches([], EMPTY, 0.5)

    def test_same_seed_same_trace(self, telegraph_model):
        a = simulate_trace(telegraph_model, 5000.0)
        b = simulate_trace(telegraph_model, 5000.0)
        pd.testing.assert_frame_equal(a.frame, b.frame)
        c = simulate_trace(replace(telegraph_model, seed=12), 5000.0)
        assert not a.frame['counts'].equals(c.frame['counts'])

    def test_dwell_statistics(self, telegraph_model):
        trace = simulate_trace(telegraph_model, 200_000.0)
        stats = dwell_statistics(trace).set_index('state')
        for state in ('loaded', 'empty'):
            row = stats.loc[state]
            assert row['n'] > 100
            assert abs(row['mean'] - row['expected_mean']) < 4 * row['mean_err']
            assert row['ks_pvalue'] > 1e-3
            assert row['mean_binned'] == pytest.approx(row['mean'], rel=0.1)

    def test_readout_dwells_follow_the_true_ones(self, telegraph_model):
        trace = simulate_trace(telegraph_model, 100_000.0)
        from_truth = dwell_statistics(trace)
        from_readout = dwell_statistics(trace, classify(trace).states)
        assert np.allclose(from_readout['mean_binned'], from_truth['mean_binned'], rtol=0.1)

    def test_binned_dwells_drop_edge_runs(self):
        states = [1, 1, 0, 1, 1, 1, 0, 0, 1]
        assert binned_dwells(states, LOADED, 2.0).tolist() == [6.0]
        assert binned_dwells(states, EMPTY, 2.0).tolist() == [2.0, 4.0]
        assert len(binned_dwells([1, 1, 1], LOADED, 1.0)) == 0


class TestReadout:
    """Thresholding, error budget and histogram fit"""

    def test_analytic_error_equal_levels(self):
        assert analytic_error(100.0, 100.0, 100.0) == 0.5

    def test_optimal_threshold_minimises_error(self):
        k = optimal_threshold(200.0, 300.0)
        assert 200 < k < 300
        best = analytic_error(200.0, 300.0, k)
        assert best <= analytic_error(200.0, 300.0, k - 1)
        assert best <= analytic_error(200.0, 300.0, k + 1)

    def test_error_matches_poisson_overlap(self, telegraph_model):
        result = classify(simulate_trace(telegraph_model, 200_000.0))
        assert result.analytic_error < 2e-3
        assert result.error_probability_pure < 2e-3
        assert abs(result.error_probability_pure - result.analytic_error) < 3 * result.error_std
        assert not result.flagged

    def test_threshold_outside_levels_is_flagged(self, telegraph_model):
        result = classify(simulate_trace(telegraph_model, 2000.0), threshold=1000.0)
        assert result.flagged

    def test_equal_levels_give_a_coin_flip(self):
        model = TelegraphModel(R_L=0.5, R_E=0.5, allow_equal_levels=True, seed=3)
        result = classify(simulate_trace(model, 20_000.0))
        assert result.error_probability == pytest.approx(0.5, abs=0.03)
        assert result.analytic_error == 0.5

    def test_histogram_fit(self, telegraph_model):
        fit = histogram(simulate_trace(telegraph_model, 100_000.0))
        assert fit.means[0] == pytest.approx(200.0, rel=0.02)
        assert fit.means[1] == pytest.approx(300.0, rel=0.02)
        assert sum(fit.weights) == pytest.approx(1.0)
        assert abs(fit.weights[0] - telegraph_model.occupancy_loaded) < 5 * fit.weight_std
        assert fit.valley_ratio < 0.1
        assert fit.histogram['occurrences'].sum() == 100_000

    def test_error_curve(self, telegraph_model):
        curve = error_curve(telegraph_model, [100.0, 1000.0], 20_000.0)
        assert list(curve.columns) == ['flux', 'threshold', 'error', 'error_pure', 'error_std',
                                       'analytic_error']
        assert curve['analytic_error'].iloc[0] > curve['analytic_error'].iloc[1]
        assert curve['error_pure'].iloc[0] > curve['error_pure'].iloc[1]

    def test_error_falls_with_flux(self, telegraph_model):
        curve = error_curve(telegraph_model, [50.0, 100.0, 200.0, 500.0, 1000.0], 20_000.0)
        assert np.all(np.diff(curve['analytic_error']) < 0)
        error, std = curve['error_pure'].to_numpy(), curve['error_std'].to_numpy()
        assert np.all(np.diff(error) <= 3 * np.maximum(std[:-1], std[1:]))
        assert error[0] > 10 * error[-1]


class TestLevels:
    """Reflectivity levels from a charge-induced QD shift"""

    def test_zero_jump_gives_equal_levels(self, strong_device):
        R_L, R_E = levels_from_frequency_jump(strong_device, 0.0)
        assert R_L == pytest.approx(R_E)

    def test_jump_changes_reflectivity(self, strong_device):
        R_L, R_E = levels_from_frequency_jump(strong_device, 5 * strong_device.g)
        assert 0.0 <= R_L <= 1.0 and 0.0 <= R_E <= 1.0
        assert abs(R_L - R_E) > 0.05
