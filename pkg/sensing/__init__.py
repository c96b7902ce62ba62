from .telegraph import (
    LOADED,
    EMPTY,
    TelegraphModel,
    TelegraphTrace,
    TelegraphSimulator,
    simulate_trace,
    dwell_statistics,
    binned_dwells,
    levels_from_frequency_jump,
)
from .readout import (
    Classification,
    HistogramFit,
    analytic_error,
    optimal_threshold,
    classify,
    fit_poisson_mixture,
    histogram,
    error_curve,
)

__all__ = [
    'LOADED',
    'EMPTY',
    'TelegraphModel',
    'TelegraphTrace',
    'TelegraphSimulator',
    'simulate_trace',
    'dwell_statistics',
    'binned_dwells',
    'levels_from_frequency_jump',
    'Classification',
    'HistogramFit',
    'analytic_error',
    'optimal_threshold',
    'classify',
    'fit_poisson_mixture',
    'histogram',
    'error_curve',
]
