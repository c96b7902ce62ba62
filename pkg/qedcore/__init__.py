from .params import (
    DeviceParams,
    FiguresOfMerit,
    figures_of_merit,
    coupling_regime,
    corrected_brightness,
    lifetime_purcell,
    polariton_eigenvalues,
)
from .design import LossModel, extraction_sweep, optimum

__all__ = [
    'DeviceParams',
    'FiguresOfMerit',
    'figures_of_merit',
    'coupling_regime',
    'corrected_brightness',
    'lifetime_purcell',
    'polariton_eigenvalues',
    'LossModel',
    'extraction_sweep',
    'optimum',
]
