from .drive import DriveSpec, Spectrum, TuningCurves
from .linear import linear_reflection_amplitude, measured_reflectivity, resonant_reflectivity
from .spectra import steady_reflectivity, cw_spectrum, power_sweep, temperature_map, polariton_branches
from .pulsed import (
    PulsedResult,
    PulsedSimulator,
    pulsed_response,
    pulsed_curve,
    threshold,
    coherent_threshold,
    pulsed_threshold,
    threshold_vs_eta_top,
)
from .kerr import KerrResult, jones_vector, kerr_rotation, orthogonality_search

__all__ = [
    'DriveSpec',
    'Spectrum',
    'TuningCurves',
    'linear_reflection_amplitude',
    'measured_reflectivity',
    'resonant_reflectivity',
    'steady_reflectivity',
    'cw_spectrum',
    'power_sweep',
    'temperature_map',
    'polariton_branches',
    'PulsedResult',
    'PulsedSimulator',
    'pulsed_response',
    'pulsed_curve',
    'threshold',
    'coherent_threshold',
    'pulsed_threshold',
    'threshold_vs_eta_top',
    'KerrResult',
    'jones_vector',
    'kerr_rotation',
    'orthogonality_search',
]
