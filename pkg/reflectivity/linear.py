"""
    Closed-form weak-drive reflection of the QD-pillar device.
"""
import numpy as np

from qedcore.params import DeviceParams


def linear_reflection_amplitude(params: DeviceParams, detuning, qd_active: bool = True):
    """
    Reflection amplitude of the mode-matched beam in linear response

    r = 1 - eta_top*kappa / [i(omega_c - omega) + kappa/2 + g_eff^2 / (i(omega_qd - omega) + gamma)]

    :param params: device
    :param detuning: laser detuning omega - omega_c (rad/ns), scalar or array
    :param qd_active: False models a saturated or absent QD (g_eff = 0)
    :return: complex r, same shape as detuning
    """
    detuning = np.asarray(detuning, dtype=float)
    kappa = params.kappa
    denominator = -1j * detuning + kappa / 2
    if qd_active and params.g > 0:
        qd_term = 1j * (params.qd_cavity_detuning - detuning) + params.gamma
        denominator = denominator + params.g ** 2 / qd_term
    r = 1 - params.kappa_top / denominator
    return r if r.ndim else complex(r)


def measured_reflectivity(params: DeviceParams, detuning, qd_active: bool = True):
    """R_meas = (1 - eta_in) + eta_in*|r|^2: the non-mode-matched light is reflected untouched"""
    r = linear_reflection_amplitude(params, detuning, qd_active)
    return (1 - params.eta_in) + params.eta_in * np.abs(r) ** 2


def resonant_reflectivity(cooperativity: float, eta_top: float) -> float:
    """|r|^2 at joint resonance, (1 - 2 eta_top/(1 + 2C))^2"""
    return (1 - 2 * eta_top / (1 + 2 * cooperativity)) ** 2
