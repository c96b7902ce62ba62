"""
    Brightness accounting and the brightness / indistinguishability trade-off.
"""
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar

from helpers.errors import DomainError
from helpers.log import configure_logger
from qedcore.params import corrected_brightness
from source.hom import DephasingModel, hom_indistinguishability, intrinsic_overlap

logger = configure_logger(__name__)

SCHEMES = ('barrier', 'two_colour')
NOISE_SCALE_CAP = 1e6


def _check_probability(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")


def brightness(beta: float, eta_top: float, p_state: float = 1.0, p_pump: float = 1.0) -> float:
    """
    Photons collected in the first lens per excitation pulse

    :return: B = p_pump * p_state * beta * eta_top
    """
    for name, value in (('beta', beta), ('eta_top', eta_top), ('p_state', p_state), ('p_pump', p_pump)):
        _check_probability(name, value)
    return p_pump * p_state * beta * eta_top


def pump_probability(power, p_sat: float = 1.0):
    """Probability that at least one pair is created, 1 - exp(-P/P_sat)"""
    if p_sat <= 0:
        raise DomainError(f"p_sat must be > 0, got {p_sat}")
    power = np.asarray(power, dtype=float)
    if np.any(power < 0):
        raise DomainError("pump power must be >= 0")
    return -np.expm1(-power / p_sat)


def brightness_vs_power(beta: float, eta_top: float, p_state: float, powers: Sequence[float],
                        p_sat: float = 1.0, g2: float = 0.0) -> pd.DataFrame:
    """Raw and multi-photon corrected brightness against normalised pump power"""
    rows = []
    for power in powers:
        p_pump = float(pump_probability(power, p_sat))
        B = brightness(beta, eta_top, p_state, p_pump)
        rows.append({'power': power, 'p_pump': p_pump, 'B': B, 'B_corrected': corrected_brightness(B, g2)})
    return pd.DataFrame(rows)


@dataclass(frozen=True)
class TradeoffModel:
    """
    Pump-dependent charge noise of the two pumping schemes

    Spectral diffusion amplitude against non-resonant power P_nr:
        sigma_sd = noise_scale * (sigma_trap * exp(-P_nr/p_fill) + sigma_charge * P_nr**alpha)
    Barrier pumping uses P_nr = P. The two-colour scheme pumps resonantly and
    adds the weak non-resonant power that minimises sigma_sd to fill the traps.

    :param T1: radiative lifetime (ns)
    :param gamma_star: pure dephasing (1/ns)
    :param kappa_sd: spectral diffusion mean-reversion rate (1/ns)
    :param delay: time between the interfering photons (ns)
    :param jitter_rate: relaxation rate of barrier-pumping jitter (1/ns), None to disable
    """
    beta: float
    eta_top: float
    p_state: float
    T1: float
    gamma_star: float = 0.0
    kappa_sd: float = 0.1
    sigma_trap: float = 1.0
    p_fill: float = 0.05
    sigma_charge: float = 1.0
    alpha: float = 1.0
    noise_scale: float = 1.0
    p_sat: float = 1.0
    delay: float = 12.2
    jitter_rate: Optional[float] = None
    n_pairs: int = 20_000
    seed: int = 0

    def __post_init__(self):
        for name in ('beta', 'eta_top', 'p_state'):
            _check_probability(name, getattr(self, name))
        if self.T1 <= 0 or self.p_fill <= 0 or self.p_sat <= 0:
            raise DomainError("T1, p_fill and p_sat must be > 0")
        for name in ('sigma_trap', 'sigma_charge', 'alpha', 'noise_scale', 'kappa_sd', 'gamma_star'):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")

    def sigma_sd(self, p_nr: float) -> float:
        return self.noise_scale * (self.sigma_trap * np.exp(-p_nr / self.p_fill)
                                   + self.sigma_charge * p_nr ** self.alpha)

    def trap_filling_power(self) -> float:
        """Non-resonant power minimising sigma_sd"""
        if self.sigma_charge == 0 or self.alpha == 0:
            return 50 * self.p_fill
        result = minimize_scalar(lambda p: self.sigma_sd(p), bounds=(0.0, 50 * self.p_fill), method='bounded')
        return float(result.x)

    def non_resonant_power(self, scheme: str, power: float) -> float:
        if scheme == 'barrier':
            return power
        if scheme == 'two_colour':
            return self.trap_filling_power()
        raise DomainError(f"scheme must be one of {SCHEMES}, got {scheme!r}")

    def power_for_brightness(self, B: float) -> float:
        """Pump power giving brightness B"""
        p_pump = B / (self.p_state * self.beta * self.eta_top)
        if not 0 <= p_pump < 1:
            raise DomainError(f"brightness {B} is out of reach (B_max = {self.p_state * self.beta * self.eta_top:.3g})")
        return float(-self.p_sat * np.log1p(-p_pump))


def operating_point(model: TradeoffModel, scheme: str, power: float) -> dict:
    """Brightness and overlap of one pumping scheme at one power"""
    p_pump = float(pump_probability(power, model.p_sat))
    B = brightness(model.beta, model.eta_top, model.p_state, p_pump)
    if power == 0:
        M, M_err, sigma = intrinsic_overlap(model.T1, model.gamma_star), 0.0, 0.0
    else:
        sigma = model.sigma_sd(model.non_resonant_power(scheme, power))
        deph = DephasingModel(
            gamma_star=model.gamma_star,
            kappa_sd=model.kappa_sd,
            sigma_sd=sigma,
            jitter_rate=model.jitter_rate if scheme == 'barrier' else None,
            seed=model.seed,
        )
        result = hom_indistinguishability(deph, model.T1, model.delay, np.inf, model.n_pairs)
        M, M_err = result.M, result.M_err
    return {'scheme': scheme, 'power': power, 'p_pump': p_pump, 'B': B, 'M': M, 'M_err': M_err,
            'sigma_sd': sigma}


def tradeoff(model: TradeoffModel, powers: Sequence[float], schemes: Sequence[str] = SCHEMES) -> pd.DataFrame:
    """
    (B, M) table for each scheme over a pump power scan

    Every point reuses model.seed, so the schemes are compared on the same
    random pairs.
    """
    rows = [operating_point(model, scheme, power) for scheme in schemes for power in powers]
    return pd.DataFrame(rows)


def calibrate_charge_noise(model: TradeoffModel, target_M: float = 0.92, target_B: float = 0.53) -> TradeoffModel:
    """
    Rescale the charge noise so the two-colour scheme reaches target_M at target_B

    :return: model with the calibrated noise_scale
    """
    power = model.power_for_brightness(target_B)

    def gap(scale: float) -> float:
        return operating_point(replace(model, noise_scale=scale), 'two_colour', power)['M'] - target_M

    if gap(0.0) <= 0:
        raise DomainError(f"intrinsic overlap {intrinsic_overlap(model.T1, model.gamma_star):.3g} "
                          f"is already below the target {target_M}")
    high = 1.0
    while gap(high) > 0:
        high *= 4
        if high > NOISE_SCALE_CAP:
            raise DomainError("charge noise scale diverges, sigma_sd has no effect on M")
    scale = brentq(gap, 0.0, high, xtol=1e-10 * high)
    logger.info(f"charge noise calibrated: noise_scale={scale:.4g} gives M={target_M} at B={target_B}")
    return replace(model, noise_scale=float(scale))
