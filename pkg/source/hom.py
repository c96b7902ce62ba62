"""
    Mean wavepacket overlap of two successively emitted photons.

    Each photon is an exponential wavepacket of rate 1/T1 starting at its
    emission epoch (excitation plus jitter). White-noise pure dephasing is
    averaged in closed form; the jitter and the Ornstein-Uhlenbeck spectral
    diffusion detuning between the two photons are sampled per pair. Only
    detection times inside [0, time_bin] after each photon's excitation are
    kept.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from helpers.errors import DomainError, UndefinedStatisticError

SMALL_ARGUMENT = 1e-8


@dataclass(frozen=True)
class DephasingModel:
    """
    :param gamma_star: pure dephasing rate (1/ns)
    :param kappa_sd: spectral diffusion mean-reversion rate (1/ns)
    :param sigma_sd: stationary spread of the spectral diffusion detuning (rad/ns)
    :param jitter_rate: relaxation rate of the emission-time jitter, None for no jitter
    :param seed: RNG seed
    """
    gamma_star: float = 0.0
    kappa_sd: float = 0.0
    sigma_sd: float = 0.0
    jitter_rate: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.gamma_star < 0 or self.kappa_sd < 0 or self.sigma_sd < 0:
            raise DomainError("gamma_star, kappa_sd and sigma_sd must be >= 0")
        if self.jitter_rate is not None and self.jitter_rate <= 0:
            raise DomainError(f"jitter_rate must be > 0 or None, got {self.jitter_rate}")

    @property
    def is_noiseless(self) -> bool:
        return self.sigma_sd == 0 and self.jitter_rate is None


@dataclass(frozen=True)
class HomResult:
    M: float
    M_err: float
    accepted: int
    n_pairs: int

    def as_dict(self) -> dict:
        return {'M': self.M, 'M_err': self.M_err, 'accepted': self.accepted, 'n_pairs': self.n_pairs}


def _phi(z: np.ndarray) -> np.ndarray:
    """(1 - exp(-z))/z, continued to 1 at z = 0"""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < SMALL_ARGUMENT
    safe = np.where(small, 1.0, z)
    return np.where(small, 1 - z / 2, -np.expm1(-safe) / safe)


def pair_overlap_terms(Gamma: float, gamma_star: float, j1, j2, detuning, time_bin: float):
    """
    Numerator and normalisation of the windowed overlap of each photon pair

    :param Gamma: 1/T1
    :param j1, j2: emission epochs after the respective excitation (ns)
    :param detuning: frequency difference of the two photons (rad/ns)
    :param time_bin: detection window length, np.inf for no selection
    :return: (numerator, normalisation, accepted mask)
    """
    j1, j2, detuning = np.broadcast_arrays(np.asarray(j1, float), np.asarray(j2, float),
                                           np.asarray(detuning, float))
    start = np.maximum(j1, j2)
    lag = np.abs(j1 - j2)
    c = 2 * gamma_star - 1j * detuning
    a = Gamma
    if np.isinf(time_bin):
        accepted = np.ones(j1.shape, dtype=bool)
        shape = np.real(a / (a + c))
        norm = np.ones(j1.shape)
    else:
        W = time_bin - start
        accepted = W > 0
        W = np.where(accepted, W, 0.0)
        decay = np.exp(-2 * a * W)
        J = (-np.expm1(-2 * a * W) / (2 * a) - decay * W * _phi((c - a) * W)) / (a + c)
        shape = 2 * a ** 2 * np.real(J)
        norm = (-np.expm1(-Gamma * np.clip(time_bin - j1, 0, None))) * \
            (-np.expm1(-Gamma * np.clip(time_bin - j2, 0, None)))
    numerator = np.exp(-Gamma * lag) * shape
    return np.where(accepted, numerator, 0.0), np.where(accepted, norm, 0.0), accepted


def sample_pairs(deph: DephasingModel, delay: float, n_pairs: int, rng: np.random.Generator):
    """Jitter epochs and OU detuning difference for n_pairs photon pairs"""
    if deph.jitter_rate is None:
        j1 = np.zeros(n_pairs)
        j2 = np.zeros(n_pairs)
    else:
        j1 = rng.exponential(1 / deph.jitter_rate, n_pairs)
        j2 = rng.exponential(1 / deph.jitter_rate, n_pairs)
    if deph.sigma_sd == 0:
        return j1, j2, np.zeros(n_pairs)
    delta1 = deph.sigma_sd * rng.standard_normal(n_pairs)
    rho = np.exp(-deph.kappa_sd * np.abs(delay + j2 - j1))
    delta2 = rho * delta1 + deph.sigma_sd * np.sqrt(1 - rho ** 2) * rng.standard_normal(n_pairs)
    return j1, j2, delta1 - delta2


def hom_indistinguishability(deph: DephasingModel, T1: float, delay: float, time_bin: float = np.inf,
                             n_photon_pairs: int = 100_000) -> HomResult:
    """
    Mean wavepacket overlap M = sum(numerators) / sum(normalisations) over sampled pairs

    :param deph: dephasing model
    :param T1: radiative lifetime (ns)
    :param delay: time between the two excitations (ns)
    :param time_bin: detection window after each excitation (ns), np.inf keeps everything
    :param n_photon_pairs: Monte-Carlo pairs; ignored when the model is noiseless
    :return: HomResult with a delta-method standard error
    """
    if T1 <= 0:
        raise DomainError(f"T1 must be > 0, got {T1}")
    if time_bin <= 0:
        raise DomainError(f"time_bin must be > 0, got {time_bin}")
    if n_photon_pairs < 1:
        raise DomainError("n_photon_pairs must be >= 1")
    n = 1 if deph.is_noiseless else int(n_photon_pairs)
    rng = np.random.default_rng(deph.seed)
    j1, j2, detuning = sample_pairs(deph, delay, n, rng)
    num, norm, accepted = pair_overlap_terms(1 / T1, deph.gamma_star, j1, j2, detuning, time_bin)
    n_accepted = int(accepted.sum())
    if n_accepted == 0 or norm.sum() <= 0:
        raise UndefinedStatisticError(f"no photon pair inside the {time_bin:g} ns bin")
    M = num.sum() / norm.sum()
    if n_accepted > 1:
        residual = (num - M * norm)[accepted]
        M_err = float(residual.std(ddof=1) / (norm[accepted].mean() * np.sqrt(n_accepted)))
    else:
        M_err = 0.0
    return HomResult(M=float(np.clip(M, 0.0, 1.0)), M_err=M_err, accepted=n_accepted, n_pairs=n)


def hom_vs_time_bin(deph: DephasingModel, T1: float, delay: float, time_bins: Sequence[float],
                    n_photon_pairs: int = 100_000) -> pd.DataFrame:
    """M against detection window; the same seed is used for every bin"""
    rows = []
    for time_bin in time_bins:
        result = hom_indistinguishability(deph, T1, delay, time_bin, n_photon_pairs)
        rows.append({'time_bin': time_bin, **result.as_dict()})
    return pd.DataFrame(rows)


def intrinsic_overlap(T1: float, gamma_star: float) -> float:
    """T2/(2 T1) = (1/T1)/((1/T1) + 2 gamma_star)"""
    return (1 / T1) / (1 / T1 + 2 * gamma_star)
