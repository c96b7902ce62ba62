"""
    Drive descriptions and result containers of the reflectivity layer.
"""
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np
import pandas as pd
from scipy.signal import find_peaks

from helpers.errors import DomainError, SolverError

DRIVE_MODES = ('cw', 'pulsed')
PULSE_OFFSET_WIDTHS = 5.0
REFLECTIVITY_SLACK = 1e-6


@dataclass(frozen=True)
class DriveSpec:
    """
    Laser drive

    :param mode: 'cw' or 'pulsed'
    :param flux: incident photon flux |b_in|^2 (photons/ns), cw only
    :param photons: photons per pulse N, pulsed only
    :param bandwidth: intensity FWHM of the pulse spectrum (rad/ns)
    :param detuning: laser detuning omega - omega_c (rad/ns)
    """
    mode: str = 'cw'
    flux: float = 0.0
    photons: float = 0.0
    bandwidth: float = 1.0
    detuning: float = 0.0

    def __post_init__(self):
        if self.mode not in DRIVE_MODES:
            raise DomainError(f"drive mode must be one of {DRIVE_MODES}, got {self.mode!r}")
        if self.flux < 0 or self.photons < 0:
            raise DomainError("flux and photons per pulse must be >= 0")
        if self.bandwidth <= 0:
            raise DomainError(f"pulse bandwidth must be > 0, got {self.bandwidth}")

    @classmethod
    def cw(cls, flux: float, detuning: float = 0.0) -> 'DriveSpec':
        return cls(mode='cw', flux=flux, detuning=detuning)

    @classmethod
    def pulsed(cls, photons: float, bandwidth: float, detuning: float = 0.0) -> 'DriveSpec':
        return cls(mode='pulsed', photons=photons, bandwidth=bandwidth, detuning=detuning)

    @property
    def amplitude(self) -> float:
        """Constant cw amplitude sqrt(flux)"""
        return float(np.sqrt(self.flux))

    @property
    def pulse_width(self) -> float:
        """tau of the Gaussian field exp(-(t-t0)^2/(2 tau^2)) with the requested intensity FWHM"""
        return 2 * np.sqrt(np.log(2)) / self.bandwidth

    @property
    def pulse_center(self) -> float:
        return PULSE_OFFSET_WIDTHS * self.pulse_width

    @property
    def peak_amplitude(self) -> float:
        return float(np.sqrt(self.photons / (self.pulse_width * np.sqrt(np.pi))))

    def envelope(self):
        """Callable b_in(t) of the Gaussian pulse, normalised to photons per pulse"""
        b0, tau, t0 = self.peak_amplitude, self.pulse_width, self.pulse_center

        def b_in(t: float) -> complex:
            return b0 * np.exp(-((t - t0) ** 2) / (2 * tau ** 2))
        return b_in

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class Spectrum:
    """
    Reflectivity versus laser detuning

    :param frame: one row per detuning with at least 'detuning' and 'reflectivity'
    :param provenance: device hash, drive, truncation and tolerances
    """
    frame: pd.DataFrame
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        for column in ('reflectivity', 'reflectivity_coherent'):
            if column not in self.frame:
                continue
            values = self.frame[column].to_numpy()
            bad = (values < -REFLECTIVITY_SLACK) | (values > 1 + REFLECTIVITY_SLACK)
            if np.any(bad):
                raise SolverError(f"{column}: {int(bad.sum())} points outside [0, 1] "
                                  f"(range {values.min():.3g} .. {values.max():.3g})",
                                  column=column, low=float(values.min()), high=float(values.max()))
            # rounding inside the slack only
            self.frame[column] = np.clip(values, 0.0, 1.0)

    @property
    def detunings(self) -> np.ndarray:
        return self.frame['detuning'].to_numpy()

    @property
    def reflectivity(self) -> np.ndarray:
        return self.frame['reflectivity'].to_numpy()

    def dips(self) -> np.ndarray:
        """Detunings of the local reflectivity minima"""
        idx, _ = find_peaks(-self.reflectivity)
        return self.detunings[idx]


@dataclass(frozen=True)
class TuningCurves:
    """
    Linear temperature tuning of the QD and cavity frequencies

    omega_x(T) = omega_x(T_ref) + d_omega_x/dT * (T - T_ref), rad/ns and K
    """
    d_omega_qd: float
    d_omega_c: float
    t_ref: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite([self.d_omega_qd, self.d_omega_c, self.t_ref])):
            raise DomainError("tuning coefficients must be finite")

    def shifts(self, temperature: float):
        dt = temperature - self.t_ref
        return self.d_omega_qd * dt, self.d_omega_c * dt

    def crossing_temperature(self, qd_cavity_detuning: float) -> Optional[float]:
        """Temperature where omega_qd = omega_c, None for parallel tuning"""
        rate = self.d_omega_qd - self.d_omega_c
        if rate == 0:
            return None
        return self.t_ref - qd_cavity_detuning / rate
