"""
    Device parameters and closed-form cavity-QED figures of merit.

    All rates are intensity damping rates in rad/ns; the cavity linewidth
    (FWHM) equals kappa.
"""
from dataclasses import dataclass, field, replace, asdict
from typing import Optional

import numpy as np

from helpers.errors import InvalidDeviceError, UndefinedPurcellError, DomainError
from helpers.units import ueV_to_rad_ns, rad_ns_to_ueV
from helpers.output import stable_hash

RATE_FIELDS = ('g', 'kappa_top', 'kappa_bottom', 'kappa_loss', 'gamma_sp', 'gamma_star')
FREQUENCY_FIELDS = ('omega_c', 'omega_qd')


@dataclass(frozen=True)
class DeviceParams:
    g: float
    kappa_top: float
    kappa_bottom: float
    kappa_loss: float
    gamma_sp: float
    gamma_star: float = 0.0
    omega_c: float = 0.0
    omega_qd: float = 0.0
    eta_in: float = 1.0

    def __post_init__(self):
        for name in RATE_FIELDS:
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidDeviceError(f"{name} must be a finite rate >= 0, got {value}", field=name)
        for name in FREQUENCY_FIELDS:
            if not np.isfinite(getattr(self, name)):
                raise InvalidDeviceError(f"{name} must be finite", field=name)
        if not 0.0 <= self.eta_in <= 1.0:
            raise InvalidDeviceError(f"eta_in must lie in [0, 1], got {self.eta_in}", field='eta_in')
        if self.kappa <= 0:
            raise InvalidDeviceError("kappa = kappa_top + kappa_bottom + kappa_loss must be > 0")

    @property
    def kappa(self) -> float:
        return self.kappa_top + self.kappa_bottom + self.kappa_loss

    @property
    def gamma(self) -> float:
        """Total QD coherence decay rate gamma_sp/2 + gamma*"""
        return self.gamma_sp / 2 + self.gamma_star

    @property
    def eta_top(self) -> float:
        return self.kappa_top / self.kappa

    @property
    def qd_cavity_detuning(self) -> float:
        return self.omega_qd - self.omega_c

    @classmethod
    def from_ueV(cls, eta_in: float = 1.0, **rates_ueV) -> 'DeviceParams':
        """
        Build parameters from rates and frequencies given in μeV

        :param eta_in: input mode-matching efficiency
        :param rates_ueV: any of g, kappa_top, kappa_bottom, kappa_loss, gamma_sp, gamma_star, omega_c, omega_qd
        :return: DeviceParams in rad/ns
        """
        converted = {k: ueV_to_rad_ns(v) for k, v in rates_ueV.items()}
        return cls(eta_in=eta_in, **converted)

    def to_ueV(self) -> dict:
        out = {k: rad_ns_to_ueV(getattr(self, k)) for k in RATE_FIELDS + FREQUENCY_FIELDS}
        out['eta_in'] = self.eta_in
        return out

    @classmethod
    def from_figures(cls, cooperativity: float, eta_top: float, eta_in: float, g: float,
                     gamma_sp: float, gamma_star: float = 0.0,
                     omega_c: float = 0.0, omega_qd: float = 0.0) -> 'DeviceParams':
        """
        Reconstruct a rate set from fit-level figures of merit

        kappa follows from C = g^2/(kappa*gamma); the mirrors are taken
        symmetric (kappa_bottom = kappa_top) and the rest is side loss.

        :param cooperativity: C > 0
        :param eta_top: top-mirror output coupling in (0, 0.5]
        :param eta_in: input coupling
        :param g: coupling strength (rad/ns)
        :param gamma_sp: emission rate outside the mode (rad/ns)
        :param gamma_star: pure dephasing (rad/ns)
        """
        gamma = gamma_sp / 2 + gamma_star
        if cooperativity <= 0 or gamma <= 0:
            raise InvalidDeviceError("cooperativity and gamma must be > 0 to rebuild kappa")
        kappa = g ** 2 / (cooperativity * gamma)
        kappa_top = eta_top * kappa
        kappa_loss = kappa - 2 * kappa_top
        if kappa_loss < -1e-12 * kappa:
            raise InvalidDeviceError(f"eta_top={eta_top} > 0.5 is not reachable with symmetric mirrors")
        return cls(g=g, kappa_top=kappa_top, kappa_bottom=kappa_top, kappa_loss=max(kappa_loss, 0.0),
                   gamma_sp=gamma_sp, gamma_star=gamma_star, omega_c=omega_c, omega_qd=omega_qd,
                   eta_in=eta_in)

    def with_eta_top(self, eta_top: float) -> 'DeviceParams':
        """
        Raise (or lower) kappa_top at fixed total kappa, trading against kappa_loss

        :param eta_top: requested top-mirror output coupling
        :return: new DeviceParams
        """
        kappa = self.kappa
        kappa_top = eta_top * kappa
        kappa_loss = kappa - kappa_top - self.kappa_bottom
        if kappa_loss < -1e-12 * kappa:
            raise InvalidDeviceError(
                f"eta_top={eta_top} needs more than the available side loss at fixed kappa")
        return replace(self, kappa_top=kappa_top, kappa_loss=max(kappa_loss, 0.0))

    def hash(self) -> str:
        return stable_hash(asdict(self))[:16]


@dataclass(frozen=True)
class FiguresOfMerit:
    cooperativity: float
    purcell: float
    beta: float
    eta_top: float
    Gamma: float
    gamma_total: float
    T1: float
    T2: float
    M_intrinsic: float
    regime: str

    def as_dict(self) -> dict:
        return asdict(self)


def coupling_regime(g: float, kappa: float, gamma: float) -> str:
    """'strong' iff g exceeds both kappa/4 and gamma/4"""
    return 'strong' if (g > kappa / 4 and g > gamma / 4) else 'weak'


def figures_of_merit(params: DeviceParams) -> FiguresOfMerit:
    """
    Closed-form figures of merit of one device

    :param params: validated device parameters
    :return: FiguresOfMerit
    """
    kappa = params.kappa
    gamma = params.gamma
    if params.gamma_sp == 0:
        raise UndefinedPurcellError("gamma_sp = 0: Purcell factor and beta are undefined")
    Gamma = 2 * params.g ** 2 / kappa
    purcell = Gamma / params.gamma_sp
    cooperativity = params.g ** 2 / (kappa * gamma)
    beta = purcell / (purcell + 1)
    T1 = 1.0 / (Gamma + params.gamma_sp)
    T2 = 1.0 / ((Gamma + params.gamma_sp) / 2 + params.gamma_star)
    return FiguresOfMerit(
        cooperativity=cooperativity,
        purcell=purcell,
        beta=beta,
        eta_top=params.kappa_top / kappa,
        Gamma=Gamma,
        gamma_total=gamma,
        T1=T1,
        T2=T2,
        M_intrinsic=T2 / (2 * T1),
        regime=coupling_regime(params.g, kappa, gamma),
    )


def lifetime_purcell(params: DeviceParams, detuning: Optional[float] = None) -> float:
    """
    Emission rate into the mode for a QD detuned from the cavity (weak coupling)

    :param params: device
    :param detuning: omega_qd - omega_c in rad/ns, defaults to the device's own
    :return: Gamma(delta) = 2 g^2 kappa / (kappa^2 + 4 delta^2)
    """
    if detuning is None:
        detuning = params.qd_cavity_detuning
    kappa = params.kappa
    return 2 * params.g ** 2 * kappa / (kappa ** 2 + 4 * detuning ** 2)


def polariton_eigenvalues(params: DeviceParams) -> np.ndarray:
    """
    Complex eigenvalues of the single-excitation (linear response) matrix

    The imaginary parts are the polariton frequencies relative to the
    cavity and the real parts are minus their damping rates.
    """
    M = np.array([
        [-1j * params.omega_c - params.kappa / 2, -1j * params.g],
        [-1j * params.g, -1j * params.omega_qd - params.gamma],
    ])
    return np.linalg.eigvals(M)


def corrected_brightness(B: float, g2: float) -> float:
    """
    Brightness corrected for multi-photon emission, B*sqrt(1 - g2)

    :param B: raw brightness in [0, 1]
    :param g2: zero-delay autocorrelation in [0, 1]
    """
    if not 0.0 <= B <= 1.0:
        raise DomainError(f"brightness must lie in [0, 1], got {B}")
    if not 0.0 <= g2 <= 1.0:
        raise DomainError(f"g2 must lie in [0, 1], got {g2}")
    return B * np.sqrt(1.0 - g2)
