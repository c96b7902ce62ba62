"""
    Lindblad generator of the driven QD-cavity system in the frame rotating at the laser.

    H/hbar = D_c a^dag a + D_qd s^dag s + g(a^dag s + a s^dag) + drive
    dissipators kappa*D[a], gamma_sp*D[s], 2*gamma_star*D[s^dag s]

    with D_c = omega_c - omega and D_qd = omega_qd - omega. Two frames are
    available. In the lab frame the drive is i*sqrt(eta_in*kappa_top)(b a^dag - b* a).
    In the displaced frame the cavity field is measured from the classical
    empty-cavity amplitude alpha(t), which obeys
        d(alpha)/dt = -(i D_c + kappa/2) alpha + sqrt(eta_in*kappa_top) b(t),
    and the drive becomes g(alpha s^dag + alpha* s) on the QD only. The
    displaced frame keeps the Fock cutoff small at any power.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from helpers.errors import DomainError, InvalidDeviceError
from qedcore.params import DeviceParams
from hilbert.operators import (
    basis_operators, basis_index, commutator, dissipator, expectation_row, trace_row,
)

FRAMES = ('lab', 'displaced')

DriveAmplitude = Union[complex, float, Callable[[float], complex]]


@dataclass(frozen=True)
class HilbertConfig:
    n_max: int = 4
    steady_tol: float = 1e-10
    ode_rtol: float = 1e-8
    ode_atol: float = 1e-10
    truncation_tol: float = 1e-4
    n_max_cap: int = 64

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise DomainError(f"n_max must be an integer >= 1, got {self.n_max}")
        if self.n_max_cap < self.n_max:
            raise DomainError("n_max_cap must be >= n_max")
        for name in ('steady_tol', 'ode_rtol', 'ode_atol', 'truncation_tol'):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0")


class DensityMatrix:
    """
    State on the QD x Fock space, dimension 2(n_max+1)

    :param data: dense complex Hermitian matrix
    :param n_max: Fock cutoff the matrix was built with
    :param alpha: classical cavity displacement of the frame (0 in the lab frame)
    """
    TRACE_TOL = 1e-9
    HERMITIAN_TOL = 1e-10
    POSITIVITY_TOL = 1e-8

    def __init__(self, data: np.ndarray, n_max: int, alpha: complex = 0j):
        data = np.asarray(data, dtype=complex)
        dim = 2 * (n_max + 1)
        if data.shape != (dim, dim):
            raise DomainError(f"density matrix must be {dim}x{dim} for n_max={n_max}, got {data.shape}")
        self.data = data
        self.n_max = n_max
        self.alpha = complex(alpha)

    @classmethod
    def basis_state(cls, n_max: int, qd_state: int = 0, photons: int = 0) -> 'DensityMatrix':
        dim = 2 * (n_max + 1)
        rho = np.zeros((dim, dim), dtype=complex)
        i = basis_index(n_max, qd_state, photons)
        rho[i, i] = 1.0
        return cls(rho, n_max)

    @classmethod
    def ground(cls, n_max: int) -> 'DensityMatrix':
        return cls.basis_state(n_max, 0, 0)

    @classmethod
    def excited(cls, n_max: int) -> 'DensityMatrix':
        return cls.basis_state(n_max, 1, 0)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def ops(self):
        return basis_operators(self.n_max)

    def trace(self) -> complex:
        return np.trace(self.data)

    def expect(self, op: np.ndarray) -> complex:
        return np.trace(op @ self.data)

    def excited_population(self) -> float:
        return float(np.real(self.expect(self.ops.excited)))

    def photon_number(self) -> float:
        """Lab-frame <a^dag a>, displacement included"""
        a_f = self.expect(self.ops.a)
        n_f = self.expect(self.ops.number)
        return float(np.real(abs(self.alpha) ** 2 + 2 * np.conj(self.alpha) * a_f + n_f))

    def field(self) -> complex:
        """Lab-frame <a>"""
        return complex(self.alpha + self.expect(self.ops.a))

    def qd_reduced(self) -> np.ndarray:
        """2x2 QD density matrix with the cavity traced out"""
        n = self.n_max + 1
        return np.trace(self.data.reshape(2, n, 2, n), axis1=1, axis2=3)

    def violations(self) -> list:
        """Invariant violations (trace, hermiticity, positivity), empty when valid"""
        problems = []
        if abs(self.trace() - 1) > self.TRACE_TOL:
            problems.append(f"trace {self.trace():.3e}")
        herm = np.max(np.abs(self.data - self.data.conj().T))
        if herm > self.HERMITIAN_TOL:
            problems.append(f"hermiticity error {herm:.3e}")
        min_eig = np.min(np.linalg.eigvalsh((self.data + self.data.conj().T) / 2))
        if min_eig < -self.POSITIVITY_TOL:
            problems.append(f"negative eigenvalue {min_eig:.3e}")
        return problems

    def is_valid(self) -> bool:
        return not self.violations()


class LindbladGenerator:
    """
    Liouvillian of one driven QD-pillar device

    :param params: device parameters (rad/ns)
    :param n_max: Fock cutoff
    :param detuning: laser detuning omega - omega_c (rad/ns)
    :param drive: incident amplitude b_in, |b_in|^2 in photons/ns; constant or callable of t (ns)
    :param frame: 'lab' or 'displaced'
    """

    def __init__(self, params: DeviceParams, n_max: int, detuning: float = 0.0,
                 drive: DriveAmplitude = 0.0, frame: str = 'displaced'):
        if frame not in FRAMES:
            raise DomainError(f"frame must be one of {FRAMES}, got {frame!r}")
        if int(n_max) != n_max or n_max < 1:
            raise DomainError(f"n_max must be an integer >= 1, got {n_max}")
        self.params = params
        self.n_max = int(n_max)
        self.detuning = float(detuning)
        self.drive = drive
        self.frame = frame
        self.ops = basis_operators(self.n_max)
        self._superops = None

    @property
    def dim(self) -> int:
        return self.ops.dim

    @property
    def cavity_detuning(self) -> float:
        """omega_c - omega"""
        return -self.detuning

    @property
    def qd_detuning(self) -> float:
        """omega_qd - omega"""
        return self.params.omega_qd - self.params.omega_c - self.detuning

    @property
    def is_time_dependent(self) -> bool:
        return callable(self.drive)

    @property
    def input_coupling(self) -> float:
        """sqrt(eta_in*kappa_top): couples b_in into the cavity"""
        return np.sqrt(self.params.eta_in * self.params.kappa_top)

    def b_in(self, t: float = 0.0) -> complex:
        return complex(self.drive(t)) if callable(self.drive) else complex(self.drive)

    def with_n_max(self, n_max: int) -> 'LindbladGenerator':
        return LindbladGenerator(self.params, n_max, self.detuning, self.drive, self.frame)

    def with_frame(self, frame: str) -> 'LindbladGenerator':
        return LindbladGenerator(self.params, self.n_max, self.detuning, self.drive, frame)

    # ---- Hamiltonian pieces ----
    def static_hamiltonian(self) -> np.ndarray:
        a, s = self.ops.a, self.ops.sigma
        ad, sd = a.conj().T, s.conj().T
        return (self.cavity_detuning * ad @ a
                + self.qd_detuning * sd @ s
                + self.params.g * (ad @ s + a @ sd))

    def drive_hamiltonians(self):
        """
        (H_plus, H_minus) such that the drive term is c*H_plus + conj(c)*H_minus

        c is b_in in the lab frame and alpha in the displaced frame.
        """
        a, s = self.ops.a, self.ops.sigma
        if self.frame == 'lab':
            k = self.input_coupling
            return 1j * k * a.conj().T, -1j * k * a
        return self.params.g * s.conj().T, self.params.g * s

    def collapse_operators(self):
        """(rate, operator) pairs of the dissipators"""
        a, s = self.ops.a, self.ops.sigma
        return [
            (self.params.kappa, a),
            (self.params.gamma_sp, s),
            (2 * self.params.gamma_star, s.conj().T @ s),
        ]

    def hamiltonian(self, t: float = 0.0, alpha: Optional[complex] = None) -> np.ndarray:
        c = self.drive_coefficient(t, alpha)
        H_plus, H_minus = self.drive_hamiltonians()
        return self.static_hamiltonian() + c * H_plus + np.conj(c) * H_minus

    # ---- classical displacement ----
    def steady_alpha(self) -> complex:
        """Empty-cavity steady amplitude for a constant drive"""
        if self.frame == 'lab':
            return 0j
        return self.input_coupling * self.b_in() / (1j * self.cavity_detuning + self.params.kappa / 2)

    def alpha_derivative(self, t: float, alpha: complex) -> complex:
        if self.frame == 'lab':
            return 0j
        return (-(1j * self.cavity_detuning + self.params.kappa / 2) * alpha
                + self.input_coupling * self.b_in(t))

    def drive_coefficient(self, t: float = 0.0, alpha: Optional[complex] = None) -> complex:
        if self.frame == 'lab':
            return self.b_in(t)
        return self.steady_alpha() if alpha is None else alpha

    # ---- superoperators ----
    def superoperators(self):
        """
        Cached (L0, L_plus, L_minus) with L(t) = L0 + c L_plus + conj(c) L_minus
        """
        if self._superops is None:
            L0 = commutator(self.static_hamiltonian())
            for rate, C in self.collapse_operators():
                if rate > 0:
                    L0 = L0 + rate * dissipator(C)
            H_plus, H_minus = self.drive_hamiltonians()
            self._superops = (L0, commutator(H_plus), commutator(H_minus))
        return self._superops

    def superoperator(self, t: float = 0.0, alpha: Optional[complex] = None) -> np.ndarray:
        L0, L_plus, L_minus = self.superoperators()
        c = self.drive_coefficient(t, alpha)
        return L0 + c * L_plus + np.conj(c) * L_minus

    def apply(self, rho: np.ndarray, t: float = 0.0, alpha: Optional[complex] = None) -> np.ndarray:
        """L(rho) in operator form"""
        H = self.hamiltonian(t, alpha)
        out = -1j * (H @ rho - rho @ H)
        for rate, C in self.collapse_operators():
            if rate > 0:
                CdC = C.conj().T @ C
                out = out + rate * (C @ rho @ C.conj().T - 0.5 * (CdC @ rho + rho @ CdC))
        return out

    # ---- input-output ----
    def reflected_flux(self, a_frame: complex, n_frame: float, t: float = 0.0, alpha: complex = 0j):
        """
        Reflected photon flux (photons/ns), total and coherent part

        The non-mode-matched fraction 1 - eta_in of the incident beam is
        reflected straight into the detection path. The mode-matched part
        leaves as b_out = sqrt(eta_in) b_in - sqrt(kappa_top) a.

        :param a_frame: <a> in the generator's frame
        :param n_frame: <a^dag a> in the generator's frame
        :return: (total flux, coherent-only flux)
        """
        b = self.b_in(t)
        eta_in = self.params.eta_in
        k_top = np.sqrt(self.params.kappa_top)
        direct = np.sqrt(eta_in) * b - k_top * alpha
        background = (1 - eta_in) * abs(b) ** 2
        total = (background + abs(direct) ** 2
                 - 2 * k_top * np.real(np.conj(direct) * a_frame)
                 + self.params.kappa_top * n_frame)
        coherent = background + abs(direct - k_top * a_frame) ** 2
        return float(np.real(total)), float(coherent)

    def observable_rows(self):
        """Rows turning vec(rho) into tr(rho), <a>, <a^dag a>, <s^dag s>"""
        return {
            'trace': trace_row(self.dim),
            'a': expectation_row(self.ops.a),
            'n': expectation_row(self.ops.number),
            'excited': expectation_row(self.ops.excited),
        }
