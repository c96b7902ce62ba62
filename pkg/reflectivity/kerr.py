"""
    Spin-dependent polarisation rotation of the reflected beam.

    Jones vectors are given in the (H, V) basis. The circular components are
    R = (H - iV)/sqrt(2) and L = (H + iV)/sqrt(2); spin-up couples the QD to R
    only, spin-down to L only.
"""
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np
import pandas as pd

from helpers.errors import DegenerateOutputError, DomainError
from helpers.log import configure_logger
from qedcore.params import DeviceParams
from reflectivity.linear import linear_reflection_amplitude

logger = configure_logger(__name__)

NORM_FLOOR = 1e-12

# rows map (H, V) amplitudes to (R, L) amplitudes
TO_CIRCULAR = np.array([[1, 1j], [1, -1j]]) / np.sqrt(2)
FROM_CIRCULAR = TO_CIRCULAR.conj().T

JONES = {
    'H': np.array([1, 0], dtype=complex),
    'V': np.array([0, 1], dtype=complex),
    'D': np.array([1, 1], dtype=complex) / np.sqrt(2),
    'A': np.array([1, -1], dtype=complex) / np.sqrt(2),
    'R': np.array([1, -1j], dtype=complex) / np.sqrt(2),
    'L': np.array([1, 1j], dtype=complex) / np.sqrt(2),
}


@dataclass(frozen=True)
class KerrResult:
    """
    :param psi_up, psi_down: renormalised output Jones vectors (H, V)
    :param overlap: <out_up|out_down> of the unnormalised outputs
    :param overlap_normalized: same overlap between the renormalised outputs
    :param power_up, power_down: reflected power fraction of each conditional output
    """
    psi_up: np.ndarray
    psi_down: np.ndarray
    overlap: complex
    overlap_normalized: complex
    power_up: float
    power_down: float

    @property
    def distinguishability(self) -> float:
        return 1 - abs(self.overlap_normalized)


def jones_vector(polarization) -> np.ndarray:
    """Normalised Jones vector from a label (H, V, D, A, R, L) or a pair of amplitudes"""
    if isinstance(polarization, str):
        try:
            return JONES[polarization.upper()].copy()
        except KeyError:
            raise DomainError(f"unknown polarisation label {polarization!r}, use one of {sorted(JONES)}")
    vector = np.asarray(polarization, dtype=complex)
    norm = np.linalg.norm(vector)
    if vector.shape != (2,) or norm == 0:
        raise DomainError("Jones vector must be two amplitudes with non-zero norm")
    return vector / norm


def kerr_rotation(params_up: DeviceParams, params_down: DeviceParams, detuning: float,
                  polarization='H') -> KerrResult:
    """
    Reflected polarisation conditioned on the spin state

    :param params_up: device seen by the coupled (R) component for spin-up
    :param params_down: device seen by the coupled (L) component for spin-down
    :param detuning: omega - omega_c (rad/ns)
    :param polarization: input Jones vector or label
    :return: KerrResult
    """
    c_r, c_l = TO_CIRCULAR @ jones_vector(polarization)

    up = np.array([linear_reflection_amplitude(params_up, detuning, qd_active=True) * c_r,
                   linear_reflection_amplitude(params_up, detuning, qd_active=False) * c_l])
    down = np.array([linear_reflection_amplitude(params_down, detuning, qd_active=False) * c_r,
                     linear_reflection_amplitude(params_down, detuning, qd_active=True) * c_l])
    out_up, out_down = FROM_CIRCULAR @ up, FROM_CIRCULAR @ down

    norm_up, norm_down = np.linalg.norm(out_up), np.linalg.norm(out_down)
    if norm_up < NORM_FLOOR or norm_down < NORM_FLOOR:
        raise DegenerateOutputError("a conditional output is fully absorbed",
                                    power_up=float(norm_up ** 2), power_down=float(norm_down ** 2))
    overlap = complex(np.vdot(out_up, out_down))
    return KerrResult(
        psi_up=out_up / norm_up,
        psi_down=out_down / norm_down,
        overlap=overlap,
        overlap_normalized=overlap / (norm_up * norm_down),
        power_up=float(norm_up ** 2),
        power_down=float(norm_down ** 2),
    )


def orthogonality_search(cooperativities: Sequence[float], eta_tops: Sequence[float],
                         detunings: Sequence[float], g: float, gamma_sp: float,
                         gamma_star: float = 0.0, eta_in: float = 1.0, polarization='H') -> pd.DataFrame:
    """
    Grid search for devices whose two spin-conditioned outputs are orthogonal

    Each (C, eta_top) pair is rebuilt with DeviceParams.from_figures and
    used for both spin states.

    :return: DataFrame sorted by |overlap_normalized|, one row per grid point that could be built
    """
    rows = []
    for C, eta_top, detuning in product(cooperativities, eta_tops, detunings):
        params = DeviceParams.from_figures(C, eta_top, eta_in, g, gamma_sp, gamma_star)
        try:
            result = kerr_rotation(params, params, detuning, polarization)
        except DegenerateOutputError:
            logger.debug(f"C={C} eta_top={eta_top} detuning={detuning}: output absorbed, skipped")
            continue
        rows.append({
            'cooperativity': C,
            'eta_top': eta_top,
            'detuning': detuning,
            'overlap_abs': abs(result.overlap),
            'overlap_normalized_abs': abs(result.overlap_normalized),
            'distinguishability': result.distinguishability,
            'power_up': result.power_up,
            'power_down': result.power_down,
        })
    out = pd.DataFrame(rows)
    if out.empty:
        return out
    return out.sort_values('overlap_normalized_abs', kind='stable').reset_index(drop=True)
