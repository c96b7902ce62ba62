"""
    Two-photon evolution through a linear-optical circuit with partial distinguishability.

    The control photon carries internal label 0. The target photon is
    sqrt(M)|0> + sqrt(1 - M)|1>: only its label-0 part can interfere with
    the control. The two-photon state is held as an amplitude tensor
    A[i, j] over (mode, label) indices of photon 1 and photon 2 and evolves
    as A -> U A U^T with U the circuit unitary extended to the labels.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from helpers.errors import DegenerateOutputError, DomainError
from gate.circuit import OpticalCircuit, POLARIZATIONS, cnot_circuit

QUBIT_TOL = 1e-12
POSTSELECTION_FLOOR = 1e-15
BASIS_LABELS = ('HH', 'HV', 'VH', 'VV')
N_LABELS = 2

QUBITS = {
    'H': np.array([1, 0], dtype=complex),
    'V': np.array([0, 1], dtype=complex),
    'D': np.array([1, 1], dtype=complex) / np.sqrt(2),
    'A': np.array([1, -1], dtype=complex) / np.sqrt(2),
    'R': np.array([1, -1j], dtype=complex) / np.sqrt(2),
    'L': np.array([1, 1j], dtype=complex) / np.sqrt(2),
}


def qubit(state) -> np.ndarray:
    if isinstance(state, str):
        try:
            return QUBITS[state.upper()].copy()
        except KeyError:
            raise DomainError(f"unknown qubit label {state!r}, use one of {sorted(QUBITS)}")
    return np.asarray(state, dtype=complex)


@dataclass(frozen=True)
class TwoPhotonInput:
    """
    :param control: control polarisation qubit (H, V amplitudes) or label
    :param target: target polarisation qubit or label
    :param M: mean wavepacket overlap of the two photons
    """
    control: np.ndarray
    target: np.ndarray
    M: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'control', qubit(self.control))
        object.__setattr__(self, 'target', qubit(self.target))
        for name in ('control', 'target'):
            vector = getattr(self, name)
            if vector.shape != (2,) or abs(np.linalg.norm(vector) - 1) > QUBIT_TOL:
                raise DomainError(f"{name} qubit must be a normalised pair of amplitudes")
        if not 0.0 <= self.M <= 1.0:
            raise DomainError(f"M must lie in [0, 1], got {self.M}")

    def internal_state(self) -> np.ndarray:
        return np.array([np.sqrt(self.M), np.sqrt(1 - self.M)])


@dataclass(frozen=True)
class GateOutcome:
    """
    :param rho: post-selected joint polarisation density matrix, basis HH, HV, VH, VV (control x target)
    :param success_probability: probability of one photon in each marked output
    """
    rho: np.ndarray
    success_probability: float

    @property
    def probabilities(self) -> np.ndarray:
        return np.clip(np.real(np.diag(self.rho)), 0.0, None)

    def probability(self, control: np.ndarray, target: np.ndarray) -> float:
        """Joint detection probability after projecting on polarisations control and target"""
        v = np.kron(qubit(control), qubit(target))
        return float(np.real(v.conj() @ self.rho @ v))


def _input_tensor(circuit: OpticalCircuit, photons: TwoPhotonInput) -> np.ndarray:
    n = circuit.n_modes * N_LABELS
    first = np.zeros(n, dtype=complex)
    second = np.zeros(n, dtype=complex)
    c_in, t_in = circuit.outputs
    internal = photons.internal_state()
    for p, pol in enumerate(POLARIZATIONS):
        first[circuit.index((c_in, pol)) * N_LABELS] = photons.control[p]
        for label in range(N_LABELS):
            second[circuit.index((t_in, pol)) * N_LABELS + label] = photons.target[p] * internal[label]
    return np.outer(first, second)


def output_amplitudes(circuit: OpticalCircuit, photons: TwoPhotonInput) -> np.ndarray:
    """
    Post-selected output amplitudes psi[pol_c, pol_t, label_c, label_t]

    One photon is found in each marked output mode; the amplitude sums
    both photon assignments. Not normalised.
    """
    U = np.kron(circuit.unitary(), np.eye(N_LABELS))
    A = U @ _input_tensor(circuit, photons) @ U.T
    c_out, t_out = circuit.outputs
    psi = np.zeros((2, 2, N_LABELS, N_LABELS), dtype=complex)
    for pc, pol_c in enumerate(POLARIZATIONS):
        for pt, pol_t in enumerate(POLARIZATIONS):
            for lc in range(N_LABELS):
                for lt in range(N_LABELS):
                    i = circuit.index((c_out, pol_c)) * N_LABELS + lc
                    j = circuit.index((t_out, pol_t)) * N_LABELS + lt
                    psi[pc, pt, lc, lt] = A[i, j] + A[j, i]
    return psi


def run_gate(circuit: OpticalCircuit, photons: TwoPhotonInput) -> GateOutcome:
    """
    Propagate two photons and post-select one in each marked output

    :return: GateOutcome with the label-traced, normalised polarisation state
    """
    psi = output_amplitudes(circuit, photons).reshape(4, N_LABELS * N_LABELS)
    rho = psi @ psi.conj().T
    success = float(np.real(np.trace(rho)))
    if success < POSTSELECTION_FLOOR:
        raise DegenerateOutputError(f"post-selection probability is zero in circuit {circuit.name!r}")
    rho = rho / success
    return GateOutcome(rho=(rho + rho.conj().T) / 2, success_probability=success)


def truth_table(M: float, circuit: OpticalCircuit = None) -> pd.DataFrame:
    """
    Output probabilities for the four computational-basis inputs

    :return: DataFrame indexed by input (HH, HV, VH, VV) with one column per output
    """
    circuit = cnot_circuit() if circuit is None else circuit
    rows = []
    for label in BASIS_LABELS:
        outcome = run_gate(circuit, TwoPhotonInput(label[0], label[1], M))
        rows.append(outcome.probabilities)
    table = pd.DataFrame(rows, index=list(BASIS_LABELS), columns=list(BASIS_LABELS))
    table.index.name = 'input'
    return table


def ideal_output(input_label: str) -> str:
    control, target = input_label
    if control == 'V':
        target = 'H' if target == 'V' else 'V'
    return control + target


def average_correct_output(M: float, circuit: OpticalCircuit = None) -> float:
    """Mean probability of the ideal CNOT output over the four basis inputs"""
    table = truth_table(M, circuit)
    return float(np.mean([table.loc[label, ideal_output(label)] for label in BASIS_LABELS]))
