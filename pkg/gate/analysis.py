"""
    Polarisation correlations and Bell-state fidelity of the gate output.
"""
from typing import Sequence

import numpy as np
import pandas as pd

from helpers.errors import DomainError, UndefinedStatisticError
from gate.circuit import OpticalCircuit, cnot_circuit
from gate.cnot import GateOutcome, TwoPhotonInput, run_gate, average_correct_output

CORRELATION_BASES = {
    'HV': ('H', 'V'),
    'DA': ('D', 'A'),
    'RL': ('R', 'L'),
}
MEASURED_CORRECT_OUTPUT = 0.684


def correlation_E(outcome: GateOutcome, basis: str) -> float:
    """
    E = (A_aa + A_bb - A_ab - A_ba) / (A_aa + A_bb + A_ab + A_ba)

    with A_xy the joint probability of control x and target y in the basis (a, b).
    """
    try:
        a, b = CORRELATION_BASES[basis.upper()]
    except KeyError:
        raise DomainError(f"basis must be one of {sorted(CORRELATION_BASES)}, got {basis!r}")
    A_aa, A_bb = outcome.probability(a, a), outcome.probability(b, b)
    A_ab, A_ba = outcome.probability(a, b), outcome.probability(b, a)
    total = A_aa + A_bb + A_ab + A_ba
    if total <= 0:
        raise UndefinedStatisticError(f"no coincidences in the {basis} basis")
    return float((A_aa + A_bb - A_ab - A_ba) / total)


def bell_fidelity(E_HV: float, E_DA: float, E_RL: float) -> float:
    """Fidelity to (HH + VV)/sqrt(2) from three correlation visibilities"""
    for name, value in (('E_HV', E_HV), ('E_DA', E_DA), ('E_RL', E_RL)):
        if not -1 - 1e-12 <= value <= 1 + 1e-12:
            raise DomainError(f"{name} must lie in [-1, 1], got {value}")
    return (1 + E_HV + E_DA - E_RL) / 4


def fidelity_vs_overlap(M: float) -> float:
    """(1 + M) / (2 (2 - M))"""
    if not 0.0 <= M <= 1.0:
        raise DomainError(f"M must lie in [0, 1], got {M}")
    return (1 + M) / (2 * (2 - M))


def simulated_fidelity(M: float, circuit: OpticalCircuit = None) -> dict:
    """Bell fidelity of the gate fed with control D and target H, from its correlations"""
    circuit = cnot_circuit() if circuit is None else circuit
    outcome = run_gate(circuit, TwoPhotonInput('D', 'H', M))
    E = {basis: correlation_E(outcome, basis) for basis in CORRELATION_BASES}
    return {
        'M': M,
        'E_HV': E['HV'],
        'E_DA': E['DA'],
        'E_RL': E['RL'],
        'F': bell_fidelity(E['HV'], E['DA'], E['RL']),
        'F_closed_form': fidelity_vs_overlap(M),
        'success_probability': outcome.success_probability,
    }


def fidelity_sweep(overlaps: Sequence[float], circuit: OpticalCircuit = None) -> pd.DataFrame:
    """Simulated and closed-form fidelity plus average correct output over M values"""
    circuit = cnot_circuit() if circuit is None else circuit
    rows = []
    for M in overlaps:
        row = simulated_fidelity(M, circuit)
        row['average_correct_output'] = average_correct_output(M, circuit)
        rows.append(row)
    return pd.DataFrame(rows)


def fidelity_vs_time_bin(hom_table: pd.DataFrame) -> pd.DataFrame:
    """
    Bell fidelity expected from M measured with temporal post-selection

    :param hom_table: DataFrame with 'time_bin' and 'M' columns (see source.hom_vs_time_bin)
    :return: the table with an added 'F' column
    """
    if not {'time_bin', 'M'} <= set(hom_table.columns):
        raise DomainError("hom table needs 'time_bin' and 'M' columns")
    out = hom_table.copy()
    out['F'] = [fidelity_vs_overlap(float(np.clip(M, 0.0, 1.0))) for M in out['M']]
    return out
