from .circuit import (
    OpticalElement,
    BeamSplitter,
    PolarizingBeamSplitter,
    HalfWavePlate,
    Swap,
    OpticalCircuit,
    cnot_circuit,
)
from .cnot import (
    TwoPhotonInput,
    GateOutcome,
    output_amplitudes,
    run_gate,
    truth_table,
    ideal_output,
    average_correct_output,
)
from .analysis import (
    MEASURED_CORRECT_OUTPUT,
    correlation_E,
    bell_fidelity,
    fidelity_vs_overlap,
    simulated_fidelity,
    fidelity_sweep,
    fidelity_vs_time_bin,
)

__all__ = [
    'OpticalElement',
    'BeamSplitter',
    'PolarizingBeamSplitter',
    'HalfWavePlate',
    'Swap',
    'OpticalCircuit',
    'cnot_circuit',
    'TwoPhotonInput',
    'GateOutcome',
    'output_amplitudes',
    'run_gate',
    'truth_table',
    'ideal_output',
    'average_correct_output',
    'MEASURED_CORRECT_OUTPUT',
    'correlation_E',
    'bell_fidelity',
    'fidelity_vs_overlap',
    'simulated_fidelity',
    'fidelity_sweep',
    'fidelity_vs_time_bin',
]
