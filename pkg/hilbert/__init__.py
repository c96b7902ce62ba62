from .operators import BasisOperators, basis_operators, basis_index
from .generator import HilbertConfig, DensityMatrix, LindbladGenerator, FRAMES
from .solvers import Trajectory, steady_state, evolve, converge_truncation, steady_observable

__all__ = [
    'BasisOperators',
    'basis_operators',
    'basis_index',
    'HilbertConfig',
    'DensityMatrix',
    'LindbladGenerator',
    'FRAMES',
    'Trajectory',
    'steady_state',
    'evolve',
    'converge_truncation',
    'steady_observable',
]
