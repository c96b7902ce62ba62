"""
    Linear-optical circuits over (spatial mode, polarisation) pairs.

    A circuit is built element by element, Perceval-style:

        OpticalCircuit(['c', 't']).add(HalfWavePlate('t', 22.5)).add(PolarizingBeamSplitter('c', 't'))

    Mode index of (spatial, polarisation) is 2 * spatial_index + (0 for H, 1 for V).
"""
from abc import ABC, abstractmethod
from typing import Sequence, Tuple

import numpy as np

from helpers.errors import DomainError

POLARIZATIONS = ('H', 'V')
UNITARY_TOL = 1e-12

Mode = Tuple[str, str]


class OpticalElement(ABC):
    """Element acting on a few labelled modes through a small unitary"""

    @property
    @abstractmethod
    def modes(self) -> Tuple[Mode, ...]:
        pass

    @abstractmethod
    def matrix(self) -> np.ndarray:
        """Single-photon transfer matrix on self.modes, out = matrix @ in"""
        pass

    def is_unitary(self) -> bool:
        m = self.matrix()
        return np.allclose(m.conj().T @ m, np.eye(len(m)), atol=UNITARY_TOL, rtol=0)


class BeamSplitter(OpticalElement):
    """
    Beamsplitter between two modes with intensity coefficient eta

    [[sqrt(eta), sqrt(1-eta)], [sqrt(1-eta), -sqrt(eta)]]
    """

    def __init__(self, mode1: Mode, mode2: Mode, eta: float = 0.5):
        if not 0.0 <= eta <= 1.0:
            raise DomainError(f"beamsplitter eta must lie in [0, 1], got {eta}")
        self._modes = (tuple(mode1), tuple(mode2))
        self.eta = eta

    @property
    def modes(self):
        return self._modes

    def matrix(self):
        r, t = np.sqrt(self.eta), np.sqrt(1 - self.eta)
        return np.array([[r, t], [t, -r]], dtype=complex)


class PolarizingBeamSplitter(OpticalElement):
    """H transmitted, V reflected between spatial modes a and b"""

    def __init__(self, a: str, b: str):
        self.a, self.b = a, b

    @property
    def modes(self):
        return ((self.a, 'H'), (self.a, 'V'), (self.b, 'H'), (self.b, 'V'))

    def matrix(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = m[2, 2] = 1.0
        m[3, 1] = m[1, 3] = 1.0
        return m


class HalfWavePlate(OpticalElement):
    """Half-wave plate with fast axis at angle degrees from H"""

    def __init__(self, spatial: str, angle: float):
        self.spatial = spatial
        self.angle = angle

    @property
    def modes(self):
        return ((self.spatial, 'H'), (self.spatial, 'V'))

    def matrix(self):
        two_theta = np.deg2rad(2 * self.angle)
        c, s = np.cos(two_theta), np.sin(two_theta)
        return np.array([[c, s], [s, -c]], dtype=complex)


class Swap(OpticalElement):
    """Exchange two spatial modes, both polarisations"""

    def __init__(self, a: str, b: str):
        self.a, self.b = a, b

    @property
    def modes(self):
        return ((self.a, 'H'), (self.a, 'V'), (self.b, 'H'), (self.b, 'V'))

    def matrix(self):
        m = np.zeros((4, 4), dtype=complex)
        m[2, 0] = m[3, 1] = m[0, 2] = m[1, 3] = 1.0
        return m


class OpticalCircuit:
    """
    Ordered elements over named spatial modes

    :param spatial_modes: names of the spatial modes
    :param outputs: the two spatial modes the control and target photons enter and are detected in
    :param name: label used in logs and summaries
    """

    def __init__(self, spatial_modes: Sequence[str], outputs: Tuple[str, str] = None, name: str = 'circuit'):
        if len(set(spatial_modes)) != len(spatial_modes):
            raise DomainError("spatial mode names must be unique")
        self.spatial_modes = list(spatial_modes)
        self.outputs = tuple(outputs) if outputs else tuple(self.spatial_modes[:2])
        for mode in self.outputs:
            self._spatial_index(mode)
        self.name = name
        self.elements = []

    @property
    def n_modes(self) -> int:
        return 2 * len(self.spatial_modes)

    def _spatial_index(self, spatial: str) -> int:
        try:
            return self.spatial_modes.index(spatial)
        except ValueError:
            raise DomainError(f"unknown spatial mode {spatial!r} in circuit {self.name!r}")

    def index(self, mode: Mode) -> int:
        spatial, pol = mode
        if pol not in POLARIZATIONS:
            raise DomainError(f"polarisation must be H or V, got {pol!r}")
        return 2 * self._spatial_index(spatial) + POLARIZATIONS.index(pol)

    def label(self, index: int) -> Mode:
        return self.spatial_modes[index // 2], POLARIZATIONS[index % 2]

    def add(self, element: OpticalElement) -> 'OpticalCircuit':
        indices = [self.index(m) for m in element.modes]
        if len(set(indices)) != len(indices):
            raise DomainError(f"{type(element).__name__} acts twice on the same mode")
        if not element.is_unitary():
            raise DomainError(f"{type(element).__name__} is not unitary")
        self.elements.append(element)
        return self

    def element_unitary(self, element: OpticalElement) -> np.ndarray:
        U = np.eye(self.n_modes, dtype=complex)
        idx = [self.index(m) for m in element.modes]
        U[np.ix_(idx, idx)] = element.matrix()
        return U

    def unitary(self) -> np.ndarray:
        """Single-photon transfer matrix of the whole circuit"""
        U = np.eye(self.n_modes, dtype=complex)
        for element in self.elements:
            U = self.element_unitary(element) @ U
        return U

    def is_unitary(self) -> bool:
        U = self.unitary()
        return np.allclose(U.conj().T @ U, np.eye(self.n_modes), atol=UNITARY_TOL, rtol=0)


def cnot_circuit(eta: float = 1 / 3) -> OpticalCircuit:
    """
    Polarisation-encoded post-selected CNOT

    Half-wave plates at 22.5 degrees put the target in the diagonal basis.
    Polarising beamsplitters route the V components of control and target
    into the auxiliary modes vc and vt, where they meet on a 1/3
    beamsplitter; the H components are attenuated by 1/3 against vacuum.
    The polarising beamsplitters then recombine the two arms.
    """
    circuit = OpticalCircuit(['c', 't', 'vc', 'vt'], outputs=('c', 't'), name='cnot')
    (circuit
     .add(HalfWavePlate('t', 22.5))
     .add(PolarizingBeamSplitter('c', 'vc'))
     .add(PolarizingBeamSplitter('t', 'vt'))
     .add(BeamSplitter(('c', 'H'), ('vc', 'H'), eta))
     .add(BeamSplitter(('vt', 'H'), ('t', 'H'), eta))
     .add(BeamSplitter(('vc', 'V'), ('vt', 'V'), eta))
     .add(PolarizingBeamSplitter('c', 'vc'))
     .add(PolarizingBeamSplitter('t', 'vt'))
     .add(HalfWavePlate('t', 22.5)))
    return circuit
