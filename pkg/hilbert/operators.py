"""
    Operators on (two-level QD) x (truncated Fock) space and their superoperators.

    Basis ordering |q> x |n> with ground q=0, excited q=1 and n ascending,
    i.e. flat index q*(n_max+1) + n. Density matrices are vectorised
    row-major, so vec(A rho B) = kron(A, B.T) @ vec(rho).
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class BasisOperators:
    n_max: int
    a: np.ndarray
    sigma: np.ndarray
    identity: np.ndarray

    @property
    def dim(self) -> int:
        return self.identity.shape[0]

    @property
    def number(self) -> np.ndarray:
        return self.a.conj().T @ self.a

    @property
    def excited(self) -> np.ndarray:
        return self.sigma.conj().T @ self.sigma


@lru_cache(maxsize=32)
def basis_operators(n_max: int) -> BasisOperators:
    """
    Cavity annihilation and QD lowering operators for a Fock cutoff

    :param n_max: photon number cutoff (>= 1)
    :return: BasisOperators with dense complex matrices
    """
    n_levels = n_max + 1
    a_field = np.diag(np.sqrt(np.arange(1, n_levels)), k=1).astype(complex)
    lowering = np.array([[0, 1], [0, 0]], dtype=complex)
    ops = BasisOperators(
        n_max=n_max,
        a=np.kron(np.eye(2), a_field),
        sigma=np.kron(lowering, np.eye(n_levels)),
        identity=np.eye(2 * n_levels, dtype=complex),
    )
    for m in (ops.a, ops.sigma, ops.identity):
        m.setflags(write=False)
    return ops


def basis_index(n_max: int, qd_state: int, photons: int) -> int:
    return qd_state * (n_max + 1) + photons


def spre(A: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> A rho"""
    return np.kron(A, np.eye(A.shape[0]))


def spost(B: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> rho B"""
    return np.kron(np.eye(B.shape[0]), B.T)


def commutator(H: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> -i[H, rho]"""
    return -1j * (spre(H) - spost(H))


def dissipator(C: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> C rho C^dag - {C^dag C, rho}/2"""
    CdC = C.conj().T @ C
    return np.kron(C, C.conj()) - 0.5 * spre(CdC) - 0.5 * spost(CdC)


def vec(rho: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(rho).ravel()


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape(dim, dim)


def expectation_row(op: np.ndarray) -> np.ndarray:
    """Row vector w with w @ vec(rho) = tr(op rho)"""
    return np.ascontiguousarray(op.T).ravel()


def trace_row(dim: int) -> np.ndarray:
    return expectation_row(np.eye(dim))
