"""
    Steady-state and time-dependent solvers for a LindbladGenerator.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.linalg import lu_factor, lu_solve

from helpers.errors import DomainError, IntegrationError, SolverError, TruncationError
from helpers.log import configure_logger
from hilbert.generator import DensityMatrix, HilbertConfig, LindbladGenerator
from hilbert.operators import vec, unvec, trace_row

logger = configure_logger(__name__)

REFINEMENT_STEPS = 3
TRACE_DRIFT_TOL = 1e-7
HERMITICITY_TOL = 1e-8


def steady_state(gen: LindbladGenerator, cfg: HilbertConfig = HilbertConfig(),
                 seed: Optional[DensityMatrix] = None) -> DensityMatrix:
    """
    Stationary state of a constant-drive generator

    The row of L belonging to <0,0|rho|0,0> is replaced by the trace
    functional, which makes the system regular whenever the stationary
    state is unique. An optional seed is polished by iterative refinement
    on the same factorisation.

    :param gen: generator with a constant drive
    :param cfg: tolerances
    :param seed: starting guess for refinement
    :return: DensityMatrix carrying the frame displacement
    """
    if gen.is_time_dependent:
        raise DomainError("steady_state needs a constant drive amplitude")
    alpha = gen.steady_alpha()
    L = gen.superoperator(alpha=alpha)
    dim = gen.dim

    M = L.copy()
    M[0, :] = trace_row(dim)
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0

    try:
        factors = lu_factor(M, check_finite=True)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise SolverError(f"steady-state factorisation failed: {e}") from e

    if seed is None:
        x = lu_solve(factors, rhs)
    else:
        if seed.n_max != gen.n_max:
            raise DomainError(f"seed has n_max={seed.n_max}, generator has {gen.n_max}")
        x = vec(seed.data).astype(complex)
    for _ in range(REFINEMENT_STEPS):
        x = x + lu_solve(factors, rhs - M @ x)

    if not np.all(np.isfinite(x)):
        raise SolverError("steady-state solution is not finite (degenerate null space)")

    rho = unvec(x, dim)
    rho = (rho + rho.conj().T) / 2
    rho = rho / np.trace(rho)

    residual = np.linalg.norm(L @ vec(rho))
    bound = cfg.steady_tol * np.linalg.norm(L) * np.linalg.norm(rho)
    if residual > bound:
        raise SolverError(f"steady-state residual {residual:.3e} exceeds {bound:.3e}",
                          residual=float(residual), bound=float(bound))
    logger.debug(f"steady state n_max={gen.n_max} frame={gen.frame} residual={residual:.2e}")
    return DensityMatrix(rho, gen.n_max, alpha=alpha)


@dataclass
class Trajectory:
    """
    Sampled solution of a time-dependent run

    :param times: sample times (ns)
    :param states: density matrices at the sample times, in the generator frame
    :param alphas: frame displacement at the sample times
    :param reflected_photons: time-integrated reflected photon number
    :param reflected_coherent: coherent part of reflected_photons
    :param trace_drift: max |tr(rho) - 1| over the samples
    :param hermiticity_drift: max |rho - rho^dag| entry over the samples
    """
    times: np.ndarray
    states: list
    alphas: np.ndarray
    reflected_photons: np.ndarray
    reflected_coherent: np.ndarray
    trace_drift: float
    hermiticity_drift: float = 0.0
    frame: str = 'lab'

    def density_matrices(self) -> list:
        n_max = self.states[0].shape[0] // 2 - 1
        return [DensityMatrix(rho, n_max, alpha) for rho, alpha in zip(self.states, self.alphas)]

    def final(self) -> DensityMatrix:
        return self.density_matrices()[-1]

    @property
    def total_reflected(self) -> float:
        return float(self.reflected_photons[-1])

    def to_frame(self) -> pd.DataFrame:
        """Populations, lab-frame cavity field and reflected photons per sample"""
        rows = []
        for t, dm, n_refl, n_coh in zip(self.times, self.density_matrices(),
                                        self.reflected_photons, self.reflected_coherent):
            a = dm.field()
            rows.append({
                't': t,
                'p_excited': dm.excited_population(),
                'n_photon': dm.photon_number(),
                're_a': a.real,
                'im_a': a.imag,
                'reflected_photons': n_refl,
                'reflected_coherent': n_coh,
            })
        return pd.DataFrame(rows)


def evolve(gen: LindbladGenerator, rho0: DensityMatrix, t_grid: Sequence[float],
           cfg: HilbertConfig = HilbertConfig(), max_step: float = np.inf) -> Trajectory:
    """
    Integrate the master equation over t_grid

    The state vector carries vec(rho), the frame displacement alpha and
    the integrated total and coherent reflected photon numbers.

    :param gen: generator, drive constant or callable
    :param rho0: initial state; its alpha is used as the initial displacement
    :param t_grid: ascending sample times (ns); integration starts at t_grid[0]
    :param cfg: tolerances
    :param max_step: largest integrator step (ns), set it below the pulse width
    :return: Trajectory
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0):
        raise DomainError("t_grid must be strictly ascending with at least two points")
    if rho0.n_max != gen.n_max:
        raise DomainError(f"rho0 has n_max={rho0.n_max}, generator has {gen.n_max}")

    dim = gen.dim
    size = dim * dim
    L0, L_plus, L_minus = gen.superoperators()
    rows = gen.observable_rows()
    row_a, row_n = rows['a'], rows['n']

    def rhs(t, y):
        x = y[:size]
        alpha = y[size]
        c = gen.drive_coefficient(t, alpha)
        dx = L0 @ x + c * (L_plus @ x) + np.conj(c) * (L_minus @ x)
        total, coherent = gen.reflected_flux(row_a @ x, float(np.real(row_n @ x)), t, alpha)
        return np.concatenate([dx, [gen.alpha_derivative(t, alpha), total, coherent]])

    alpha0 = rho0.alpha if gen.frame == 'displaced' else 0j
    y0 = np.concatenate([vec(rho0.data).astype(complex), [alpha0, 0.0, 0.0]])
    sol = solve_ivp(rhs, (t_grid[0], t_grid[-1]), y0, method='DOP853', t_eval=t_grid,
                    rtol=cfg.ode_rtol, atol=cfg.ode_atol, max_step=max_step)
    if sol.status < 0:
        t_fail = float(sol.t[-1]) if len(sol.t) else float(t_grid[0])
        raise IntegrationError(f"integration failed at t={t_fail:.4g} ns: {sol.message}", t=t_fail)

    states = [unvec(sol.y[:size, k], dim) for k in range(sol.y.shape[1])]
    traces = np.array([np.trace(rho) for rho in states])
    drift = float(np.max(np.abs(traces - 1)))
    if drift > TRACE_DRIFT_TOL:
        logger.warning(f"trace drift {drift:.2e} exceeds {TRACE_DRIFT_TOL:g}; tighten ode tolerances")
    hermiticity = max(float(np.max(np.abs(rho - rho.conj().T))) for rho in states)
    if hermiticity > HERMITICITY_TOL:
        logger.warning(f"hermiticity drift {hermiticity:.2e} exceeds {HERMITICITY_TOL:g}")
    return Trajectory(
        times=sol.t,
        states=states,
        alphas=sol.y[size],
        reflected_photons=np.real(sol.y[size + 1]),
        reflected_coherent=np.real(sol.y[size + 2]),
        trace_drift=drift,
        hermiticity_drift=hermiticity,
        frame=gen.frame,
    )


def converge_truncation(problem: Callable[[int], Any], cfg: HilbertConfig = HilbertConfig(),
                        observable: Callable[[Any], float] = float) -> Tuple[int, Any]:
    """
    Double the Fock cutoff until a scalar observable settles

    :param problem: maps n_max to a result
    :param cfg: starts from cfg.n_max, stops at cfg.n_max_cap
    :param observable: extracts the scalar compared between cutoffs
    :return: (n_max, result at n_max) where n_max and 2*n_max agree within truncation_tol
    """
    n = cfg.n_max
    result = problem(n)
    value = observable(result)
    while 2 * n <= cfg.n_max_cap:
        doubled = problem(2 * n)
        doubled_value = observable(doubled)
        change = abs(doubled_value - value)
        logger.debug(f"n_max {n} -> {2 * n}: observable change {change:.3e}")
        if change < cfg.truncation_tol:
            return n, result
        n, result, value = 2 * n, doubled, doubled_value
    raise TruncationError(f"observable not converged below n_max_cap={cfg.n_max_cap}",
                          n_max=n, value=float(value))


def steady_observable(gen: LindbladGenerator, extractor: Callable[[DensityMatrix], float],
                      cfg: HilbertConfig = HilbertConfig()) -> Callable[[int], float]:
    """Problem for converge_truncation: steady state of gen at a given cutoff, reduced by extractor"""
    def problem(n_max: int) -> float:
        return extractor(steady_state(gen.with_n_max(n_max), cfg))
    return problem
