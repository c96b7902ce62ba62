"""
    Random telegraph dynamics of a single charge trap and its reflectivity readout.

    Times are in microseconds and rates in 1/us. State 1 is loaded (trap
    occupied, reflectivity R_L), state 0 is empty (R_E).
"""
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from helpers.errors import DomainError
from helpers.log import configure_logger
from qedcore.params import DeviceParams
from reflectivity.linear import measured_reflectivity
from sensing.kernels import loaded_fractions, run_lengths

EMPTY, LOADED = 0, 1


@dataclass(frozen=True)
class TelegraphModel:
    """
    :param k_cap: capture rate, empty -> loaded (1/us)
    :param k_rel: release rate, loaded -> empty (1/us)
    :param R_L: reflectivity with the trap loaded
    :param R_E: reflectivity with the trap empty
    :param flux: incident photons per us
    :param eta_det: detection efficiency
    :param dt: integration bin (us)
    :param noise_sigma: optional additive Gaussian detection noise (counts per bin)
    :param seed: RNG seed
    :param allow_equal_levels: accept R_L == R_E, for indistinguishable-level studies
    """
    k_cap: float = 0.02
    k_rel: float = 0.05
    R_L: float = 0.4
    R_E: float = 0.6
    flux: float = 1000.0
    eta_det: float = 0.5
    dt: float = 1.0
    noise_sigma: float = 0.0
    seed: int = 0
    allow_equal_levels: bool = False

    def __post_init__(self):
        if self.k_cap <= 0 or self.k_rel <= 0:
            raise DomainError("capture and release rates must be > 0")
        for name in ('R_L', 'R_E', 'eta_det'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if self.R_L == self.R_E and not self.allow_equal_levels:
            raise DomainError("R_L and R_E must differ")
        if self.dt <= 0 or self.flux < 0 or self.noise_sigma < 0:
            raise DomainError("dt must be > 0, flux and noise_sigma >= 0")

    @property
    def occupancy_loaded(self) -> float:
        return self.k_cap / (self.k_cap + self.k_rel)

    @property
    def occupancy_empty(self) -> float:
        return self.k_rel / (self.k_cap + self.k_rel)

    @property
    def counts_loaded(self) -> float:
        """Mean detected photons per bin in the loaded state"""
        return self.flux * self.eta_det * self.R_L * self.dt

    @property
    def counts_empty(self) -> float:
        return self.flux * self.eta_det * self.R_E * self.dt

    @property
    def pure_weight_loaded(self) -> float:
        """Loaded share among bins without a switch"""
        loaded = self.occupancy_loaded * np.exp(-self.k_rel * self.dt)
        empty = self.occupancy_empty * np.exp(-self.k_cap * self.dt)
        return float(loaded / (loaded + empty))

    def switching_probability(self) -> float:
        """Probability that a bin contains at least one switch, in the stationary regime"""
        return float(self.occupancy_empty * -np.expm1(-self.k_cap * self.dt)
                  + self.occupancy_loaded * -np.expm1(-self.k_rel * self.dt))


@dataclass
class TelegraphTrace:
    """
    :param frame: one row per bin (t, counts, loaded_fraction, truth)
    :param dwells: one row per dwell (state, start, duration, complete)
    :param model: model the trace was drawn from
    """
    frame: pd.DataFrame
    dwells: pd.DataFrame
    model: TelegraphModel

    @property
    def n_bins(self) -> int:
        return len(self.frame)

    @property
    def counts(self) -> np.ndarray:
        return self.frame['counts'].to_numpy()

    @property
    def truth(self) -> np.ndarray:
        return self.frame['truth'].to_numpy()

    @property
    def pure(self) -> np.ndarray:
        """Bins without an intra-bin switch"""
        f = self.frame['loaded_fraction'].to_numpy()
        return (f == 0.0) | (f == 1.0)


class TelegraphSimulator:
    """
    Exact two-state Markov chain sampled over a duration, then binned and shot-noise detected

    :param model: TelegraphModel
    """

    def __init__(self, model: TelegraphModel):
        self.model = model
        self.logger = configure_logger(__name__)

    def switch_times(self, duration: float, rng: np.random.Generator):
        m = self.model
        state = LOADED if rng.random() < m.occupancy_loaded else EMPTY
        initial = state
        times, t = [], 0.0
        while True:
            rate = m.k_rel if state == LOADED else m.k_cap
            t += rng.exponential(1 / rate)
            if t >= duration:
                break
            times.append(t)
            state = 1 - state
        return np.array(times), initial

    def dwells(self, switches: np.ndarray, initial: int, duration: float) -> pd.DataFrame:
        edges = np.concatenate([[0.0], switches, [duration]])
        states = (initial + np.arange(len(edges) - 1)) % 2
        complete = np.ones(len(states), dtype=bool)
        complete[0] = complete[-1] = False
        return pd.DataFrame({'state': states, 'start': edges[:-1], 'duration': np.diff(edges),
                             'complete': complete})

    def trace_from_switches(self, switches: Sequence[float], initial: int, duration: float,
                            rng: Optional[np.random.Generator] = None) -> TelegraphTrace:
        """Bin and detect a given state trajectory"""
        m = self.model
        rng = np.random.default_rng(m.seed) if rng is None else rng
        switches = np.asarray(switches, dtype=float)
        n_bins = int(np.floor(duration / m.dt + 1e-9))
        if n_bins < 1:
            raise DomainError(f"duration {duration} us is shorter than one bin")
        fractions = loaded_fractions(switches, int(initial), n_bins, m.dt)
        expected = m.flux * m.eta_det * m.dt * (m.R_E * (1 - fractions) + m.R_L * fractions)
        counts = rng.poisson(expected)
        if m.noise_sigma > 0:
            counts = np.clip(np.rint(counts + m.noise_sigma * rng.standard_normal(n_bins)), 0, None).astype(np.int64)
        frame = pd.DataFrame({
            't': np.arange(n_bins) * m.dt,
            'counts': counts,
            'loaded_fraction': fractions,
            'truth': (fractions >= 0.5).astype(np.int64),
        })
        return TelegraphTrace(frame, self.dwells(switches, int(initial), n_bins * m.dt), m)

    def simulate(self, duration: float) -> TelegraphTrace:
        m = self.model
        if duration <= 0:
            raise DomainError(f"duration must be > 0, got {duration}")
        if duration < 10 / min(m.k_cap, m.k_rel):
            self.logger.warning(f"duration {duration:g} us covers fewer than 10 mean dwells")
        rng = np.random.default_rng(m.seed)
        switches, initial = self.switch_times(duration, rng)
        self.logger.info(f"telegraph trace: {duration:g} us, {len(switches)} switches")
        return self.trace_from_switches(switches, initial, duration, rng)


def simulate_trace(model: TelegraphModel, duration: float) -> TelegraphTrace:
    """Seeded telegraph trace of the given duration (us)"""
    return TelegraphSimulator(model).simulate(duration)


def binned_dwells(states: np.ndarray, state: int, dt: float) -> np.ndarray:
    """Durations (us) of the runs of `state` in a per-bin state sequence, runs touching either end dropped"""
    states = np.asarray(states, dtype=np.int64)
    runs = run_lengths(states, state)
    if len(states) == 0:
        return runs * dt
    head, tail = int(states[0] == state), int(states[-1] == state)
    return runs[head:max(len(runs) - tail, head)] * dt


def dwell_statistics(trace: TelegraphTrace, states: Optional[np.ndarray] = None) -> pd.DataFrame:
    """
    Mean dwell per state against 1/rate, with a KS test against the exponential law

    Censored first and last dwells are left out. 'mean_binned' is the mean dwell
    read off a per-bin state sequence, the true bin states unless `states` is given
    (e.g. the thresholded readout).
    """
    m = trace.model
    states = trace.truth if states is None else states
    rows = []
    for state, name, rate in ((LOADED, 'loaded', m.k_rel), (EMPTY, 'empty', m.k_cap)):
        d = trace.dwells
        durations = d.loc[(d['state'] == state) & d['complete'], 'duration'].to_numpy()
        n = len(durations)
        binned = binned_dwells(states, state, m.dt)
        row = {'state': name, 'n': n, 'expected_mean': 1 / rate}
        if n >= 2:
            row.update({
                'mean': durations.mean(),
                'mean_err': durations.std(ddof=1) / np.sqrt(n),
                'ks_pvalue': stats.kstest(durations, 'expon', args=(0, 1 / rate)).pvalue,
            })
        else:
            row.update({'mean': np.nan, 'mean_err': np.nan, 'ks_pvalue': np.nan})
        row.update({'n_binned': len(binned), 'mean_binned': binned.mean() if len(binned) else np.nan})
        rows.append(row)
    return pd.DataFrame(rows)


def levels_from_frequency_jump(params: DeviceParams, frequency_jump: float, detuning: float = 0.0):
    """
    Reflectivity levels when a captured charge shifts the QD line

    :param params: device with the trap empty
    :param frequency_jump: QD shift caused by the charge (rad/ns)
    :param detuning: laser detuning omega - omega_c (rad/ns)
    :return: (R_L, R_E)
    """
    loaded = replace(params, omega_qd=params.omega_qd + frequency_jump)
    R_E = float(measured_reflectivity(params, detuning))
    R_L = float(measured_reflectivity(loaded, detuning))
    return R_L, R_E
