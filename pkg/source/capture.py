"""
    Multiple-capture Monte Carlo for the zero-delay autocorrelation g2(0).
"""
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd

from helpers.errors import DomainError, UndefinedStatisticError
from helpers.log import configure_logger, progress
from source.kernels import capture_chain, coincidences

MIN_SIDE_PEAKS = 5


@dataclass(frozen=True)
class CaptureModel:
    """
    Barrier-capture model of one excitation cycle (rates in 1/ns)

    :param n_qw: mean barrier carriers per pulse
    :param r_qw: barrier decay rate per carrier
    :param r_cap: capture rate per carrier
    :param r_x: exciton radiative rate, Gamma + gamma_sp
    :param r_xx: biexciton radiative rate
    :param period: pulse repetition period (ns)
    :param seed: root seed of the random streams
    :param qd_injection: probability the pulse excites the exciton directly (quasi-resonant pumping)
    :param side_peaks: number of side peaks averaged for the normalisation
    """
    n_qw: float
    r_qw: float
    r_cap: float
    r_x: float
    r_xx: float
    period: float = 12.2
    seed: int = 0
    qd_injection: float = 0.0
    side_peaks: int = 10

    def __post_init__(self):
        for name in ('n_qw', 'r_qw', 'r_cap', 'r_x', 'r_xx'):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value}")
        if self.period <= 0:
            raise DomainError(f"period must be > 0, got {self.period}")
        if not 0.0 <= self.qd_injection <= 1.0:
            raise DomainError(f"qd_injection must lie in [0, 1], got {self.qd_injection}")
        if self.side_peaks < MIN_SIDE_PEAKS:
            raise DomainError(f"at least {MIN_SIDE_PEAKS} side peaks are needed, got {self.side_peaks}")

    @classmethod
    def quasi_resonant(cls, r_x: float, r_xx: float = None, n_qw: float = 0.02, r_qw: float = 1.0,
                       r_cap: float = 1.0, **kwargs) -> 'CaptureModel':
        """Direct exciton injection with a small residual barrier population"""
        r_xx = 2 * r_x if r_xx is None else r_xx
        return cls(n_qw=n_qw, r_qw=r_qw, r_cap=r_cap, r_x=r_x, r_xx=r_xx, qd_injection=1.0, **kwargs)

    def rescaled(self, factor: float) -> 'CaptureModel':
        """Every rate multiplied by factor, period divided by it"""
        return replace(self, r_qw=self.r_qw * factor, r_cap=self.r_cap * factor, r_x=self.r_x * factor,
                       r_xx=self.r_xx * factor, period=self.period / factor)


def stream_seed(seed: int, stream: int) -> int:
    """32-bit seed of one independent stream"""
    return int(np.random.SeedSequence(seed, spawn_key=(stream,)).generate_state(1, dtype=np.uint32)[0])


@dataclass
class EmissionRecord:
    """
    :param photons: DataFrame (pulse, t_ns) of X photons, t_ns absolute with pulse k fired at k*period
    :param counts: X photons per pulse
    :param xx_counts: XX photons per pulse, filtered out of the analysis channel
    """
    photons: pd.DataFrame
    counts: np.ndarray
    xx_counts: np.ndarray

    @property
    def n_pulses(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class G2Result:
    g2: float
    g2_err: float
    histogram: pd.DataFrame
    mean_photons: float
    n_pulses: int

    def as_dict(self) -> dict:
        return {'g2': self.g2, 'g2_err': self.g2_err, 'mean_photons': self.mean_photons,
                'n_pulses': self.n_pulses}


class CaptureSimulator:
    """
    Runs the capture chain over independent seeded streams

    :param model: CaptureModel
    :param n_streams: number of streams the pulses are split over
    """

    def __init__(self, model: CaptureModel, n_streams: int = 1):
        if n_streams < 1:
            raise DomainError("n_streams must be >= 1")
        self.model = model
        self.n_streams = n_streams
        self.logger = configure_logger(__name__)

    def _stream_sizes(self, n_pulses: int) -> list:
        base, extra = divmod(n_pulses, self.n_streams)
        return [base + (1 if s < extra else 0) for s in range(self.n_streams)]

    def run_stream(self, stream: int, n_pulses: int) -> EmissionRecord:
        m = self.model
        counts, times, xx_counts = capture_chain(n_pulses, m.n_qw, m.r_qw, m.r_cap, m.r_x, m.r_xx,
                                                 m.qd_injection, stream_seed(m.seed, stream))
        pulses = np.repeat(np.arange(n_pulses), counts)
        photons = pd.DataFrame({'pulse': pulses, 't_ns': pulses * m.period + times})
        return EmissionRecord(photons, counts, xx_counts)

    def records(self, n_pulses: int) -> list:
        if n_pulses < 1:
            raise DomainError(f"n_pulses must be >= 1, got {n_pulses}")
        return [self.run_stream(s, n) for s, n in enumerate(self._stream_sizes(n_pulses)) if n > 0]

    def g2(self, n_pulses: int) -> G2Result:
        """
        g2(0) = (zero-delay area per pulse) / (mean side-peak area per pulse pair)

        Coincidence areas are summed over streams, so the result does not
        depend on the order the streams are merged in.
        """
        K = self.model.side_peaks
        self.logger.info(f"capture Monte Carlo: {n_pulses} pulses over {self.n_streams} stream(s)")
        areas = np.zeros(K + 1)
        pairs = np.zeros(K + 1)
        photons = 0
        for record in progress(self.records(n_pulses), desc='capture streams'):
            areas += coincidences(record.counts, K)
            n = record.n_pulses
            pairs += np.array([n] + [max(n - k, 0) for k in range(1, K + 1)], dtype=float)
            photons += int(record.counts.sum())
        if photons == 0:
            raise UndefinedStatisticError("no exciton photon emitted, g2 is undefined")
        if np.any(pairs[1:] == 0):
            raise UndefinedStatisticError(f"need more than {K} pulses per stream for the side peaks")
        side = np.mean(areas[1:] / pairs[1:])
        if side == 0:
            raise UndefinedStatisticError("no side-peak coincidences, g2 is undefined")
        center = areas[0] / pairs[0]
        g2 = center / side
        g2_err = np.sqrt(max(areas[0], 1.0)) / pairs[0] / side

        separations = np.arange(-K, K + 1)
        histogram = pd.DataFrame({
            'separation': separations,
            'delay_ns': separations * self.model.period,
            'coincidences': areas[np.abs(separations)],
        })
        return G2Result(g2=float(g2), g2_err=float(g2_err), histogram=histogram,
                        mean_photons=photons / n_pulses, n_pulses=n_pulses)


def simulate_g2(model: CaptureModel, n_pulses: int, n_streams: int = 1) -> G2Result:
    """
    Zero-delay autocorrelation of the exciton line

    :param model: capture model
    :param n_pulses: excitation pulses, >= 1e4 for the statistical targets
    :param n_streams: independent seeded streams the pulses are split over
    :return: G2Result with the coincidence histogram over pulse separations -K..K
    """
    return CaptureSimulator(model, n_streams).g2(n_pulses)


def g2_vs_temperature(model: CaptureModel, temperatures: Sequence[float], r_qw: Callable[[float], float],
                      r_cap: Callable[[float], float], r_x: Callable[[float], float], n_pulses: int,
                      r_x_planar: Optional[Callable[[float], float]] = None) -> pd.DataFrame:
    """
    g2(0) over temperature from user rate curves

    :param r_x: exciton rate in the pillar (Purcell enhanced) versus temperature
    :param r_x_planar: exciton rate without a cavity; adds the g2_planar columns when given
    :return: DataFrame (temperature, r_x, g2, g2_err[, g2_planar, g2_planar_err])
    """
    rows = []
    for temperature in temperatures:
        at_t = replace(model, r_qw=r_qw(temperature), r_cap=r_cap(temperature), r_x=r_x(temperature))
        result = simulate_g2(at_t, n_pulses)
        row = {'temperature': temperature, 'r_x': at_t.r_x, 'g2': result.g2, 'g2_err': result.g2_err}
        if r_x_planar is not None:
            planar = simulate_g2(replace(at_t, r_x=r_x_planar(temperature)), n_pulses)
            row.update({'g2_planar': planar.g2, 'g2_planar_err': planar.g2_err})
        rows.append(row)
    return pd.DataFrame(rows)
