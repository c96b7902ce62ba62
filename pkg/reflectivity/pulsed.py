"""
    Pulsed reflectivity versus photons per pulse and the nonlinearity threshold.
"""
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import pandas as pd

from helpers.errors import DomainError, ThresholdUndefinedError
from helpers.log import configure_logger, progress
from hilbert import DensityMatrix, HilbertConfig, LindbladGenerator, evolve, converge_truncation
from qedcore.params import DeviceParams
from reflectivity.drive import DriveSpec

logger = configure_logger(__name__)

TAIL_LIFETIMES = 40.0
SAMPLES = 200
STEPS_PER_WIDTH = 5.0
MONOTONE_NOISE = 1e-3


@dataclass(frozen=True)
class PulsedResult:
    photons: float
    reflectivity: float
    reflectivity_coherent: float
    n_max: int
    trace_drift: float

    def as_dict(self) -> dict:
        return {
            'N': self.photons,
            'R': self.reflectivity,
            'R_coherent': self.reflectivity_coherent,
            'n_max': self.n_max,
            'trace_drift': self.trace_drift,
        }


def slowest_decay_rate(params: DeviceParams) -> float:
    """Smallest relevant decay rate, used to size the emission tail after the pulse"""
    rates = [params.kappa / 2]
    Gamma = 2 * params.g ** 2 / params.kappa
    if Gamma + params.gamma_sp > 0:
        rates.append(Gamma + params.gamma_sp)
    return min(rates)


class PulsedSimulator:
    """
    Integrates one Gaussian pulse through the device and counts reflected photons

    :param params: device
    :param cfg: solver settings
    :param frame: generator frame, the displaced frame keeps n_max small at large N
    :param converge: double n_max until R settles within cfg.truncation_tol
    """

    def __init__(self, params: DeviceParams, cfg: HilbertConfig = HilbertConfig(),
                 frame: str = 'displaced', converge: bool = True):
        self.params = params
        self.cfg = cfg
        self.frame = frame
        self.converge = converge
        self.logger = configure_logger(__name__)

    def time_grid(self, drive: DriveSpec) -> np.ndarray:
        t_end = 2 * drive.pulse_center + TAIL_LIFETIMES / slowest_decay_rate(self.params)
        return np.linspace(0.0, t_end, SAMPLES)

    def run(self, drive: DriveSpec, n_max: int) -> PulsedResult:
        if drive.mode != 'pulsed':
            raise DomainError("pulsed response needs a pulsed drive")
        if drive.photons <= 0:
            raise DomainError(f"photons per pulse must be > 0, got {drive.photons}")
        gen = LindbladGenerator(self.params, n_max, drive.detuning, drive.envelope(), self.frame)
        trajectory = evolve(gen, DensityMatrix.ground(n_max), self.time_grid(drive), self.cfg,
                            max_step=drive.pulse_width / STEPS_PER_WIDTH)
        return PulsedResult(
            photons=drive.photons,
            reflectivity=float(trajectory.reflected_photons[-1] / drive.photons),
            reflectivity_coherent=float(trajectory.reflected_coherent[-1] / drive.photons),
            n_max=n_max,
            trace_drift=trajectory.trace_drift,
        )

    def response(self, drive: DriveSpec) -> PulsedResult:
        if not self.converge:
            return self.run(drive, self.cfg.n_max)
        _, result = converge_truncation(lambda n: self.run(drive, n), self.cfg,
                                        observable=lambda r: r.reflectivity)
        return result

    def curve(self, photon_numbers: Sequence[float], bandwidth: float = None,
              detuning: float = 0.0) -> pd.DataFrame:
        bandwidth = self.params.kappa if bandwidth is None else bandwidth
        photon_numbers = np.sort(np.asarray(photon_numbers, dtype=float))
        self.logger.info(f"pulsed curve: {len(photon_numbers)} pulses from N={photon_numbers[0]:g} "
                         f"to N={photon_numbers[-1]:g}, frame={self.frame}")
        rows = [self.response(DriveSpec.pulsed(n, bandwidth, detuning)).as_dict()
                for n in progress(photon_numbers, desc='pulsed curve')]
        return pd.DataFrame(rows)


def pulsed_response(params: DeviceParams, drive: DriveSpec, cfg: HilbertConfig = HilbertConfig(),
                    frame: str = 'displaced', converge: bool = True) -> PulsedResult:
    """
    Reflectivity R(N) = reflected photons / N of one pulse

    :param params: device
    :param drive: pulsed drive; bandwidth matched to the cavity means bandwidth = kappa
    :return: PulsedResult
    """
    return PulsedSimulator(params, cfg, frame, converge).response(drive)


def pulsed_curve(params: DeviceParams, photon_numbers: Sequence[float],
                 cfg: HilbertConfig = HilbertConfig(), bandwidth: float = None,
                 detuning: float = 0.0, frame: str = 'displaced', converge: bool = True) -> pd.DataFrame:
    """R(N) over a grid of photons per pulse, DataFrame (N, R, R_coherent, n_max, trace_drift)"""
    return PulsedSimulator(params, cfg, frame, converge).curve(photon_numbers, bandwidth, detuning)


def threshold(curve: Union[pd.DataFrame, tuple], column: str = 'R') -> float:
    """
    Photons per pulse where R crosses halfway between its two plateaus

    The plateaus are the first and last samples of the curve; the crossing
    is interpolated linearly in log N. A curve that jumps from one plateau
    to the other between two samples gives the first sample past the jump.

    :param curve: DataFrame with 'N' and the reflectivity column, or an (N, R) pair
    :param column: reflectivity column to use
    :return: N_th
    """
    if isinstance(curve, pd.DataFrame):
        N = curve['N'].to_numpy(dtype=float)
        R = curve[column].to_numpy(dtype=float)
    else:
        N, R = (np.asarray(x, dtype=float) for x in curve)
    if len(N) < 2 or len(N) != len(R):
        raise ThresholdUndefinedError("curve needs at least two (N, R) samples")
    if np.any(N <= 0):
        raise ThresholdUndefinedError("photons per pulse must be > 0 for a log-N threshold")
    order = np.argsort(N)
    N, R = N[order], R[order]

    r_first, r_last = R[0], R[-1]
    span = r_last - r_first
    if abs(span) <= MONOTONE_NOISE:
        raise ThresholdUndefinedError(f"no contrast between plateaus ({r_first:.4g} vs {r_last:.4g})")
    direction = np.sign(span)
    steps = direction * np.diff(R)
    if np.any(steps < -MONOTONE_NOISE):
        worst = float(steps.min())
        raise ThresholdUndefinedError(f"curve is not monotone (backstep {-worst:.3g})", backstep=-worst)

    mid = (r_first + r_last) / 2
    # first sample at or past the midpoint
    k = int(np.argmax(direction * (R - mid) >= 0))
    # jump straight from one plateau to the other: the crossing is not resolved
    if abs(R[k - 1] - r_first) <= MONOTONE_NOISE and abs(R[k] - r_last) <= MONOTONE_NOISE:
        return float(N[k])
    log_n = np.log(N)
    frac = (mid - R[k - 1]) / (R[k] - R[k - 1])
    return float(np.exp(log_n[k - 1] + frac * (log_n[k] - log_n[k - 1])))


def pulsed_threshold(params: DeviceParams, photon_numbers: Sequence[float],
                     cfg: HilbertConfig = HilbertConfig(), **kwargs) -> float:
    return threshold(pulsed_curve(params, photon_numbers, cfg, **kwargs))


def coherent_threshold(curve: pd.DataFrame) -> float:
    """Threshold of the coherent part of R, NaN when it has no clean midpoint crossing"""
    try:
        return threshold(curve, column='R_coherent')
    except ThresholdUndefinedError as e:
        logger.debug(f"coherent threshold undefined: {e}")
        return float('nan')


def threshold_vs_eta_top(params: DeviceParams, eta_tops: Sequence[float], photon_numbers: Sequence[float],
                         cfg: HilbertConfig = HilbertConfig(), **kwargs) -> pd.DataFrame:
    """
    Threshold for several top-mirror couplings at fixed total kappa

    The threshold of the coherent part alone is reported next to the total
    one. Near saturation the dot scatters mostly incoherently and the
    coherent part can undershoot its saturated value; its threshold is then NaN.

    :return: DataFrame (eta_top, N_th, N_th_coherent, ratio, ratio_coherent), ratios taken
        as the first row's threshold over each row's
    """
    rows = []
    for eta_top in eta_tops:
        curve = pulsed_curve(params.with_eta_top(eta_top), photon_numbers, cfg, **kwargs)
        rows.append({'eta_top': eta_top, 'N_th': threshold(curve), 'N_th_coherent': coherent_threshold(curve)})
    out = pd.DataFrame(rows)
    out['ratio'] = out['N_th'].iloc[0] / out['N_th']
    out['ratio_coherent'] = out['N_th_coherent'].iloc[0] / out['N_th_coherent']
    return out
