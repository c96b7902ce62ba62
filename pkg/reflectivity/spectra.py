"""
    CW reflectivity spectra from the master equation and linear temperature maps.
"""
from dataclasses import replace
from typing import Sequence

import numpy as np
import pandas as pd
from scipy.signal import find_peaks

from helpers.errors import DomainError
from helpers.log import configure_logger, progress
from hilbert import HilbertConfig, LindbladGenerator, steady_state, converge_truncation
from qedcore.params import DeviceParams
from reflectivity.drive import DriveSpec, Spectrum, TuningCurves
from reflectivity.linear import measured_reflectivity

logger = configure_logger(__name__)


def steady_reflectivity(params: DeviceParams, flux: float, detuning: float,
                        cfg: HilbertConfig = HilbertConfig(), frame: str = 'displaced',
                        converge: bool = False) -> dict:
    """
    Reflectivity of one CW operating point

    :param params: device
    :param flux: incident photons/ns, > 0
    :param detuning: omega - omega_c (rad/ns)
    :param cfg: solver settings
    :param frame: generator frame
    :param converge: double n_max until the total reflectivity settles
    :return: row dict (detuning, reflectivity, reflectivity_coherent, incoherent, p_excited, n_photon, n_max)
    """
    if flux <= 0:
        raise DomainError(f"cw flux must be > 0, got {flux}")
    gen = LindbladGenerator(params, cfg.n_max, detuning, np.sqrt(flux), frame)

    def solve(n_max: int) -> dict:
        g = gen.with_n_max(n_max)
        rho = steady_state(g, cfg)
        total, coherent = g.reflected_flux(rho.expect(rho.ops.a),
                                           float(np.real(rho.expect(rho.ops.number))),
                                           alpha=rho.alpha)
        return {
            'detuning': detuning,
            'reflectivity': total / flux,
            'reflectivity_coherent': coherent / flux,
            'incoherent': (total - coherent) / flux,
            'p_excited': rho.excited_population(),
            'n_photon': rho.photon_number(),
            'n_max': n_max,
        }

    if converge:
        _, row = converge_truncation(solve, cfg, observable=lambda r: r['reflectivity'])
        return row
    return solve(cfg.n_max)


def cw_spectrum(params: DeviceParams, drive: DriveSpec, detunings: Sequence[float],
                cfg: HilbertConfig = HilbertConfig(), frame: str = 'displaced',
                converge: bool = False) -> Spectrum:
    """
    Steady-state reflectivity over a detuning grid

    Both the total reflected power and its coherent part are reported;
    'incoherent' is their difference.

    :param params: device
    :param drive: cw drive, its detuning is ignored in favour of the grid
    :param detunings: omega - omega_c values (rad/ns)
    :return: Spectrum with the linear-response curve in 'reflectivity_linear'
    """
    if drive.mode != 'cw':
        raise DomainError("cw_spectrum needs a cw drive")
    detunings = np.asarray(detunings, dtype=float)
    logger.info(f"cw spectrum: {len(detunings)} detunings at flux {drive.flux:g} photons/ns")
    rows = [steady_reflectivity(params, drive.flux, d, cfg, frame, converge)
            for d in progress(detunings, desc='cw spectrum')]
    frame_df = pd.DataFrame(rows)
    frame_df['reflectivity_linear'] = measured_reflectivity(params, detunings, qd_active=True)
    frame_df['reflectivity_empty'] = measured_reflectivity(params, detunings, qd_active=False)
    provenance = {
        'params_hash': params.hash(),
        'drive': drive.as_dict(),
        'frame': frame,
        'n_max': int(frame_df['n_max'].max()),
        'steady_tol': cfg.steady_tol,
        'truncation_tol': cfg.truncation_tol,
    }
    return Spectrum(frame_df, provenance)


def power_sweep(params: DeviceParams, fluxes: Sequence[float], detunings: Sequence[float],
                cfg: HilbertConfig = HilbertConfig(), frame: str = 'displaced',
                converge: bool = False) -> pd.DataFrame:
    """
    Stack of cw spectra, one per incident flux

    :return: long DataFrame with a 'flux' column in front of the spectrum columns
    """
    frames = []
    for flux in fluxes:
        spectrum = cw_spectrum(params, DriveSpec.cw(flux), detunings, cfg, frame, converge)
        frames.append(spectrum.frame.assign(flux=flux))
    out = pd.concat(frames, ignore_index=True)
    return out[['flux'] + [c for c in out.columns if c != 'flux']]


def temperature_map(params: DeviceParams, tuning: TuningCurves, temperatures: Sequence[float],
                    frequencies: Sequence[float]) -> pd.DataFrame:
    """
    Linear reflectivity versus temperature and laser frequency

    The device frequencies omega_c and omega_qd are taken at tuning.t_ref
    and shifted linearly with temperature.

    :param temperatures: K
    :param frequencies: laser frequencies omega, same frame as params.omega_c (rad/ns)
    :return: long DataFrame (temperature, omega, omega_c, omega_qd, reflectivity)
    """
    frequencies = np.asarray(frequencies, dtype=float)
    if frequencies.ndim != 1 or len(frequencies) < 3:
        raise DomainError("temperature_map needs at least three laser frequencies")
    frames = []
    for temperature in temperatures:
        shift_qd, shift_c = tuning.shifts(temperature)
        at_t = replace(params, omega_c=params.omega_c + shift_c, omega_qd=params.omega_qd + shift_qd)
        frames.append(pd.DataFrame({
            'temperature': temperature,
            'omega': frequencies,
            'omega_c': at_t.omega_c,
            'omega_qd': at_t.omega_qd,
            'reflectivity': measured_reflectivity(at_t, frequencies - at_t.omega_c),
        }))
    return pd.concat(frames, ignore_index=True)


def polariton_branches(reflectivity_map: pd.DataFrame) -> pd.DataFrame:
    """
    Dip positions of the two polariton branches per temperature

    The two deepest local minima of each row are taken as the lower and
    upper branch; rows with a single resolvable dip get NaN splitting.

    :param reflectivity_map: output of temperature_map
    :return: DataFrame (temperature, lower, upper, splitting); attrs['min_splitting'] and attrs['min_temperature']
    """
    rows = []
    for temperature, group in reflectivity_map.groupby('temperature', sort=True):
        group = group.sort_values('omega')
        omega = group['omega'].to_numpy()
        r = group['reflectivity'].to_numpy()
        idx, _ = find_peaks(-r)
        if len(idx) >= 2:
            deepest = np.sort(idx[np.argsort(r[idx])[:2]])
            lower, upper = omega[deepest[0]], omega[deepest[1]]
        elif len(idx) == 1:
            lower = upper = omega[idx[0]]
        else:
            lower = upper = np.nan
        rows.append({'temperature': temperature, 'lower': lower, 'upper': upper,
                     'splitting': upper - lower if len(idx) >= 2 else np.nan})
    out = pd.DataFrame(rows)
    if out['splitting'].notna().any():
        k = out['splitting'].idxmin()
        out.attrs['min_splitting'] = float(out.loc[k, 'splitting'])
        out.attrs['min_temperature'] = float(out.loc[k, 'temperature'])
    else:
        out.attrs['min_splitting'] = float('nan')
        out.attrs['min_temperature'] = float('nan')
    return out
