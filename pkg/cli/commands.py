"""
    Command classes behind the subcommands of main.py.

    Every command returns scalar outputs (rates in rad/ns, times in ns,
    sensing times in us) and the tables written next to the run summary.
"""
from dataclasses import replace

import numpy as np
import pandas as pd

from cli.base import BaseCommand
from cli.config import RunConfig
from gate import (
    MEASURED_CORRECT_OUTPUT,
    average_correct_output,
    cnot_circuit,
    fidelity_sweep,
    fidelity_vs_time_bin,
    run_gate,
    simulated_fidelity,
    truth_table,
    TwoPhotonInput,
)
from helpers.errors import UnknownCommandError
from helpers.units import rad_ns_to_ueV, ueV_to_rad_ns
from qedcore import extraction_sweep, figures_of_merit, lifetime_purcell, polariton_eigenvalues
from reflectivity import (
    coherent_threshold,
    cw_spectrum,
    kerr_rotation,
    measured_reflectivity,
    orthogonality_search,
    polariton_branches,
    power_sweep,
    pulsed_curve,
    steady_reflectivity,
    temperature_map,
    threshold,
    threshold_vs_eta_top,
)
from sensing import (
    classify,
    dwell_statistics,
    error_curve,
    histogram,
    levels_from_frequency_jump,
    simulate_trace,
)
from source import calibrate_charge_noise, hom_indistinguishability, hom_vs_time_bin, simulate_g2, tradeoff


def _span(params) -> float:
    """Default half-width of a detuning grid: both polaritons and the empty-cavity dip"""
    return 2.5 * max(params.g, params.kappa / 2, params.gamma)


class FiguresCommand(BaseCommand):
    name = 'figures'

    def run(self, config: RunConfig, with_tables: bool = True):
        params = config.device_params()
        fom = figures_of_merit(params)
        outputs = fom.as_dict()
        eigenvalues = sorted(polariton_eigenvalues(params), key=lambda e: -np.imag(e))
        outputs.update({
            'kappa': params.kappa,
            'g': params.g,
            'gamma_sp': params.gamma_sp,
            'gamma_star': params.gamma_star,
            'Gamma_detuned': lifetime_purcell(params),
            'polariton_frequencies': [float(-np.imag(e)) for e in eigenvalues],
            'polariton_widths': [float(-np.real(e)) for e in eigenvalues],
            'params_ueV': params.to_ueV(),
            'params_hash': params.hash(),
        })
        tables = {'figures': pd.DataFrame([fom.as_dict()])} if with_tables else {}
        return outputs, tables


class SweepDesignCommand(BaseCommand):
    name = 'sweep-design'

    def run(self, config: RunConfig, with_tables: bool = True):
        sweep = extraction_sweep(config.loss_model(), config.diameter_grid())
        best = sweep.attrs['optimum']
        outputs = {'d_opt': best['d'], 'eta_top_beta_opt': best['eta_top_beta'], 'Q_opt': best['Q'],
                   'beta_opt': best['beta'], 'eta_top_opt': best['eta_top']}
        return outputs, {'design_sweep': sweep} if with_tables else {}


class SpectrumCommand(BaseCommand):
    name = 'spectrum'

    def run(self, config: RunConfig, with_tables: bool = True):
        params, cfg = config.device_params(), config.hilbert_config()
        drive = config.cw_drive()
        point = steady_reflectivity(params, drive.flux, drive.detuning, cfg, config.frame, config.converge())
        outputs = {
            'flux': drive.flux,
            'detuning': drive.detuning,
            'R': point['reflectivity'],
            'R_coherent': point['reflectivity_coherent'],
            'R_linear': float(measured_reflectivity(params, drive.detuning)),
            'n_max': point['n_max'],
        }
        if not with_tables:
            return outputs, {}
        spectrum = cw_spectrum(params, drive, config.detuning_grid(_span(params)), cfg, config.frame,
                               config.converge())
        outputs['dips'] = list(spectrum.dips())
        outputs['provenance'] = spectrum.provenance
        table = spectrum.frame.assign(detuning_ueV=rad_ns_to_ueV(spectrum.detunings))
        return outputs, {'spectrum': table}


class PowerSweepCommand(BaseCommand):
    name = 'power-sweep'

    def run(self, config: RunConfig, with_tables: bool = True):
        params, cfg = config.device_params(), config.hilbert_config()
        fluxes = config.get('drive', 'fluxes') or [config.cw_drive().flux]
        table = power_sweep(params, fluxes, config.detuning_grid(_span(params)), cfg, config.frame,
                            config.converge())
        resonant = table.loc[table['detuning'].abs().groupby(table['flux']).idxmin()]
        outputs = {
            'fluxes': list(fluxes),
            'R_resonant': list(resonant['reflectivity']),
            'R_min': float(table['reflectivity'].min()),
        }
        return outputs, {'power_sweep': table} if with_tables else {}


class PulseThresholdCommand(BaseCommand):
    name = 'pulse-threshold'

    def run(self, config: RunConfig, with_tables: bool = True):
        params, cfg = config.device_params(), config.hilbert_config()
        photons = config.photon_grid()
        bandwidth = config.pulse_bandwidth(params)
        detuning = ueV_to_rad_ns(config.get('pulse', 'detuning', 0.0))
        converge = config.converge(True)
        curve = pulsed_curve(params, photons, cfg, bandwidth, detuning, config.frame, converge)
        outputs = {
            'eta_top': params.eta_top,
            'R_low': float(curve['R'].iloc[0]),
            'R_high': float(curve['R'].iloc[-1]),
            'N_th': threshold(curve) if len(curve) > 1 else None,
            'N_th_coherent': coherent_threshold(curve) if len(curve) > 1 else None,
        }
        tables = {'pulsed_curve': curve}
        eta_tops = config.get('pulse', 'eta_tops')
        if eta_tops:
            by_eta = threshold_vs_eta_top(params, eta_tops, photons, cfg, bandwidth=bandwidth,
                                          detuning=detuning, frame=config.frame, converge=converge)
            outputs['eta_top_thresholds'] = dict(zip(by_eta['eta_top'], by_eta['N_th']))
            outputs['threshold_ratio'] = float(by_eta['ratio'].iloc[-1])
            outputs['threshold_ratio_coherent'] = float(by_eta['ratio_coherent'].iloc[-1])
            tables['threshold_vs_eta_top'] = by_eta
        return outputs, tables if with_tables else {}


class TempMapCommand(BaseCommand):
    name = 'temp-map'

    def run(self, config: RunConfig, with_tables: bool = True):
        params = config.device_params()
        tuning = config.tuning_curves()
        temperatures = config.temperature_grid()
        at = config.get('tuning', 'temperature', float(temperatures[0]))
        shift_qd, shift_c = tuning.shifts(at)
        at_t = replace(params, omega_c=params.omega_c + shift_c, omega_qd=params.omega_qd + shift_qd)
        detuning = ueV_to_rad_ns(config.get('drive', 'detuning', 0.0))
        outputs = {
            'temperature': at,
            'detuning': detuning,
            'R': float(measured_reflectivity(at_t, detuning)),
            'crossing_temperature': tuning.crossing_temperature(params.qd_cavity_detuning),
        }
        if not with_tables:
            return outputs, {}
        cavity_shifts = [tuning.shifts(t)[1] for t in temperatures]
        span = _span(params) + max(abs(s) for s in cavity_shifts)
        frequencies = params.omega_c + config.detuning_grid(span)
        reflectivity_map = temperature_map(params, tuning, temperatures, frequencies)
        branches = polariton_branches(reflectivity_map)
        outputs['min_splitting'] = branches.attrs['min_splitting']
        outputs['min_splitting_temperature'] = branches.attrs['min_temperature']
        return outputs, {'temperature_map': reflectivity_map, 'polariton_branches': branches}


class KerrCommand(BaseCommand):
    name = 'kerr'

    def run(self, config: RunConfig, with_tables: bool = True):
        params = config.device_params()
        polarization = config.get('kerr', 'polarization', 'H')
        detuning = ueV_to_rad_ns(config.get('kerr', 'detuning', 0.0))
        result = kerr_rotation(params, params, detuning, polarization)
        outputs = {
            'detuning': detuning,
            'overlap_abs': abs(result.overlap),
            'overlap_normalized_abs': abs(result.overlap_normalized),
            'distinguishability': result.distinguishability,
            'power_up': result.power_up,
            'power_down': result.power_down,
            'psi_up': list(result.psi_up),
            'psi_down': list(result.psi_down),
        }
        tables = {}
        if config.has('kerr', 'cooperativities') and with_tables:
            search = orthogonality_search(
                config.require('kerr', 'cooperativities'),
                config.get('kerr', 'eta_tops', [params.eta_top]),
                config.get('kerr', 'detunings', [rad_ns_to_ueV(detuning)]),
                params.g, params.gamma_sp, params.gamma_star, params.eta_in, polarization,
            )
            if not search.empty:
                outputs['best'] = search.iloc[0].to_dict()
            tables['kerr_search'] = search
        return outputs, tables


class G2Command(BaseCommand):
    name = 'g2'
    stochastic = True

    def run(self, config: RunConfig, with_tables: bool = True):
        model = config.capture_model()
        result = simulate_g2(model, config.get('capture', 'pulses', 100_000), config.get('capture', 'streams', 1))
        return result.as_dict(), {'g2_histogram': result.histogram} if with_tables else {}


class HomCommand(BaseCommand):
    name = 'hom'
    stochastic = True

    def run(self, config: RunConfig, with_tables: bool = True):
        deph = config.dephasing_model()
        T1 = config.require('dephasing', 't1')
        delay = config.get('dephasing', 'delay', 12.2)
        pairs = config.get('dephasing', 'pairs', 100_000)
        result = hom_indistinguishability(deph, T1, delay, config.get('dephasing', 'time_bin', np.inf), pairs)
        outputs = result.as_dict()
        tables = {}
        if config.has('dephasing', 'time_bins') and with_tables:
            by_bin = hom_vs_time_bin(deph, T1, delay, config.get('dephasing', 'time_bins'), pairs)
            tables['hom_vs_time_bin'] = fidelity_vs_time_bin(by_bin)
        return outputs, tables


class TradeoffCommand(BaseCommand):
    name = 'tradeoff'
    stochastic = True

    def run(self, config: RunConfig, with_tables: bool = True):
        model = config.tradeoff_model()
        outputs = {}
        if config.get('tradeoff', 'calibrate', False):
            model = calibrate_charge_noise(model, config.get('tradeoff', 'target_m', 0.92),
                                           config.get('tradeoff', 'target_b', 0.53))
            outputs['noise_scale'] = model.noise_scale
        powers = config.get('tradeoff', 'powers', list(np.linspace(0.1, 3.0, 12)))
        table = tradeoff(model, powers)
        for scheme, group in table.groupby('scheme', sort=True):
            best = group.loc[group['M'].idxmax()]
            outputs[f'{scheme}_M_max'] = float(best['M'])
            outputs[f'{scheme}_B_at_M_max'] = float(best['B'])
        return outputs, {'tradeoff': table} if with_tables else {}


class GateCommand(BaseCommand):
    name = 'gate'
    ACTIONS = ('truth-table', 'fidelity', 'sweep')

    def __init__(self, action: str = 'fidelity'):
        super().__init__()
        if action not in self.ACTIONS:
            raise UnknownCommandError(f"gate action must be one of {self.ACTIONS}, got {action!r}")
        self.action = action
        self.name = f'gate {action}'

    def run(self, config: RunConfig, with_tables: bool = True):
        M = config.get('gate', 'm', 1.0)
        circuit = cnot_circuit()
        if self.action == 'fidelity':
            return simulated_fidelity(M, circuit), {}
        if self.action == 'truth-table':
            table = truth_table(M, circuit)
            outputs = {
                'M': M,
                'average_correct_output': average_correct_output(M, circuit),
                'success_probability': run_gate(circuit, TwoPhotonInput('H', 'H', M)).success_probability,
                'measured_correct_output': MEASURED_CORRECT_OUTPUT,
            }
            return outputs, {'truth_table': table.reset_index()} if with_tables else {}
        table = fidelity_sweep(config.gate_overlaps(), circuit)
        outputs = {'F_min': float(table['F'].min()), 'F_max': float(table['F'].max())}
        return outputs, {'fidelity_sweep': table} if with_tables else {}


class SenseCommand(BaseCommand):
    name = 'sense'
    stochastic = True
    ACTIONS = ('trace', 'histogram', 'error-curve')

    def __init__(self, action: str = 'trace'):
        super().__init__()
        if action not in self.ACTIONS:
            raise UnknownCommandError(f"sense action must be one of {self.ACTIONS}, got {action!r}")
        self.action = action
        self.name = f'sense {action}'

    def model(self, config: RunConfig):
        model = config.telegraph_model()
        if config.has('telegraph', 'frequency_jump'):
            R_L, R_E = levels_from_frequency_jump(config.device_params(),
                                                  ueV_to_rad_ns(config.get('telegraph', 'frequency_jump')),
                                                  ueV_to_rad_ns(config.get('drive', 'detuning', 0.0)))
            model = replace(model, R_L=R_L, R_E=R_E)
        return model

    def run(self, config: RunConfig, with_tables: bool = True):
        model = self.model(config)
        duration = config.get('telegraph', 'duration', 100_000.0)
        outputs = {'R_L': model.R_L, 'R_E': model.R_E, 'counts_loaded': model.counts_loaded,
                   'counts_empty': model.counts_empty}
        if self.action == 'error-curve':
            table = error_curve(model, config.get('telegraph', 'fluxes', [model.flux]), duration)
            outputs['error_min'] = float(table['error'].min())
            return outputs, {'error_curve': table} if with_tables else {}

        trace = simulate_trace(model, duration)
        if self.action == 'histogram':
            fit = histogram(trace)
            outputs.update(fit.as_dict())
            return outputs, {'histogram': fit.histogram} if with_tables else {}

        result = classify(trace, config.get('telegraph', 'threshold'))
        outputs.update(result.as_dict())
        if not with_tables:
            return outputs, {}
        dwells = dwell_statistics(trace, result.states)
        outputs['ks_pvalues'] = dict(zip(dwells['state'], dwells['ks_pvalue']))
        table = trace.frame.assign(state=result.states)
        return outputs, {'trace': table, 'dwells': trace.dwells, 'dwell_statistics': dwells}


COMMANDS = {
    'figures': FiguresCommand,
    'sweep-design': SweepDesignCommand,
    'spectrum': SpectrumCommand,
    'power-sweep': PowerSweepCommand,
    'pulse-threshold': PulseThresholdCommand,
    'temp-map': TempMapCommand,
    'kerr': KerrCommand,
    'g2': G2Command,
    'hom': HomCommand,
    'tradeoff': TradeoffCommand,
    'gate': GateCommand,
    'sense': SenseCommand,
}


def make_command(name: str, action: str = None) -> BaseCommand:
    """
    Instantiate a command by name

    :param name: subcommand, 'gate' and 'sense' also take an action
    :param action: gate or sense action
    """
    try:
        command = COMMANDS[name]
    except KeyError:
        raise UnknownCommandError(f"unknown command {name!r}, use one of {sorted(COMMANDS)}")
    if command in (GateCommand, SenseCommand):
        return command(action) if action else command()
    if action:
        raise UnknownCommandError(f"command {name!r} takes no action, got {action!r}")
    return command()
