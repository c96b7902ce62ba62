"""
    INI run configuration: parsing, validation, overrides and hashing.

    Plain numbers are read in the unit listed in SCHEMA for their key; a
    unit suffix (ueV, meV, rad/ns, /ns, /us, ns, ps, us, um) converts from
    that unit instead.
"""
from configparser import ConfigParser, Error as ConfigParserError
from pathlib import Path
from typing import Dict, List, Optional, Sequence
import os

import numpy as np

from helpers.errors import ConfigError, DomainError, InvalidDeviceError
from helpers.output import stable_hash
from helpers.units import parse_quantity, ueV_to_rad_ns
from hilbert import HilbertConfig
from qedcore import DeviceParams, LossModel
from reflectivity import DriveSpec, TuningCurves
from sensing import TelegraphModel
from source import CaptureModel, DephasingModel, TradeoffModel

OUT_ENV = 'QDSIM_OUT'
DEFAULT_OUT = 'out'

# key -> (kind, unit); kinds: num, int, bool, str, list
SCHEMA = {
    'device': {
        'g': ('num', 'ueV'), 'kappa_top': ('num', 'ueV'), 'kappa_bottom': ('num', 'ueV'),
        'kappa_loss': ('num', 'ueV'), 'gamma_sp': ('num', 'ueV'), 'gamma_star': ('num', 'ueV'),
        'omega_c': ('num', 'ueV'), 'omega_qd': ('num', 'ueV'), 'eta_in': ('num', ''),
        'cooperativity': ('num', ''), 'eta_top': ('num', ''), 'kappa': ('num', 'ueV'),
    },
    'solver': {
        'n_max': ('int', ''), 'steady_tol': ('num', ''), 'ode_rtol': ('num', ''), 'ode_atol': ('num', ''),
        'truncation_tol': ('num', ''), 'n_max_cap': ('int', ''), 'frame': ('str', ''),
        'converge': ('bool', ''),
    },
    'drive': {
        'flux': ('num', ''), 'fluxes': ('list', ''), 'detuning': ('num', 'ueV'),
        'detuning_min': ('num', 'ueV'), 'detuning_max': ('num', 'ueV'), 'detuning_points': ('int', ''),
    },
    'pulse': {
        'photons': ('num', ''), 'photons_min': ('num', ''), 'photons_max': ('num', ''),
        'photons_points': ('int', ''), 'bandwidth': ('num', 'ueV'), 'detuning': ('num', 'ueV'),
        'eta_tops': ('list', ''),
    },
    'tuning': {
        'd_omega_qd': ('num', 'ueV'), 'd_omega_c': ('num', 'ueV'), 't_ref': ('num', ''),
        'temperature': ('num', ''), 't_min': ('num', ''), 't_max': ('num', ''), 't_points': ('int', ''),
    },
    'design': {
        'q0': ('num', ''), 'photon_energy': ('num', 'eV'), 'loss_amplitude': ('num', 'ueV'),
        'loss_length': ('num', 'um'), 'g_ref': ('num', 'ueV'), 'd_ref': ('num', 'um'),
        'gamma_sp': ('num', 'ueV'), 'd_min': ('num', 'um'), 'd_max': ('num', 'um'), 'd_points': ('int', ''),
    },
    'kerr': {
        'polarization': ('str', ''), 'detuning': ('num', 'ueV'), 'cooperativities': ('list', ''),
        'eta_tops': ('list', ''), 'detunings': ('list', 'ueV'),
    },
    'capture': {
        'n_qw': ('num', ''), 'r_qw': ('num', '/ns'), 'r_cap': ('num', '/ns'), 'r_x': ('num', '/ns'),
        'r_xx': ('num', '/ns'), 'period': ('num', 'ns'), 'qd_injection': ('num', ''),
        'side_peaks': ('int', ''), 'pulses': ('int', ''), 'streams': ('int', ''),
    },
    'dephasing': {
        'gamma_star': ('num', '/ns'), 'kappa_sd': ('num', '/ns'), 'sigma_sd': ('num', 'rad/ns'),
        'jitter_rate': ('num', '/ns'), 't1': ('num', 'ns'), 'delay': ('num', 'ns'),
        'time_bin': ('num', 'ns'), 'time_bins': ('list', 'ns'), 'pairs': ('int', ''),
    },
    'tradeoff': {
        'beta': ('num', ''), 'eta_top': ('num', ''), 'p_state': ('num', ''), 't1': ('num', 'ns'),
        'gamma_star': ('num', '/ns'), 'kappa_sd': ('num', '/ns'), 'sigma_trap': ('num', 'rad/ns'),
        'p_fill': ('num', ''), 'sigma_charge': ('num', 'rad/ns'), 'alpha': ('num', ''),
        'p_sat': ('num', ''), 'delay': ('num', 'ns'), 'jitter_rate': ('num', '/ns'), 'pairs': ('int', ''),
        'powers': ('list', ''), 'target_m': ('num', ''), 'target_b': ('num', ''), 'calibrate': ('bool', ''),
    },
    'telegraph': {
        'k_cap': ('num', '/us'), 'k_rel': ('num', '/us'), 'r_l': ('num', ''), 'r_e': ('num', ''),
        'flux': ('num', ''), 'eta_det': ('num', ''), 'dt': ('num', 'us'), 'noise_sigma': ('num', ''),
        'duration': ('num', 'us'), 'fluxes': ('list', ''), 'threshold': ('num', ''),
        'frequency_jump': ('num', 'ueV'), 'allow_equal_levels': ('bool', ''),
    },
    'gate': {
        'm': ('num', ''), 'overlaps': ('list', ''), 'm_points': ('int', ''),
    },
    'sweep': {
        'axis1': ('str', ''), 'grid1': ('str', ''), 'axis2': ('str', ''), 'grid2': ('str', ''),
        'command': ('str', ''),
    },
    'run': {
        'seed': ('int', ''), 'out': ('str', ''), 'jobs': ('int', ''),
    },
}


def _parse_bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ConfigError(f"cannot read {text!r} as a boolean")


class RunConfig:
    """
    Parsed run configuration

    :param sections: {section: {key: raw string}} after overrides
    :param source: file the configuration came from, if any
    """

    def __init__(self, sections: Dict[str, Dict[str, str]], source: Optional[str] = None):
        self.sections = {s: dict(v) for s, v in sections.items()}
        self.source = source
        self.validate()

    @classmethod
    def load(cls, path=None, overrides: Sequence[str] = ()) -> 'RunConfig':
        """
        Read a .cfg file (optional) and apply section.key=value overrides

        :param path: INI file, None for an empty configuration
        :param overrides: strings of the form 'section.key=value'
        """
        parser = ConfigParser(comment_prefixes=('#', ';'), inline_comment_prefixes=('#',),
                              interpolation=None)
        if path is not None:
            path = Path(path)
            if not path.is_file():
                raise ConfigError(f"config file {str(path)!r} not found")
            try:
                with open(path, 'r', encoding='utf-8') as f:
                    parser.read_file(f)
            except ConfigParserError as e:
                raise ConfigError(f"cannot parse {path}: {e}") from e
        sections = {s: {k: v.strip() for k, v in parser[s].items()} for s in parser.sections()}
        config = cls(sections, str(path) if path is not None else None)
        for item in overrides:
            config = config.with_override(*cls.split_override(item))
        return config

    @staticmethod
    def split_override(item: str):
        if '=' not in item:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        path, value = item.split('=', 1)
        return path.strip(), value.strip()

    @staticmethod
    def split_path(path: str):
        if path.count('.') != 1:
            raise ConfigError(f"parameter path {path!r} must look like section.key")
        section, key = path.split('.')
        return section.strip().lower(), key.strip().lower()

    def with_override(self, path: str, value) -> 'RunConfig':
        section, key = self.split_path(path)
        sections = {s: dict(v) for s, v in self.sections.items()}
        sections.setdefault(section, {})[key] = str(value)
        return RunConfig(sections, self.source)

    def validate(self):
        for section, values in self.sections.items():
            if section not in SCHEMA:
                raise ConfigError(f"unknown config section [{section}]")
            for key in values:
                if key not in SCHEMA[section]:
                    raise ConfigError(f"unknown key {key!r} in [{section}]")

    def has(self, section: str, key: str) -> bool:
        return key in self.sections.get(section, {})

    def _raw(self, section: str, key: str):
        return self.sections.get(section, {}).get(key)

    def get(self, section: str, key: str, default=None):
        """Value converted according to SCHEMA, default when the key is absent"""
        raw = self._raw(section, key)
        if raw is None:
            return default
        kind, unit = SCHEMA[section][key]
        try:
            if kind == 'num':
                return parse_quantity(raw, unit)
            if kind == 'int':
                value = float(raw)
                if value != int(value):
                    raise ValueError(raw)
                return int(value)
            if kind == 'bool':
                return _parse_bool(raw)
            if kind == 'list':
                items = [x for x in raw.split(',') if x.strip()]
                if not items:
                    raise ConfigError(f"[{section}] {key} is an empty list")
                return [parse_quantity(x, unit) for x in items]
            return raw
        except ValueError as e:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {kind}") from e

    def require(self, section: str, key: str):
        value = self.get(section, key)
        if value is None:
            raise ConfigError(f"[{section}] {key} is required for this command")
        return value

    def as_dict(self) -> dict:
        return {s: dict(sorted(v.items())) for s, v in sorted(self.sections.items()) if v}

    def hash(self) -> str:
        """Stable under comments, whitespace and key order"""
        return stable_hash(self.as_dict())

    # ---- run settings ----
    @property
    def seed(self) -> Optional[int]:
        return self.get('run', 'seed')

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError("a seed is required for stochastic commands: use --seed or [run] seed")
        return self.seed

    @property
    def jobs(self) -> int:
        return max(1, self.get('run', 'jobs', 1))

    @property
    def out_dir(self) -> Path:
        return Path(self.get('run', 'out') or os.environ.get(OUT_ENV) or DEFAULT_OUT)

    # ---- domain objects ----
    def device_params(self) -> DeviceParams:
        """Device from raw rates or from fit-level figures (cooperativity, eta_top, kappa)"""
        get = lambda key, default=None: self.get('device', key, default)
        eta_in = get('eta_in', 1.0)
        omega_c, omega_qd = ueV_to_rad_ns(get('omega_c', 0.0)), ueV_to_rad_ns(get('omega_qd', 0.0))
        if self.has('device', 'cooperativity'):
            C = get('cooperativity')
            g = ueV_to_rad_ns(self.require('device', 'g'))
            gamma_sp = ueV_to_rad_ns(self.require('device', 'gamma_sp'))
            if self.has('device', 'kappa'):
                kappa = ueV_to_rad_ns(get('kappa'))
                gamma_star = g ** 2 / (C * kappa) - gamma_sp / 2
                if gamma_star < -1e-12:
                    raise InvalidDeviceError("cooperativity, g and kappa imply a negative pure dephasing")
                gamma_star = max(gamma_star, 0.0)
            else:
                gamma_star = ueV_to_rad_ns(get('gamma_star', 0.0))
            return DeviceParams.from_figures(C, self.require('device', 'eta_top'), eta_in, g, gamma_sp,
                                             gamma_star, omega_c, omega_qd)
        rates = {k: get(k, 0.0) for k in ('g', 'kappa_top', 'kappa_bottom', 'kappa_loss', 'gamma_sp',
                                          'gamma_star', 'omega_c', 'omega_qd')}
        return DeviceParams.from_ueV(eta_in=eta_in, **rates)

    def hilbert_config(self) -> HilbertConfig:
        defaults = HilbertConfig()
        return HilbertConfig(
            n_max=self.get('solver', 'n_max', defaults.n_max),
            steady_tol=self.get('solver', 'steady_tol', defaults.steady_tol),
            ode_rtol=self.get('solver', 'ode_rtol', defaults.ode_rtol),
            ode_atol=self.get('solver', 'ode_atol', defaults.ode_atol),
            truncation_tol=self.get('solver', 'truncation_tol', defaults.truncation_tol),
            n_max_cap=self.get('solver', 'n_max_cap', defaults.n_max_cap),
        )

    @property
    def frame(self) -> str:
        return self.get('solver', 'frame', 'displaced')

    def converge(self, default: bool = False) -> bool:
        return self.get('solver', 'converge', default)

    def detuning_grid(self, default_span: float) -> np.ndarray:
        """Laser detunings (rad/ns) from [drive]; default span in rad/ns around resonance"""
        span_ueV = default_span / ueV_to_rad_ns(1.0)
        low = self.get('drive', 'detuning_min', -span_ueV)
        high = self.get('drive', 'detuning_max', span_ueV)
        points = self.get('drive', 'detuning_points', 201)
        if points < 1 or high < low:
            raise DomainError("detuning grid needs detuning_points >= 1 and detuning_max >= detuning_min")
        return ueV_to_rad_ns(np.linspace(low, high, points))

    def cw_drive(self) -> DriveSpec:
        return DriveSpec.cw(self.get('drive', 'flux', 1e-6), ueV_to_rad_ns(self.get('drive', 'detuning', 0.0)))

    def photon_grid(self) -> np.ndarray:
        if self.has('pulse', 'photons') and not self.has('pulse', 'photons_min'):
            return np.array([self.get('pulse', 'photons')])
        low = self.get('pulse', 'photons_min', 0.01)
        high = self.get('pulse', 'photons_max', 1000.0)
        points = self.get('pulse', 'photons_points', 26)
        if low <= 0 or high < low or points < 1:
            raise DomainError("photon grid needs 0 < photons_min <= photons_max and photons_points >= 1")
        return np.logspace(np.log10(low), np.log10(high), points)

    def pulse_bandwidth(self, params: DeviceParams) -> float:
        if self.has('pulse', 'bandwidth'):
            return ueV_to_rad_ns(self.get('pulse', 'bandwidth'))
        return params.kappa

    def tuning_curves(self) -> TuningCurves:
        return TuningCurves(
            d_omega_qd=ueV_to_rad_ns(self.require('tuning', 'd_omega_qd')),
            d_omega_c=ueV_to_rad_ns(self.require('tuning', 'd_omega_c')),
            t_ref=self.get('tuning', 't_ref', 0.0),
        )

    def temperature_grid(self) -> np.ndarray:
        if self.has('tuning', 'temperature') and not self.has('tuning', 't_min'):
            return np.array([self.get('tuning', 'temperature')])
        low, high = self.require('tuning', 't_min'), self.require('tuning', 't_max')
        return np.linspace(low, high, self.get('tuning', 't_points', 41))

    def loss_model(self) -> LossModel:
        defaults = LossModel()
        get = lambda key: self.get('design', key)
        return LossModel(
            Q0=get('q0') if get('q0') is not None else defaults.Q0,
            photon_energy_eV=get('photon_energy') if get('photon_energy') is not None else defaults.photon_energy_eV,
            loss_amplitude=ueV_to_rad_ns(get('loss_amplitude')) if get('loss_amplitude') is not None
            else defaults.loss_amplitude,
            loss_length=get('loss_length') if get('loss_length') is not None else defaults.loss_length,
            g_ref=ueV_to_rad_ns(get('g_ref')) if get('g_ref') is not None else defaults.g_ref,
            d_ref=get('d_ref') if get('d_ref') is not None else defaults.d_ref,
            gamma_sp=ueV_to_rad_ns(get('gamma_sp')) if get('gamma_sp') is not None else defaults.gamma_sp,
        )

    def diameter_grid(self) -> np.ndarray:
        return np.linspace(self.get('design', 'd_min', 1.0), self.get('design', 'd_max', 5.0),
                           self.get('design', 'd_points', 401))

    def capture_model(self) -> CaptureModel:
        get = lambda key, default=None: self.get('capture', key, default)
        return CaptureModel(
            n_qw=self.require('capture', 'n_qw'),
            r_qw=self.require('capture', 'r_qw'),
            r_cap=self.require('capture', 'r_cap'),
            r_x=self.require('capture', 'r_x'),
            r_xx=self.require('capture', 'r_xx'),
            period=get('period', 12.2),
            seed=self.require_seed(),
            qd_injection=get('qd_injection', 0.0),
            side_peaks=get('side_peaks', 10),
        )

    def dephasing_model(self) -> DephasingModel:
        return DephasingModel(
            gamma_star=self.get('dephasing', 'gamma_star', 0.0),
            kappa_sd=self.get('dephasing', 'kappa_sd', 0.0),
            sigma_sd=self.get('dephasing', 'sigma_sd', 0.0),
            jitter_rate=self.get('dephasing', 'jitter_rate'),
            seed=self.require_seed(),
        )

    def tradeoff_model(self) -> TradeoffModel:
        get = lambda key, default=None: self.get('tradeoff', key, default)
        defaults = TradeoffModel(beta=0.5, eta_top=0.5, p_state=1.0, T1=1.0)
        return TradeoffModel(
            beta=self.require('tradeoff', 'beta'),
            eta_top=self.require('tradeoff', 'eta_top'),
            p_state=get('p_state', 1.0),
            T1=self.require('tradeoff', 't1'),
            gamma_star=get('gamma_star', defaults.gamma_star),
            kappa_sd=get('kappa_sd', defaults.kappa_sd),
            sigma_trap=get('sigma_trap', defaults.sigma_trap),
            p_fill=get('p_fill', defaults.p_fill),
            sigma_charge=get('sigma_charge', defaults.sigma_charge),
            alpha=get('alpha', defaults.alpha),
            p_sat=get('p_sat', defaults.p_sat),
            delay=get('delay', defaults.delay),
            jitter_rate=get('jitter_rate'),
            n_pairs=get('pairs', defaults.n_pairs),
            seed=self.require_seed(),
        )

    def telegraph_model(self) -> TelegraphModel:
        defaults = TelegraphModel()
        get = lambda key, default: self.get('telegraph', key, default)
        return TelegraphModel(
            k_cap=get('k_cap', defaults.k_cap),
            k_rel=get('k_rel', defaults.k_rel),
            R_L=get('r_l', defaults.R_L),
            R_E=get('r_e', defaults.R_E),
            flux=get('flux', defaults.flux),
            eta_det=get('eta_det', defaults.eta_det),
            dt=get('dt', defaults.dt),
            noise_sigma=get('noise_sigma', defaults.noise_sigma),
            seed=self.require_seed(),
            allow_equal_levels=get('allow_equal_levels', False),
        )

    def gate_overlaps(self) -> List[float]:
        if self.has('gate', 'overlaps'):
            return self.get('gate', 'overlaps')
        return list(np.linspace(0.0, 1.0, self.get('gate', 'm_points', 21)))

    def sweep_axes(self) -> list:
        """[(section.key, [raw values])], at most two axes, every path in SCHEMA"""
        axes = []
        for n in (1, 2):
            path = self.get('sweep', f'axis{n}')
            if path is None:
                continue
            section, key = self.split_path(path)
            if section not in SCHEMA or key not in SCHEMA[section]:
                raise ConfigError(f"sweep axis {path!r} is not a known parameter")
            if section == 'sweep':
                raise ConfigError("the sweep section cannot be swept")
            grid = [v.strip() for v in (self.get('sweep', f'grid{n}') or '').split(',') if v.strip()]
            if not grid:
                raise ConfigError(f"sweep grid{n} is empty")
            axes.append((f'{section}.{key}', grid))
        if not axes:
            raise ConfigError("sweep needs [sweep] axis1 and grid1")
        return axes
