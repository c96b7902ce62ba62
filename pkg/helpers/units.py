"""
    Unit conventions.

    Rates and frequencies live in rad/ns (or 1/ns) inside the device,
    solver, reflectivity and source packages; the sensing package counts in
    microseconds. Energies in μeV convert with hbar = 0.65821 μeV·ns.
"""
import re

from helpers.errors import ConfigError

HBAR_UEV_NS = 0.65821
UEV_TO_RAD_NS = 1.0 / HBAR_UEV_NS

# suffix -> (dimension, factor to the dimension's base unit)
_UNITS = {
    'ns': ('time', 1e-9),
    'ps': ('time', 1e-12),
    'us': ('time', 1e-6),
    'ms': ('time', 1e-3),
    's': ('time', 1.0),
    'rad/ns': ('rate', 1e9),
    '/ns': ('rate', 1e9),
    '/us': ('rate', 1e6),
    '/s': ('rate', 1.0),
    'ueV': ('rate', UEV_TO_RAD_NS * 1e9),
    'meV': ('rate', UEV_TO_RAD_NS * 1e12),
    'um': ('length', 1e-6),
    'nm': ('length', 1e-9),
    'eV': ('energy', 1.0),
}

_QUANTITY = re.compile(r'^\s*([-+0-9.eE]+)\s*([A-Za-z/]*)\s*$')


def ueV_to_rad_ns(value: float) -> float:
    return value * UEV_TO_RAD_NS


def rad_ns_to_ueV(value: float) -> float:
    return value * HBAR_UEV_NS


def convert(value: float, from_unit: str, to_unit: str) -> float:
    """
    Convert a value between two known units of the same dimension

    :param value: numeric value expressed in from_unit
    :param from_unit: unit suffix, e.g. 'ueV'
    :param to_unit: target unit suffix, e.g. 'rad/ns'
    :return: value in to_unit
    """
    if from_unit not in _UNITS or to_unit not in _UNITS:
        raise ConfigError(f"Unknown unit {from_unit!r} or {to_unit!r}")
    dim_from, f_from = _UNITS[from_unit]
    dim_to, f_to = _UNITS[to_unit]
    if dim_from != dim_to:
        raise ConfigError(f"Cannot convert {from_unit} ({dim_from}) to {to_unit} ({dim_to})")
    return value * f_from / f_to


def parse_quantity(text, unit: str = '') -> float:
    """
    Parse a config value with an optional unit suffix

    :param text: e.g. '16 ueV', '1us', '0.95'
    :param unit: internal unit the value is returned in; '' for dimensionless
    :return: float in the requested unit
    """
    if isinstance(text, (int, float)):
        return float(text)
    match = _QUANTITY.match(str(text))
    if match is None:
        raise ConfigError(f"Cannot parse quantity {text!r}")
    value = float(match.group(1))
    suffix = match.group(2)
    if not suffix:
        return value
    if not unit:
        raise ConfigError(f"Quantity {text!r} carries a unit where a plain number is expected")
    return convert(value, suffix, unit)
