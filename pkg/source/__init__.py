from .capture import (
    CaptureModel,
    CaptureSimulator,
    EmissionRecord,
    G2Result,
    simulate_g2,
    g2_vs_temperature,
    stream_seed,
)
from .hom import DephasingModel, HomResult, hom_indistinguishability, hom_vs_time_bin, intrinsic_overlap
from .brightness import (
    SCHEMES,
    TradeoffModel,
    brightness,
    pump_probability,
    brightness_vs_power,
    operating_point,
    tradeoff,
    calibrate_charge_noise,
)

__all__ = [
    'CaptureModel',
    'CaptureSimulator',
    'EmissionRecord',
    'G2Result',
    'simulate_g2',
    'g2_vs_temperature',
    'stream_seed',
    'DephasingModel',
    'HomResult',
    'hom_indistinguishability',
    'hom_vs_time_bin',
    'intrinsic_overlap',
    'SCHEMES',
    'TradeoffModel',
    'brightness',
    'pump_probability',
    'brightness_vs_power',
    'operating_point',
    'tradeoff',
    'calibrate_charge_noise',
]
