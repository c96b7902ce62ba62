import numpy as np
import pytest

from hilbert import HilbertConfig
from qedcore import DeviceParams
from sensing import TelegraphModel


@pytest.fixture
def strong_device():
    """Strongly coupled device, g well above kappa/4"""
    return DeviceParams.from_ueV(g=20.0, kappa_top=12.0, kappa_bottom=12.0, kappa_loss=16.0,
                                 gamma_sp=0.5, eta_in=0.9)


@pytest.fixture
def weak_device():
    """Weakly coupled device, bad cavity"""
    return DeviceParams.from_ueV(g=8.0, kappa_top=30.0, kappa_bottom=30.0, kappa_loss=40.0,
                                 gamma_sp=0.5, gamma_star=0.3, eta_in=0.95)


@pytest.fixture
def lossless_device():
    """Single-sided, lossless cavity: every photon is reflected"""
    return DeviceParams.from_ueV(g=15.0, kappa_top=40.0, kappa_bottom=0.0, kappa_loss=0.0,
                                 gamma_sp=0.5, eta_in=1.0)


@pytest.fixture
def solver_cfg():
    return HilbertConfig(n_max=4)


@pytest.fixture
def telegraph_model():
    return TelegraphModel(seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
