import numpy as np
import pytest

from esomit.config import parse_quantity
from esomit.params import build_system
from esomit.presets import _default_drive

MHZ = parse_quantity("1 MHz")

BASE_RAW = {
    "omega0": "193 THz", "gamma0": "1 MHz", "gamma1": "1 MHz",
    "gamma2": "1 MHz", "J": "0 MHz", "t0": 1.0, "phi3": "1.5pi",
    "R": "34.5 um", "m": "50 ng", "omega_m": "147 MHz",
    "gamma_m": "0.24 MHz",
}

POINT_PRESETS = [
    "baseline", "es1-ep1", "es1-ep2", "es1-ep3", "es1-np",
    "es2-ep1", "es2-ep2", "es2-ep3", "es2-ep4", "es2-ep5", "es2-np1",
    "fig2a-black", "fig2a-red",
]


def make_params(**over):
    raw = dict(BASE_RAW)
    raw.update(over)
    return build_system(raw)


def make_drive(params, **over):
    return _default_drive(params, **over)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
