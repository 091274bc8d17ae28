"""Quantity parsing and plain-text config ingestion.

All frequencies and rates are stored internally in rad/s.  Under the default
``angular`` convention a quoted "147 MHz" is read as 147e6 rad/s; under
``cyclic`` the ingested value is additionally multiplied by 2*pi.
Lengths are in m, masses in kg, powers in W, phases in rad ("1.5pi" forms
are accepted).
"""

from __future__ import annotations

import math
import re

from .errors import UnitParseError

ANGULAR = "angular"
CYCLIC = "cyclic"

_FREQ_SCALE = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
_LENGTH_SCALE = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9}
_MASS_SCALE = {"kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9, "µg": 1e-9,
               "ng": 1e-12, "pg": 1e-15}
_POWER_SCALE = {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "µW": 1e-6, "nW": 1e-9}

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_QUANTITY_RE = re.compile(rf"^\s*({_NUM})\s*([a-zA-Zµ]*)\s*$")
_PI_RE = re.compile(rf"^\s*({_NUM})\s*pi\s*$")


def parse_quantity(text, convention=ANGULAR):
    """Parse a quantity string with an optional SI suffix into SI units.

    Returns a plain float: rad/s for frequency suffixes, m / kg / W for
    length / mass / power, rad for "pi" or "rad" forms, and the bare number
    otherwise.  Plain floats and ints pass through unchanged.
    """
    if isinstance(text, (int, float)):
        return float(text)
    m = _PI_RE.match(text)
    if m:
        return float(m.group(1)) * math.pi
    m = _QUANTITY_RE.match(text)
    if m is None:
        raise UnitParseError(f"cannot parse quantity {text!r}")
    value, unit = float(m.group(1)), m.group(2)
    if unit == "":
        return value
    if unit in _FREQ_SCALE:
        scale = _FREQ_SCALE[unit]
        if convention == CYCLIC:
            scale *= 2.0 * math.pi
        return value * scale
    if unit in _LENGTH_SCALE:
        return value * _LENGTH_SCALE[unit]
    if unit in _MASS_SCALE:
        return value * _MASS_SCALE[unit]
    if unit in _POWER_SCALE:
        return value * _POWER_SCALE[unit]
    if unit == "rad":
        return value
    raise UnitParseError(f"unknown unit suffix {unit!r} in {text!r}")


def format_quantity(value, unit, convention=ANGULAR):
    """Format an SI value back into the given suffix, round-trip exact.

    ``parse_quantity(format_quantity(v, u)) == v`` to 1e-12 relative.
    """
    for table in (_LENGTH_SCALE, _MASS_SCALE, _POWER_SCALE):
        if unit in table:
            return f"{value / table[unit]:.17g} {unit}"
    if unit in _FREQ_SCALE:
        scale = _FREQ_SCALE[unit]
        if convention == CYCLIC:
            scale *= 2.0 * math.pi
        return f"{value / scale:.17g} {unit}"
    if unit == "pi":
        return f"{value / math.pi:.17g}pi"
    if unit == "rad":
        return f"{value:.17g} rad"
    raise UnitParseError(f"unknown unit suffix {unit!r}")


def read_config(path):
    """Read a plain-text ``key = value`` file into a dict of raw strings.

    Lines starting with '#' and blank lines are skipped; inline comments
    after '#' are stripped.
    """
    raw = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UnitParseError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            raw[key.strip()] = value.strip()
    return raw
