"""
Unit parsing for config files.

Config values may be plain numbers (already SI) or strings with a unit
suffix such as "150um", "500 nm", "1mW" or "20us". Everything is converted
to SI doubles at parse time.
"""

import re

from ..errors import UnitError

LENGTH_UNITS = {
    "m": 1.0,
    "mm": 1e-3,
    "um": 1e-6,
    "µm": 1e-6,
    "μm": 1e-6,
    "nm": 1e-9,
}

POWER_UNITS = {
    "W": 1.0,
    "mW": 1e-3,
    "uW": 1e-6,
    "µW": 1e-6,
}

TIME_UNITS = {
    "s": 1.0,
    "ms": 1e-3,
    "us": 1e-6,
    "µs": 1e-6,
}

TEMPERATURE_UNITS = {
    "K": 1.0,
}

_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([^\d\s].*)?\s*$")


def parse_quantity(value, units: dict[str, float], kind: str) -> float:
    """
    Convert a config value to SI.

    Args:
        value: Number (taken as SI) or string with an optional unit suffix
        units: Suffix -> SI scale table
        kind: Quantity name used in error messages

    Returns:
        Value in SI units
    """
    if isinstance(value, bool):
        raise UnitError(f"invalid {kind}: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise UnitError(f"invalid {kind}: {value!r}")

    match = _QUANTITY_RE.match(value)
    if not match:
        raise UnitError(f"invalid {kind}: {value!r}")

    number, suffix = match.groups()
    if not suffix:
        return float(number)

    suffix = suffix.strip()
    if suffix not in units:
        allowed = ", ".join(units)
        raise UnitError(f"unknown {kind} unit '{suffix}' in {value!r} (allowed: {allowed})")
    return float(number) * units[suffix]


def parse_length(value) -> float:
    return parse_quantity(value, LENGTH_UNITS, "length")


def parse_power(value) -> float:
    return parse_quantity(value, POWER_UNITS, "power")


def parse_time(value) -> float:
    return parse_quantity(value, TIME_UNITS, "time")


def parse_temperature(value) -> float:
    return parse_quantity(value, TEMPERATURE_UNITS, "temperature")
