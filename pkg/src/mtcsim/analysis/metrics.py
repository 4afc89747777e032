"""Steady-state figures of merit read off a temperature field."""

import math

import numpy as np

from ..model.grid import Box
from ..solver.steady import TemperatureField


def temperature_uniformity(field: TemperatureField, region: "str | Box") -> dict:
    """
    Spread of temperature over a region (e.g. the gas-sensitive area).

    Returns:
        Dict with min, max, mean, spread (max - min) and std in K
    """
    values = field.values[field.grid.region_mask(region)]
    mean = math.fsum(values.tolist()) / values.size
    return {
        "min": float(values.min()),
        "max": float(values.max()),
        "mean": mean,
        "spread": float(values.max() - values.min()),
        "std": float(np.sqrt(np.mean((values - mean) ** 2))),
    }


def rise_resistance(temperature: float, ambient: float, power: float) -> float:
    """Chord thermal resistance (T - T_amb) / P in K/mW."""
    if not power > 0:
        raise ValueError("power must be > 0")
    return (temperature - ambient) / (power * 1e3)
