"""
Figures of merit from P-T and V-T data.

Quadratic P-T regression (coefficients in mW units so they compare digit
for digit with published fits), thermal resistance dT/dP, linear sensor
calibration and its inverse.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from ..errors import ConfigError, RankDeficiencyError, ZeroSlopeError


@dataclass(frozen=True, eq=False)
class PTCurve:
    """Steady temperature of the sensing area versus heater power."""

    powers: np.ndarray
    temperatures: np.ndarray
    probe: str = "sensor"
    provenance: str = "imported"

    def __post_init__(self):
        powers = np.asarray(self.powers, dtype=float)
        temperatures = np.asarray(self.temperatures, dtype=float)
        if powers.shape != temperatures.shape or powers.ndim != 1:
            raise ConfigError("powers and temperatures must be 1-D arrays of equal length")
        if powers.size == 0:
            raise ConfigError("P-T curve is empty")
        if np.any(powers < 0):
            raise ConfigError("powers must be >= 0")
        if np.any(np.diff(powers) <= 0):
            raise ConfigError("powers must be strictly increasing")
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "temperatures", temperatures)

    @property
    def powers_mw(self) -> np.ndarray:
        return self.powers * 1e3

    def slopes(self) -> np.ndarray:
        """Finite-difference R_th between consecutive samples (K/mW)."""
        return np.diff(self.temperatures) / np.diff(self.powers_mw)


@dataclass(frozen=True)
class QuadraticFit:
    """T = c0 + c1 P + c2 P^2 with P in mW."""

    c0: float
    c1: float
    c2: float
    residual_rms: float = 0.0
    samples: int = 0
    provenance: str = "imported"

    def predict(self, power_mw):
        p = np.asarray(power_mw, dtype=float)
        return self.c0 + self.c1 * p + self.c2 * p * p

    def in_watts(self) -> tuple[float, float, float]:
        """Coefficients for P in W: (K, K/W, K/W^2)."""
        return self.c0, self.c1 * 1e3, self.c2 * 1e6

    def as_dict(self) -> dict:
        return {
            "c0_K": self.c0,
            "c1_K_per_mW": self.c1,
            "c2_K_per_mW2": self.c2,
            "residual_rms_K": self.residual_rms,
            "samples": self.samples,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class CalibrationCurve:
    """Sensor voltage V = slope * T + intercept at constant bias current."""

    slope: float
    intercept: float
    bias_current: float
    residual_rms: float = 0.0
    samples: int = 0

    def as_dict(self) -> dict:
        return {
            "slope_V_per_K": self.slope,
            "intercept_V": self.intercept,
            "bias_current_A": self.bias_current,
            "residual_rms_V": self.residual_rms,
            "samples": self.samples,
        }


def polynomial_least_squares(x: np.ndarray, y: np.ndarray, degree: int) -> np.ndarray:
    """
    Least-squares polynomial coefficients (ascending order).

    Abscissae are centered and scaled to [-1, 1] and the system is solved
    through a QR factorization; coefficients are mapped back afterwards.

    Raises:
        RankDeficiencyError: with fewer than degree + 1 distinct abscissae
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    distinct = np.unique(x).size
    if distinct < degree + 1:
        raise RankDeficiencyError(
            f"need at least {degree + 1} distinct abscissae for a degree-{degree} fit, "
            f"got {distinct}"
        )

    center = float(np.mean(x))
    scale = float(np.max(np.abs(x - center)))
    u = (x - center) / scale
    design = np.vander(u, degree + 1, increasing=True)
    q, r = np.linalg.qr(design)
    scaled = solve_triangular(r, q.T @ y)

    # Expand sum a_j ((x - center) / scale)^j into powers of x
    coeffs = np.zeros(degree + 1)
    for j, a in enumerate(scaled):
        for i in range(j + 1):
            coeffs[i] += a * math.comb(j, i) * (-center) ** (j - i) / scale**j
    return coeffs


def fit_quadratic(curve: PTCurve) -> QuadraticFit:
    """
    Quadratic regression of a P-T curve.

    Args:
        curve: At least 3 distinct powers

    Returns:
        QuadraticFit in mW units with residual RMS in K
    """
    p = curve.powers_mw
    c0, c1, c2 = polynomial_least_squares(p, curve.temperatures, 2)
    residual = curve.temperatures - (c0 + c1 * p + c2 * p * p)
    return QuadraticFit(
        c0=float(c0),
        c1=float(c1),
        c2=float(c2),
        residual_rms=float(np.sqrt(np.mean(residual**2))),
        samples=int(p.size),
        provenance=curve.provenance,
    )


def thermal_resistance(fit: QuadraticFit, power_mw: float) -> float:
    """R_th = dT/dP of the fit at a power (K/mW)."""
    if power_mw < 0:
        raise ConfigError("power must be >= 0")
    return fit.c1 + 2.0 * fit.c2 * power_mw


def power_for_temperature(fit: QuadraticFit, temperature: float) -> float:
    """
    Smallest non-negative power (mW) at which the fit reaches a temperature.

    Raises:
        ConfigError: if the fit never reaches the temperature for P >= 0
    """
    a, b, c = fit.c2, fit.c1, fit.c0 - temperature
    if c == 0:
        return 0.0
    if a == 0:
        roots = [] if b == 0 else [-c / b]
    else:
        disc = b * b - 4 * a * c
        if disc < 0:
            roots = []
        else:
            # Numerically stable root pair
            q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
            roots = [q / a] + ([c / q] if q != 0 else [])
    candidates = sorted(r for r in roots if r >= 0)
    if not candidates:
        raise ConfigError(f"{temperature} K is unreachable for P >= 0")
    return candidates[0]


def fit_linear_calibration(
    temperatures,
    voltages,
    bias_current: float,
) -> CalibrationCurve:
    """
    Least-squares line V = slope * T + intercept.

    Args:
        temperatures: Sample temperatures (K), at least 2 distinct
        voltages: Sensor voltages (V)
        bias_current: Constant bias current during calibration (A)

    Returns:
        CalibrationCurve with residual RMS in V
    """
    t = np.asarray(temperatures, dtype=float)
    v = np.asarray(voltages, dtype=float)
    if t.shape != v.shape:
        raise ConfigError("temperature and voltage columns differ in length")
    intercept, slope = polynomial_least_squares(t, v, 1)
    residual = v - (slope * t + intercept)
    return CalibrationCurve(
        slope=float(slope),
        intercept=float(intercept),
        bias_current=float(bias_current),
        residual_rms=float(np.sqrt(np.mean(residual**2))),
        samples=int(t.size),
    )


def voltage_to_temperature(cal: CalibrationCurve, voltage):
    """Invert the calibration line: T = (V - intercept) / slope."""
    if cal.slope == 0 or not math.isfinite(cal.slope):
        raise ZeroSlopeError("calibration slope is zero; voltage cannot be inverted")
    result = (np.asarray(voltage, dtype=float) - cal.intercept) / cal.slope
    return float(result) if result.ndim == 0 else result
