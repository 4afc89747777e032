"""
Thermal time-constant extraction from step responses.

Primary estimate: first time the probe crosses 1 - 1/e (63.2 %) of the
settled rise, interpolated between samples. Secondary estimate: slope of
ln(1 - rise fraction) over the 10-90 % window.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, RankDeficiencyError, UnsettledTraceError
from .fitting import polynomial_least_squares

logger = logging.getLogger(__name__)

CROSSING_FRACTION = 1.0 - math.exp(-1.0)
SETTLED_TAIL = 0.05
SETTLED_TOLERANCE = 0.005
FIT_WINDOW = (0.1, 0.9)


@dataclass(frozen=True)
class TimeConstant:
    probe: str
    crossing: float
    exponential_fit: float | None
    initial: float
    rise: float
    warnings: tuple[str, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "probe": self.probe,
            "status": "ok",
            "tau_crossing_s": self.crossing,
            "tau_exponential_fit_s": self.exponential_fit,
            "initial_K": self.initial,
            "rise_K": self.rise,
            "warnings": list(self.warnings),
        }


def _series(trace, probe_name: str) -> tuple[np.ndarray, np.ndarray]:
    if probe_name not in trace.probes:
        known = ", ".join(trace.probes) or "none"
        raise ConfigError(f"trace has no probe '{probe_name}' (known: {known})")
    return np.asarray(trace.times, dtype=float), np.asarray(trace.probes[probe_name], dtype=float)


def check_settled(values: np.ndarray) -> tuple[float, float]:
    """
    Initial value and settled rise of a step response.

    Raises:
        UnsettledTraceError: on zero rise or if the last 5 % of samples still
            move by 0.5 % of the rise or more
    """
    if values.size < 3:
        raise UnsettledTraceError("trace has fewer than 3 samples")
    initial = float(values[0])
    rise = float(values[-1]) - initial
    if rise == 0 or not math.isfinite(rise):
        raise UnsettledTraceError("trace shows no rise")
    tail = values[-max(2, int(math.ceil(SETTLED_TAIL * values.size))):]
    drift = float(tail.max() - tail.min())
    if drift >= SETTLED_TOLERANCE * abs(rise):
        raise UnsettledTraceError(
            f"trace not settled: last {tail.size} samples vary by {drift:.4g} K "
            f"({100 * drift / abs(rise):.3g} % of the rise)"
        )
    return initial, rise


def extract_time_constant(trace, probe_name: str) -> TimeConstant:
    """
    Time constant of one probe of a step-response trace.

    Args:
        trace: Object with .times and .probes (name -> values), e.g. a
            TransientTrace
        probe_name: Probe to analyze

    Returns:
        TimeConstant with both estimators
    """
    times, values = _series(trace, probe_name)
    initial, rise = check_settled(values)
    fraction = (values - initial) / rise
    warnings = []

    above = fraction >= CROSSING_FRACTION
    flips = np.flatnonzero(above[1:] != above[:-1])
    if flips.size == 0:
        raise UnsettledTraceError("trace never crosses 63.2 % of its rise")
    if flips.size > 1:
        message = f"probe '{probe_name}' crosses 63.2 % {flips.size} times; using the first"
        logger.warning(message)
        warnings.append(message)
    i = int(flips[0])
    f0, f1 = fraction[i], fraction[i + 1]
    crossing = times[i] + (CROSSING_FRACTION - f0) / (f1 - f0) * (times[i + 1] - times[i])
    crossing -= times[0]

    lo, hi = FIT_WINDOW
    window = (fraction >= lo) & (fraction <= hi)
    fitted = None
    try:
        y = np.log(1.0 - fraction[window])
        _, slope = polynomial_least_squares(times[window], y, 1)
        if slope < 0:
            fitted = float(-1.0 / slope)
    except RankDeficiencyError:
        pass
    if fitted is None:
        message = "too few samples in the 10-90 % window for the exponential fit"
        logger.warning(message)
        warnings.append(message)

    return TimeConstant(
        probe=probe_name,
        crossing=float(crossing),
        exponential_fit=fitted,
        initial=initial,
        rise=rise,
        warnings=tuple(warnings),
    )


def time_constant_report(trace, probe_name: str) -> dict:
    """Dict form of extract_time_constant; unsettled traces are reported, not raised."""
    try:
        return extract_time_constant(trace, probe_name).as_dict()
    except UnsettledTraceError as e:
        logger.warning("Time constant of '%s' unavailable: %s", probe_name, e)
        return {"probe": probe_name, "status": "unsettled", "reason": str(e)}
