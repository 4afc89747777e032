"""
Probe statistics and the boundary energy-balance audit.
"""

import math

import numpy as np

from ..errors import ScenarioError
from ..model.grid import Box
from ..model.scenario import Probe
from .assembly import Discretization, face_conductances, link_conductances
from .steady import TemperatureField


def probe(field, region: "str | Box", statistic: str = "average"):
    """
    Volume-weighted average or maximum of a field over a region.

    Voxels share one volume, so the volume-weighted average is the mean.
    A transient trace only keeps the series of the probes declared in its
    scenario: pass the trace and a probe name to get that series (one value
    per time step, statistic as declared).

    Raises:
        EmptyRegionError: if the region has no non-void voxel
        ScenarioError: if a trace has no series for the probe
    """
    if not isinstance(field, TemperatureField):
        if not isinstance(region, str) or region not in field.probes:
            raise ScenarioError(
                f"trace has no series for probe {region!r}; declare it in the scenario"
            )
        return np.asarray(field.probes[region], dtype=float)

    mask = field.grid.region_mask(region)
    values = field.values[mask]
    if statistic == "max":
        return float(values.max())
    if statistic == "average":
        return math.fsum(values.tolist()) / values.size
    raise ValueError(f"unknown statistic '{statistic}'")


def probe_all(field: TemperatureField, probes: tuple[Probe, ...]) -> dict[str, float]:
    return {p.name: probe(field, p.region, p.statistic) for p in probes}


def region_summary(field: TemperatureField, region: "str | Box") -> dict:
    """Both statistics of a region (for probe reports)."""
    return {
        "max": probe(field, region, "max"),
        "average": probe(field, region, "average"),
    }


def boundary_flux(disc: Discretization, field: TemperatureField) -> float:
    """
    Heat leaving through every fixed-temperature surface (W).

    Sums k*A/d*(T_voxel - T_boundary) over fixed faces plus the harmonic
    conductance flows from free voxels into held voxels and the heat generated
    inside held voxels. At steady state this equals the injected power.
    """
    temperature = field.values.ravel()
    terms = []

    gf = face_conductances(disc, temperature)
    terms.extend((gf * (temperature[disc.face_voxels] - disc.face_temperatures)).tolist())

    a, b, g = link_conductances(disc, temperature)
    index = disc.unknown_index
    for free, held, sign in ((a, b, 1.0), (b, a, 1.0)):
        sel = (index[free] >= 0) & (index[held] < 0)
        flow = g[sel] * (temperature[free[sel]] - temperature[held[sel]])
        terms.extend((sign * flow).tolist())

    terms.append(disc.held_generation())
    return math.fsum(terms)
