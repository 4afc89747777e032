"""
Artifact readers and writers: JSON reports, CSV tables, legacy VTK fields.
"""

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import ArtifactIOError, ConfigError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _ensure_parent(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ArtifactIOError(f"cannot create directory {path.parent}: {e}") from e


def write_json(path: str | Path, data: dict) -> Path:
    """Write a JSON artifact with sorted keys (byte-stable for equal data)."""
    path = Path(path)
    _ensure_parent(path)
    try:
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}") from e
    logger.debug("Wrote %s", path)
    return path


def read_json(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"file not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    except OSError as e:
        raise ArtifactIOError(f"cannot read {path}: {e}") from e


def write_table(path: str | Path, columns: dict[str, np.ndarray]) -> Path:
    """Write named columns as CSV (header row, full double precision)."""
    path = Path(path)
    _ensure_parent(path)
    frame = pd.DataFrame({name: np.asarray(values, dtype=float) for name, values in columns.items()})
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}") from e
    logger.debug("Wrote %s (%d rows)", path, len(frame))
    return path


def read_table(path: str | Path, required: list[str]) -> pd.DataFrame:
    """
    Read a CSV table and check its header.

    Raises:
        ConfigError: if the file is missing, unparsable or lacks a column
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"file not found: {path}")
    try:
        frame = pd.read_csv(path, comment="#", skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    except OSError as e:
        raise ArtifactIOError(f"cannot read {path}: {e}") from e
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise ConfigError(f"{path} lacks column(s) {missing}; found {list(frame.columns)}")
    return frame


def write_trace_csv(path: str | Path, trace) -> Path:
    """Transient trace as CSV with header t_seconds,<probe names...>."""
    columns = {"t_seconds": trace.times}
    columns.update(trace.probes)
    return write_table(path, columns)


def write_pt_csv(path: str | Path, curve) -> Path:
    return write_table(path, {"P_W": curve.powers, "T_K": curve.temperatures})


def read_pt_csv(path: str | Path):
    """
    Import a P-T curve; the power column may be P_W or P_mW.

    Returns:
        PTCurve with provenance "imported"
    """
    from ..analysis.fitting import PTCurve

    frame = read_table(path, ["T_K"])
    if "P_W" in frame.columns:
        powers = frame["P_W"].to_numpy(dtype=float)
    elif "P_mW" in frame.columns:
        powers = frame["P_mW"].to_numpy(dtype=float) * 1e-3
    else:
        raise ConfigError(f"{path} needs a P_W or P_mW column")
    return PTCurve(powers=powers, temperatures=frame["T_K"].to_numpy(dtype=float))


def read_calibration_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Calibration samples with columns T_K,V_V."""
    frame = read_table(path, ["T_K", "V_V"])
    return frame["T_K"].to_numpy(dtype=float), frame["V_V"].to_numpy(dtype=float)


def write_vtk_field(path: str | Path, field, title: str = "mtcsim temperature field") -> Path:
    """
    Legacy-VTK ASCII structured points with voxel-center temperatures.

    Void voxels carry the coldest solid temperature and solid = 0 so viewers
    can threshold them away.
    """
    path = Path(path)
    _ensure_parent(path)
    grid = field.grid
    nx, ny, nz = grid.shape
    dx, dy, dz = grid.spacing
    solid = ~np.isnan(field.values)
    filled = np.where(solid, field.values, field.min)

    # VTK point order: x fastest, then y, then z
    ordered = filled.transpose(2, 1, 0).ravel()
    mask = solid.transpose(2, 1, 0).ravel().astype(int)

    lines = [
        "# vtk DataFile Version 3.0",
        title[:255],
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {nx} {ny} {nz}",
        f"ORIGIN {dx / 2:.12g} {dy / 2:.12g} {dz / 2:.12g}",
        f"SPACING {dx:.12g} {dy:.12g} {dz:.12g}",
        f"POINT_DATA {nx * ny * nz}",
        "SCALARS temperature double 1",
        "LOOKUP_TABLE default",
    ]
    lines.extend(f"{v:.10g}" for v in ordered)
    lines.append("SCALARS solid int 1")
    lines.append("LOOKUP_TABLE default")
    lines.extend(str(v) for v in mask)
    try:
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}") from e
    logger.debug("Wrote %s", path)
    return path


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    _ensure_parent(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}") from e
    return path
