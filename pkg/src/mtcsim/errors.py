"""
Error types for mtcsim.

Every error carries the CLI exit code of its family so the command
dispatcher can map exceptions to the documented exit-code table:
0 success, 1 configuration/parse error, 2 solver failure, 3 I/O failure.
"""


class MtcsimError(Exception):
    """Base class for all mtcsim errors."""

    exit_code = 2


class ConfigError(MtcsimError):
    """Invalid input: config files, geometry, scenario or analysis data."""

    exit_code = 1


class UnitError(ConfigError):
    """A quantity string could not be parsed or has the wrong unit."""


class GeometryError(ConfigError):
    """Inconsistent hot-plate description."""


class FeatureTooThinError(GeometryError):
    """A structural feature is thinner than the requested resolution."""

    def __init__(self, feature: str, size: float, resolution: float):
        self.feature = feature
        self.size = size
        self.resolution = resolution
        super().__init__(
            f"feature '{feature}' ({size * 1e6:.4g} um) is thinner than the "
            f"resolution ({resolution * 1e6:.4g} um)"
        )


class MaterialError(ConfigError):
    """Unknown material or invalid material data."""


class ScenarioError(ConfigError):
    """Invalid sources, boundaries or probes."""


class EmptyRegionError(ScenarioError):
    """A region selects no non-void voxel."""

    def __init__(self, region: str):
        self.region = region
        super().__init__(f"region '{region}' contains no non-void voxels")


class DisconnectedVoxelError(ScenarioError):
    """Some voxels have no conduction path to a fixed-temperature boundary."""

    def __init__(self, count: int):
        self.count = count
        super().__init__(
            f"{count} voxel(s) are not connected to any fixed-temperature boundary"
        )


class RankDeficiencyError(ConfigError):
    """Too few distinct abscissae for the requested fit."""


class ZeroSlopeError(ConfigError):
    """Calibration curve cannot be inverted."""


class UnsettledTraceError(ConfigError):
    """Transient trace has not settled (or shows no rise)."""


class HashMismatchError(ConfigError):
    """Artifacts from different scenarios were mixed."""


class SolverError(MtcsimError):
    """Numerical failure."""

    exit_code = 2


class SingularSystemError(SolverError):
    """The linear system has no reachable fixed-temperature boundary."""


class ConvergenceError(SolverError):
    """An iterative method did not converge."""

    def __init__(self, message: str, residual: float | None = None, history=None):
        self.residual = residual
        self.history = list(history or [])
        super().__init__(message)


class ArtifactIOError(MtcsimError):
    """Reading or writing an artifact failed."""

    exit_code = 3


# Raised by malformed JSON content (missing keys, wrong types, bad numbers)
PARSE_ERRORS = (KeyError, IndexError, TypeError, ValueError, AttributeError)


def describe_parse_error(error: Exception) -> str:
    """Short message for one of PARSE_ERRORS."""
    if isinstance(error, KeyError):
        return f"missing key {error}"
    return f"{type(error).__name__}: {error}"
