class IsacAirspaceError(Exception):
    """Base class for every error raised by the simulator."""


class ScenarioError(IsacAirspaceError, ValueError):
    """Configuration problem. The CLI maps it to exit code 1."""


class ScenarioParseError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class GeometryError(IsacAirspaceError):
    """Degenerate geometry: a target on a station, zenith azimuth, singular Jacobian."""


class InfeasibleGeometryError(GeometryError):
    pass


class EstimationError(IsacAirspaceError):
    pass


class SolverError(IsacAirspaceError):
    pass


class TdoaDivergenceError(SolverError):
    pass


class RankDeficientError(SolverError):
    pass


class TrackingError(IsacAirspaceError):
    pass


class JpdaEventExplosionError(TrackingError):
    pass
