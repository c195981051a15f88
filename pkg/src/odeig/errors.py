class OdeigError(Exception):
    """Base class for library errors."""


class RankDeficiencyError(OdeigError):
    pass


class ConvergenceError(OdeigError):
    pass


class DimensionError(OdeigError, ValueError):
    pass


class InvalidDecompositionError(OdeigError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid decomposition: " + "; ".join(self.violations))


class IntegrityError(OdeigError):
    """Two independent routes to the same answer disagree."""


class ZeroUpdateError(OdeigError):
    """The power-iteration update vanished; the caller should restart."""
