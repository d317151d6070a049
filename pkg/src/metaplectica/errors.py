"""Exception hierarchy shared by all metaplectica modules."""


class MetaplecticaError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(MetaplecticaError, ValueError):
    pass


class InvalidElementError(MetaplecticaError, ValueError):
    pass


class DecompositionError(MetaplecticaError, ValueError):
    """Raised when the canonical decomposition needs an invertible block."""

    def __init__(self, message, block="D"):
        super().__init__(message)
        self.block = block


class DegenerateTrajectoryError(MetaplecticaError, ValueError):
    pass


class LiftError(MetaplecticaError, ValueError):
    pass


class ResolutionError(MetaplecticaError, ValueError):
    """The grid does not resolve the state (edge energy or aliasing)."""


class NyquistError(ResolutionError):
    """The Fresnel kernel oscillates faster than the grid can sample."""


class NotProportionalError(MetaplecticaError, ValueError):
    pass


class AmbiguousOverlapError(MetaplecticaError, ValueError):
    pass


class LoopNotClosedError(MetaplecticaError, ValueError):
    pass


class GridMismatchError(MetaplecticaError, ValueError):
    pass


class DegreeCapError(MetaplecticaError, ValueError):
    pass


class TruncationError(MetaplecticaError, ValueError):
    pass


class UnsupportedElementError(MetaplecticaError, ValueError):
    pass


class KernelDimensionError(MetaplecticaError, ValueError):
    pass


class NotBivectorError(MetaplecticaError, ValueError):
    pass


class NotInIdealError(MetaplecticaError, ValueError):
    pass


class ExpressionSyntaxError(MetaplecticaError, ValueError):
    pass
