"""Exception hierarchy shared by all cuspmap modules."""


class CuspMapError(ValueError):
    """Base class for every error raised by cuspmap."""


class ZeroArgument(CuspMapError):
    pass


class OutOfDomain(CuspMapError):
    """Argument lies below the real axis (beyond rounding tolerance)."""


class IndexOutOfRange(CuspMapError):
    pass


class OutsideTrustRadius(CuspMapError):
    """Point is too far from the origin for the truncated series to be trusted."""


class EmptyGrid(CuspMapError):
    pass


class NonpositiveRadius(CuspMapError):
    pass


class PoleArgument(CuspMapError):
    pass


class MixedSigns(CuspMapError):
    pass


class InsufficientSamples(CuspMapError):
    pass


class BranchAmbiguity(CuspMapError):
    pass


class NonpositiveCoordinates(CuspMapError):
    pass


class EvaluatorFailure(CuspMapError):
    def __init__(self, point, cause):
        super().__init__(f"map evaluation failed at z={point!r}: {cause}")
        self.point = point
        self.cause = cause


class PathOutsideSector(CuspMapError):
    pass


class SingularFit(CuspMapError):
    pass


class SelfIntersectingInput(CuspMapError):
    pass


class DegenerateSegment(CuspMapError):
    pass


class SingularPoint(CuspMapError):
    pass


class NonFiniteValue(CuspMapError):
    """A NaN or infinity appeared in an input or an evaluated result."""
