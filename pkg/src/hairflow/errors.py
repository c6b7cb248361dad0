"""Exception hierarchy shared across the toolkit.

Every error raised by library code derives from HairflowError so callers
(CLI, HTTP service) can map failures to exit codes / status codes without
string matching.
"""


class HairflowError(Exception):
    """Base class for all hairflow errors."""


class DimensionMismatchError(HairflowError, ValueError):
    """Rasters that must share a shape do not."""


class EmptyMaskError(HairflowError, ValueError):
    """A binary mask required to contain at least one true pixel is empty."""


class NoValidDepthError(HairflowError, ValueError):
    """No masked pixel carries a valid depth measurement."""


class StartOutsideHairError(HairflowError, ValueError):
    """A path start point does not land on a hair pixel."""


class PathOutOfBoundsError(HairflowError, ValueError):
    """A path point rounds to a pixel outside the raster."""


class UnreachableGoalError(HairflowError, ValueError):
    """No goal vertex is reachable from the start vertex."""


class EmptyGoalError(HairflowError, ValueError):
    """The goal region contains no graph vertex."""


class DegeneratePlaneError(HairflowError, ValueError):
    """Too few or rank-deficient points to fit a plane."""


class TooFewPointsError(HairflowError, ValueError):
    """Fewer than two path points could be lifted to 3-D."""


class DegenerateTangentError(HairflowError, ValueError):
    """A path tangent projects to (near) zero length in the hair plane."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"degenerate tangent at path index {index}")


class ZeroLengthSegmentError(HairflowError, ValueError):
    """Two consecutive trajectory points coincide."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"zero-length segment ending at point {index}")


class FormatError(HairflowError, ValueError):
    """Base class for file-format errors; names the offending field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(message)


class MalformedHeaderError(FormatError):
    """A header token is missing, unparsable, or out of contract."""


class TruncatedPayloadError(FormatError):
    """The payload holds fewer bytes than the header promises."""


class DimensionOverflowError(FormatError):
    """Header dimensions exceed the parser's sanity cap."""
