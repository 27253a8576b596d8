"""Exception types shared across the toolkit."""


class DivekitError(Exception):
    """Base class for all divekit errors."""


class InvalidParameterError(DivekitError, ValueError):
    """A configuration or function parameter is out of its documented range."""


class InvalidInputError(DivekitError, ValueError):
    """Input data violates a documented precondition (shape, length, range)."""


class InsufficientDataError(DivekitError):
    """Too few data points to perform the requested fit."""


class DegenerateTimeError(DivekitError):
    """All samples share one frame index; the time regression is rank deficient."""


class DegenerateGeometryError(DivekitError):
    """Horizontal spread is below the conditioning floor; the quadratic
    regression of y on x is ill-posed (near-vertical motion)."""


class NoConsensusError(DivekitError):
    """No sampled hypothesis reached the required inlier count."""


class PlacementError(DivekitError):
    """Requested dives cannot be placed without overlapping intervals."""


class DiveCodeParseError(DivekitError, ValueError):
    """A dive-code string failed to parse.

    Carries the 1-based character position of the offending input.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position
