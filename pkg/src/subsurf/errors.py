"""Exception types raised by the subsurf library."""


class SubsurfError(Exception):
    """Base class for all library errors."""


class InvalidChordData(SubsurfError):
    """Raw chord data is malformed (bad edge index, duplicate slot, ...)."""


class CrossingMatching(SubsurfError):
    """The chord matching is not non-crossing in the disk."""


class EndpointOnMarkedPoint(SubsurfError):
    """A fractional endpoint position coincides with a marked point."""


class OddStep(SubsurfError):
    """Rotation step must be even."""


class InvalidMove(SubsurfError):
    """A move's location data does not describe a legal move on this state."""


class CapTooSmall(SubsurfError):
    """A search input already exceeds the chord cap."""


class NotCoprime(SubsurfError):
    """Torus knot parameters must be coprime."""


class DegenerateParameters(SubsurfError):
    """Torus knot parameters must both be at least 2."""


class UnknownCell(SubsurfError):
    """Cell does not belong to the complex."""


class TraceMismatch(SubsurfError):
    """U-side and V-side crossing data disagree along a gluing arc."""


class NonMinimalPiece(SubsurfError):
    """A piece subsurface has an inessential boundary component."""


class ReplayFailure(SubsurfError):
    """A stored path does not replay: applying a move misses the next state."""


class NotTwisted(SubsurfError):
    """Operation requires a twisted path."""


class NonNormalArc(SubsurfError):
    """A surgery arc descriptor forms a bigon with the gluing multicurve."""


class UnknownLemma(SubsurfError):
    """No verification suite is registered under this id."""


class CapExceeded(SubsurfError):
    """Requested verification parameters exceed the documented caps."""
