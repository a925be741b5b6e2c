"""Exception types shared across the library."""


class SplError(Exception):
    """Base class for all library errors."""


class IoError(SplError):
    """File is missing, unreadable, or unwritable."""


class FormatError(SplError):
    """Image file cannot be decoded (bad magic, palette, unsupported depth...)."""


class ShapeError(SplError):
    """Operand shapes are inconsistent or below the operation's minimum size."""


class ChannelError(SplError):
    """Operation requires a specific channel count (e.g. 3 for colour maps)."""


class RangeTagError(SplError):
    """Image value-range tag does not match what the operation expects."""


class NonFiniteError(SplError):
    """A NaN or infinity appeared where only finite values are allowed."""


class UnknownObjectiveError(SplError):
    """Objective identifier is not one of the supported gradcheck targets."""
