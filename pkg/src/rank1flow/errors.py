"""Exception hierarchy shared across the package."""


class Rank1Error(Exception):
    """Base class for all package errors."""


class ModeError(Rank1Error):
    """A scalar is incompatible with the schedule's scalar mode
    (e.g. a sqrt(2) spacer under exact-rational mode)."""


class RangeError(Rank1Error):
    """A requested time is outside the computable range of the schedule."""


class ResourceError(Rank1Error):
    """A blowup guard tripped: too many memoized shifts, too many
    breakpoints, exact arithmetic beyond the digit budget, etc."""


class ConfigurationError(Rank1Error):
    """Invalid construction parameters (empty generator set, caps that
    make a class unreachable, bad taper width, ...)."""


class DegenerateInputError(Rank1Error):
    """An input that is formally valid but carries no information
    (e.g. a zero-mass spectral estimate)."""
