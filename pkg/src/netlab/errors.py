"""Exception types shared across the library."""


class NetlabError(Exception):
    """Base class for all library errors."""


class ValidationError(NetlabError, ValueError):
    """Invalid argument or malformed structure."""


class RangeError(ValidationError):
    """Size or index outside its permitted range."""


class CapacityError(ValidationError):
    """Requested computation exceeds an enumeration guard."""


class DegenerateDesignError(NetlabError):
    """An estimator is missing a required observation class."""


class ConditioningError(NetlabError):
    """A conditioning event has probability zero."""


class FitError(NetlabError):
    """Not enough usable support for a fit."""


class ResourceError(NetlabError):
    """A safety cap on computation was exhausted."""
