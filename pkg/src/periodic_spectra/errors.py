"""Exception types shared across the package."""


class PeriodicGraphError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(PeriodicGraphError):
    """Malformed or invalid graph input (parsing, validation, unknown builtin)."""


class SearchCapExceeded(PeriodicGraphError):
    """An exhaustive search (gauge box, walk enumeration) would exceed its cap."""


class HermiticityError(PeriodicGraphError):
    """A fiber matrix failed its Hermiticity check; signals a bad assembly."""


class EngineMismatchError(PeriodicGraphError):
    """The symbolic and combinatorial engines disagree beyond tolerance."""
