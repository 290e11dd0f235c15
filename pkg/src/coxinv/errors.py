"""Exception hierarchy shared by every coxinv module."""


class CoxinvError(Exception):
    """Base class for all coxinv errors."""


class ContextError(CoxinvError):
    """An atom is undeclared, or two values come from incompatible contexts."""


class ConfigurationError(CoxinvError):
    """A dependent atom lacks data needed for an operation (e.g. a residue specialization)."""


class EnumerationError(CoxinvError):
    """A class has a term outside the monomial basis it is being projected on."""


class DomainError(CoxinvError, ValueError):
    """Parameters outside the mathematically legal range (type, rank, q, ...)."""


class UnsupportedError(CoxinvError):
    """Operation is not implemented for this input (e.g. exceptional roots)."""


class ResourceError(CoxinvError):
    """A configured size cap would be exceeded."""


class ParseError(CoxinvError, ValueError):
    """Malformed textual input. ``position`` is the 0-based offset of the problem."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position
