"""Exception hierarchy for gsocsp."""


class CSPError(ValueError):
    """Base class for every error raised by this package."""


class InvalidNetworkError(CSPError):
    pass


class InvalidAssignmentError(CSPError):
    pass


class NoArcError(CSPError):
    """Raised when revising a pair of variables that share no constraint."""


class InvalidValueError(CSPError):
    pass


class DimensionError(CSPError):
    pass


class InfeasibleMemberError(CSPError):
    """A member cannot be decoded because one of its domains is empty."""


class OutOfRangeError(CSPError):
    pass


class ConfigurationError(CSPError):
    pass


class OracleBudgetError(CSPError):
    pass


class GenerationError(CSPError):
    pass


class InstanceParseError(CSPError):
    """Malformed instance document.

    ``location`` names the offending field as a JSON path (``constraints[3].scope``)
    or a ``line N, column M`` pair for syntax errors.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class SchemaVersionError(InstanceParseError):
    pass


class WipeoutError(CSPError):
    """Arc consistency emptied a domain, so there is no pruned network to return."""
