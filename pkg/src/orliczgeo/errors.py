"""Semantic exception hierarchy shared by all modules."""


class OrliczgeoError(Exception):
    """Base class for all package errors."""


class DomainError(OrliczgeoError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedVariantError(OrliczgeoError, TypeError):
    """Operation not defined for this Young-function variant."""


class DegenerateInputError(OrliczgeoError, ValueError):
    """Input is degenerate (zero vector, identically-zero function, ...)."""


class PreconditionError(OrliczgeoError, ValueError):
    """A stated precondition (growth condition, class membership) fails."""


class ParseError(OrliczgeoError, ValueError):
    """Malformed spec string, word, or input file."""


class NotInClassError(OrliczgeoError, ValueError):
    """Growth-class indices could not be certified on the diagnostic grid."""


class SearchExhaustedError(OrliczgeoError, RuntimeError):
    """Sampling budget exhausted without finding a feasible point."""
