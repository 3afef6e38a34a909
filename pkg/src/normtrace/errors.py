"""Exception types shared across the package."""


class NormtraceError(Exception):
    """Base class for all package errors."""


class ValidationError(NormtraceError, ValueError):
    """Malformed or out-of-domain input (bad field parameters, bad
    polynomial, element outside the stated subfield, and so on)."""


class BudgetError(NormtraceError):
    """A configured effort budget was exceeded (integer factorization,
    divisor enumeration, table size, census size)."""


class ConsistencyError(NormtraceError):
    """Two internally redundant computations disagree.  Always a bug,
    never a user error."""


class AuditError(NormtraceError):
    """A character-sum audit inequality failed."""
