"""Exception taxonomy shared by every module."""


class StructureError(ValueError):
    """Malformed value: rank mismatch, degree invariant broken, bad exponent."""


class DomainError(ValueError):
    """Value is well formed but outside the domain of the operation."""


class ArgumentError(ValueError):
    """Invalid argument such as an index out of range."""
