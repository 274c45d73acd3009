"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class InvariantViolation(RuntimeError):
    """Two routes that must agree produced different answers."""
