"""Exception types shared across the package."""


class ConfhamError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ConfhamError):
    """A phase-space point lies outside the validity domain of a system."""


class FamilyMismatch(ConfhamError):
    """An observable builder was called with a spec of the wrong family."""


class ParameterError(ConfhamError):
    """Coupling constants are incompatible with the requested construction."""


class SamplingError(ConfhamError):
    """Rejection sampling failed to find a valid point."""


class ConfigError(ConfhamError):
    """A run configuration file is malformed or inconsistent."""
