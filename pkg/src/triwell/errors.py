"""Exception types shared across the package."""


class TriwellError(Exception):
    """Base class for all package errors."""


class BasisUnresolvedError(TriwellError):
    """Localized basis construction failed: position eigenvalues degenerate."""


class NormDriftError(TriwellError):
    """Propagation lost unitarity beyond tolerance (dt/grid misconfigured)."""


class BoundaryBreachError(TriwellError):
    """A wave packet reached the edge of the simulation box."""


class ConfigError(TriwellError):
    """Run configuration failed schema validation."""
