"""Exception types shared across the package.

Every operation raises one of these instead of a bare ValueError so callers
(and the CLI exit-code mapping) can tell a bad argument from a resource
refusal or a failed numerical precondition.
"""


class ParameterError(ValueError):
    """An argument is malformed or out of its documented domain."""


class RangeError(ParameterError):
    """A scan range or index is outside the supported window."""


class DimensionError(ParameterError):
    """Mismatched or unsupported spatial dimension."""


class ResolutionError(ParameterError):
    """A grid is too coarse for the requested computation."""


class ResourceError(RuntimeError):
    """The request would exceed the configured memory/point budget."""


class NotEllipticError(ParameterError):
    """A symbol failed the positivity screen on the unit sphere."""


class DegenerateCenterError(ParameterError):
    """A construction that needs a direction was given the zero vector."""


class PreconditionError(RuntimeError):
    """A numerical precondition (support, convergence) failed at run time."""


class ConfigurationError(ValueError):
    """A config file or flag set is inconsistent or has unknown keys."""
