"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter violates its documented domain or a feasibility bound."""


class CapabilityError(RuntimeError):
    """The request is valid but exceeds what this engine supports
    (e.g. a bitstring too long for exhaustive enumeration)."""
