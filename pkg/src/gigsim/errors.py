"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid model or configuration parameters."""


class DegenerateRegionError(RuntimeError):
    """A truncated sampling region carries essentially no probability mass."""


class QuadratureError(RuntimeError):
    """Reference quadrature failed to reach the requested tolerance."""
