"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Invalid domain geometry or boundary-condition parameters."""


class PreconditionError(ValueError):
    """An operation was called with inputs violating its contract."""


class NumericalError(RuntimeError):
    """A solve produced non-finite values or failed to converge."""

    def __init__(self, message, *, step=None, residual=None):
        detail = message
        if step is not None:
            detail += f" (step {step})"
        if residual is not None:
            detail += f" (residual {residual:.3e})"
        super().__init__(detail)
        self.step = step
        self.residual = residual


class UnsupportedFeatureError(NotImplementedError):
    """Requested combination is outside the implemented range."""


class ConfigError(ValueError):
    """Invalid run configuration (bad key, value, or combination)."""
