"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Raised when a run configuration file cannot be parsed or validated."""


class QuadratureError(RuntimeError):
    """A numerical quadrature or Fourier inversion did not meet its contract.

    Carries the achieved error estimate so callers can report how far the
    computation got before giving up.
    """

    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate
