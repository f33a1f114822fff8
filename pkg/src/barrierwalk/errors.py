"""Exception types raised by the simulation and analysis routines."""


class AnalyticMismatchError(ArithmeticError):
    """A closed-form result failed its numerical residual check."""


class OracleSizeError(ValueError):
    """A brute-force full-space oracle was asked to run above its size cap."""


class IntegrationAccuracyError(ArithmeticError):
    """Norm drift of the Runge-Kutta oracle exceeded the accepted bound."""
