"""Quantum walk search on the complete graph with potential-barrier hop failures."""

from .continuous import ContinuousParams
from .discrete import DiscreteParams
from .errors import AnalyticMismatchError, IntegrationAccuracyError, OracleSizeError
from .series import ProbabilitySeries

__version__ = "0.1.0"

__all__ = [
    "ContinuousParams",
    "DiscreteParams",
    "ProbabilitySeries",
    "AnalyticMismatchError",
    "IntegrationAccuracyError",
    "OracleSizeError",
]
