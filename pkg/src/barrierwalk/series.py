"""Sampled success-probability curves shared by both walk models."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

PROB_SLACK = 1e-9


@dataclass(frozen=True)
class ProbabilitySeries:
    """
    Success probability sampled against step count or time.

    Attributes
    ----------
    kind : {"step", "time"}
        Abscissa type.
    x : np.ndarray
        Strictly increasing abscissae.
    p : np.ndarray
        Success probability at each abscissa, in [0, 1 + 1e-9].
    params : object
        The parameter record that produced the series.
    """

    kind: Literal["step", "time"]
    x: np.ndarray
    p: np.ndarray
    params: Any = field(default=None, compare=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if self.kind not in ("step", "time"):
            raise ValueError(f"unknown abscissa kind {self.kind!r}")
        if x.shape != p.shape or x.ndim != 1:
            raise ValueError("x and p must be 1-D arrays of equal length")
        if x.size > 1 and np.any(np.diff(x) <= 0):
            raise ValueError("abscissa must be strictly increasing")
        if np.any(p < 0) or np.any(p > 1 + PROB_SLACK) or not np.all(np.isfinite(p)):
            raise ValueError("probabilities must lie in [0, 1 + 1e-9]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    def __len__(self) -> int:
        return int(self.x.size)

    @property
    def column_name(self) -> str:
        return "step" if self.kind == "step" else "t"
