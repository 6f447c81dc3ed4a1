"""Ordinary least-squares linear detrending of feature series."""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .features import FeatureSeries


class LinearFit(NamedTuple):
    slope: float
    intercept: float

    def __call__(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)


def linear_fit(y: Sequence[float]) -> LinearFit:
    """OLS fit of ``y`` against ``x = 0, 1, ..., n-1``."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 2:
        raise ValueError(f"linear fit needs at least 2 points, got {n}")
    x = np.arange(n, dtype=float)
    xc = x - x.mean()
    y_mean = y.mean()
    slope = float(np.dot(xc, y - y_mean) / np.dot(xc, xc))
    return LinearFit(slope, float(y_mean - slope * x.mean()))


def detrend_column(y: Sequence[float]) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return y - linear_fit(y)(np.arange(len(y)))


def detrend(series: FeatureSeries) -> FeatureSeries:
    """Return a copy of ``series`` with each column's linear trend removed."""
    if len(series) < 2:
        raise ValueError(f"detrending needs at least 2 timesteps, got {len(series)}")
    detrended = np.column_stack([detrend_column(col) for col in series.raw.T])
    return FeatureSeries(series.raw.copy(), detrended)
