"""Empirical CDFs: construction, right-continuous evaluation and generalized inverse.

The quantile here is the generalized inverse of the step estimator,
inf{q : F(q) >= s}, so it always returns one of the observed sample values.
No interpolation is performed anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Ecdf:
    """Empirical distribution stored as ascending order statistics.

    Instances are immutable after construction and safe to share between
    threads. Use :func:`build_ecdf` to construct one from raw samples.
    """

    sorted_values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.sorted_values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("empty sample")
        if np.any(np.diff(values) < 0):
            raise ValueError("values not sorted ascending")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "sorted_values", values)

    @property
    def n(self) -> int:
        return self.sorted_values.size

    @property
    def cumulative(self) -> np.ndarray:
        """Cumulative probability (i+1)/n for each stored order statistic."""
        return np.arange(1, self.n + 1) / self.n

    def evaluate(self, x):
        """F(x) = #{samples <= x} / n, right-continuous, in {0, 1/n, ..., 1}."""
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite query point")
        probs = np.searchsorted(self.sorted_values, x, side="right") / self.n
        return float(probs) if x.ndim == 0 else probs

    def quantile(self, s):
        """Smallest sample value q with F(q) >= s; the sample minimum for s=0.

        Exactly equivalent to a linear scan of the order statistics, ties
        included: q^s is the ceil(s*n)-th order statistic.
        """
        s_arr = np.asarray(s, dtype=float)
        if not np.all(np.isfinite(s_arr)) or np.any(s_arr < 0.0) or np.any(s_arr > 1.0):
            raise ValueError("level out of range")
        idx = np.searchsorted(self.cumulative, s_arr, side="left")
        out = self.sorted_values[np.minimum(idx, self.n - 1)]
        return float(out) if s_arr.ndim == 0 else out


def build_ecdf(samples) -> Ecdf:
    """Sort a non-empty sample of finite reals into an :class:`Ecdf`.

    Duplicates are kept; evaluation stays right-continuous because it counts
    samples rather than indexing steps.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size == 0:
        raise ValueError("empty sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite sample")
    return Ecdf(np.sort(arr))


def cdf_envelope(curves, grid) -> np.ndarray:
    """Pointwise upper envelope of several ECDFs on a sorted grid.

    The result stochastically dominates every input curve: at each grid
    threshold it takes the maximum cumulative probability over the curves.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("empty curve list")
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid not sorted ascending")
    return np.max([c.evaluate(grid) for c in curves], axis=0)
