"""Deterministic sampling: seeded uniform Monte Carlo and Sobol sequences over boxes.

Random draws go through counter-based Philox generators keyed by
(seed, stream ids...), so any sample batch is a pure function of its key and
parallel evaluation order cannot change results.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

MAX_SOBOL_DIM = 64


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by per-dimension lower/upper bounds."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("bound vectors must be 1-D and of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("non-finite bound")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == self.lower.shape and bool(
            np.all(x >= self.lower) and np.all(x <= self.upper)
        )

    @classmethod
    def cube(cls, lower: float, upper: float, dim: int) -> "Box":
        return cls(np.full(dim, lower), np.full(dim, upper))


def rng_from(seed: int, *stream: int) -> np.random.Generator:
    """Generator for the (seed, stream...) key; distinct keys give independent streams."""
    entropy = [int(seed)] + [int(s) for s in stream]
    return np.random.Generator(np.random.Philox(seed=np.random.SeedSequence(entropy)))


def uniform_mc(box: Box, count: int, seed: int, stream: tuple = ()) -> np.ndarray:
    """(count x dim) matrix of independent uniform draws inside `box`.

    Identical (box, count, seed, stream) always yields a bit-identical matrix.
    """
    if count <= 0:
        raise ValueError("count must be >= 1")
    rng = rng_from(seed, *stream)
    return box.lower + rng.random((count, box.dim)) * box.width


def sobol_sequence(dim: int, count: int) -> np.ndarray:
    """First `count` Sobol points in [0,1)^dim, skipping the all-zeros point.

    Deterministic and seed-independent.
    """
    if not 1 <= dim <= MAX_SOBOL_DIM:
        raise ValueError(f"dim out of range: {dim} not in [1, {MAX_SOBOL_DIM}]")
    if count < 1:
        raise ValueError("count must be >= 1")
    with warnings.catch_warnings():
        # scipy warns when count is not a power of two; balance is not needed here
        warnings.simplefilter("ignore", UserWarning)
        gen = qmc.Sobol(d=dim, scramble=False)
        gen.fast_forward(1)
        return gen.random(count)


def scale_to_box(points: np.ndarray, box: Box) -> np.ndarray:
    """Affine map of unit-cube points onto `box`, coordinate by coordinate."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != box.dim:
        raise ValueError("dimension mismatch between points and box")
    return box.lower + points * box.width
