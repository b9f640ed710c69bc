"""Reduce a random response to deterministic quantile objectives.

A :class:`RobustProblem` binds a design box, an uncertainty box, a batched
response function and a set of probability levels. Evaluating a design draws
a Monte Carlo uncertainty sample, builds the response ECDF and reads the
generalized-inverse quantile at each level, giving one minimized objective
per level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ecdf import Ecdf, build_ecdf
from .sampling import Box, uniform_mc

FORMULATION_LEVELS = {
    "F1": lambda eps: (eps, 1.0 - eps),
    "F2": lambda eps: (0.25, 1.0 - eps),
    "F3": lambda eps: (0.45, 1.0 - eps),
}


class EvaluationError(RuntimeError):
    """Raised when the response produced a non-finite value.

    Carries the offending design vector and the uncertainty rows that broke.
    """

    def __init__(self, message, design, uncertainty):
        super().__init__(message)
        self.design = np.asarray(design)
        self.uncertainty = np.asarray(uncertainty)


def default_epsilon(mc_count: int) -> float:
    """Near-extreme offset: 1/mc_count, floored at 1e-4.

    Extreme quantiles of a finite ECDF have high variance, so the outermost
    optimization levels are pulled in by one empirical step.
    """
    return max(1.0 / mc_count, 1e-4)


def standard_levels(formulation: str, epsilon: float) -> tuple[float, ...]:
    """Two-objective level pairs: F1=(eps, 1-eps), F2=(0.25, 1-eps), F3=(0.45, 1-eps)."""
    if not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon out of range (0, 0.5)")
    try:
        return FORMULATION_LEVELS[formulation](epsilon)
    except KeyError:
        raise ValueError(f"unknown formulation {formulation!r}") from None


def many_objective_levels(count: int, epsilon: float = 1e-4) -> tuple[float, ...]:
    """Equally spaced levels i/count, i=1..count, the top one clamped to 1-epsilon."""
    if count <= 0:
        raise ValueError("count must be >= 1")
    if not 0.0 < epsilon < 1.0 / count:
        raise ValueError("epsilon must be in (0, 1/count) to keep levels increasing")
    levels = [i / count for i in range(1, count)]
    return tuple(levels) + (1.0 - epsilon,)


@dataclass
class RobustProblem:
    """Design space + uncertainty space + response + quantile levels.

    `response` must accept (z, u) with u of shape (mc_count, u_dim) and return
    the (mc_count,) response values. In "frozen" mode one uncertainty sample
    is drawn per problem instance and shared by every design evaluation
    (common random numbers), which makes :meth:`evaluate_design` a pure
    function of z. In "redrawn" mode each call uses a fresh sample keyed by
    (seed, draw_id).
    """

    design_box: Box
    uncertainty_box: Box
    response: Callable[[np.ndarray, np.ndarray], np.ndarray]
    levels: tuple
    mc_count: int = 2500
    mc_mode: str = "frozen"
    seed: int = 0
    post_map: Callable[[np.ndarray], np.ndarray] | None = None
    _frozen_u: np.ndarray = field(init=False, repr=False)
    _draw_counter: itertools.count = field(init=False, repr=False)

    def __post_init__(self):
        levels = tuple(float(s) for s in self.levels)
        if not levels:
            raise ValueError("levels must be non-empty")
        if any(not 0.0 <= s <= 1.0 for s in levels):
            raise ValueError("level out of range")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be strictly increasing")
        self.levels = levels
        if self.mc_count < 2:
            raise ValueError("mc_count must be >= 2")
        if self.mc_mode not in ("frozen", "redrawn"):
            raise ValueError("mc_mode must be 'frozen' or 'redrawn'")
        self._frozen_u = uniform_mc(self.uncertainty_box, self.mc_count, self.seed)
        self._draw_counter = itertools.count()

    def uncertainty_sample(self, draw_id=None) -> np.ndarray:
        if self.mc_mode == "frozen":
            return self._frozen_u
        if draw_id is None:
            draw_id = (next(self._draw_counter),)
        elif np.isscalar(draw_id):
            draw_id = (int(draw_id),)
        return uniform_mc(self.uncertainty_box, self.mc_count, self.seed,
                          stream=(1, *draw_id))

    def response_samples(self, z, draw_id=None) -> np.ndarray:
        """Raw Monte Carlo response values at design z."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if not self.design_box.contains(z):
            raise ValueError("design out of bounds")
        u = self.uncertainty_sample(draw_id)
        values = np.asarray(self.response(z, u), dtype=float)
        bad = ~np.isfinite(values)
        if bad.any():
            raise EvaluationError(
                f"non-finite response at design {z.tolist()}", z, u[bad]
            )
        return values

    def response_ecdf(self, z, draw_id=None) -> Ecdf:
        return build_ecdf(self.response_samples(z, draw_id))

    def evaluate_design(self, z, draw_id=None) -> np.ndarray:
        """Quantile objective vector at design z, one value per level, all minimized."""
        ecdf = self.response_ecdf(z, draw_id)
        objectives = ecdf.quantile(np.asarray(self.levels))
        if self.post_map is not None:
            objectives = np.asarray(self.post_map(objectives), dtype=float)
        return objectives
