"""Analytic test functions with known reference solutions.

Three functions are provided: a one-dimensional multi-well "bump" landscape
with one wide and three narrow wells, an n-dimensional averaged cosine
benchmark ("mv4") with dimension-independent deterministic optima, and a
separable quadratic ("mv1") used by the evidence-theory workflow.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .moga import nondominated_filter
from .sampling import Box

MV4_MINIMAX_DESIGN = 4.6638  # numeric reference; no closed form is known

MAX_COMPOSE_CANDIDATES = 10**6


@dataclass(frozen=True)
class BumpParams:
    """Sum-of-Gaussian-wells landscape: 1 - sum_i a_i exp(-beta_i |x - c_i|^2)."""

    amplitudes: np.ndarray  # (m,)
    widths: np.ndarray      # (m,) exponential decay rates, > 0
    centers: np.ndarray     # (m, n)

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.amplitudes, dtype=float))
        b = np.atleast_1d(np.asarray(self.widths, dtype=float))
        c = np.asarray(self.centers, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        if a.shape != b.shape or c.shape[0] != a.size:
            raise ValueError("inconsistent bump parameter shapes")
        if np.any(b <= 0):
            raise ValueError("widths must be positive")
        for arr in (a, b, c):
            arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "widths", b)
        object.__setattr__(self, "centers", c)

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    @classmethod
    def default(cls) -> "BumpParams":
        """Four wells on [0, 5]: one deep narrow, one shallow wide, two adjacent narrow."""
        return cls(
            amplitudes=np.array([0.9, 0.5, 0.8, 0.8]),
            widths=np.array([50.0, 1.0, 80.0, 100.0]),
            centers=np.array([1.0, 2.5, 4.0, 4.2]),
        )


def eval_bump(params: BumpParams, x) -> float:
    """Evaluate the bump landscape at a single point x of dimension n."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (params.dim,):
        raise ValueError("point dimension does not match bump centers")
    return float(bump_values(params, x[None, :])[0])


def bump_values(params: BumpParams, points) -> np.ndarray:
    """Evaluate the bump landscape on a (N, n) batch of points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[1] != params.dim:
        raise ValueError("point dimension does not match bump centers")
    sq = ((pts[:, None, :] - params.centers[None, :, :]) ** 2).sum(axis=2)
    return 1.0 - (params.amplitudes * np.exp(-params.widths * sq)).sum(axis=1)


def bump_response(params: BumpParams):
    """Batched response (z, u_batch) -> values for the bump landscape, x = z + u."""

    def response(z, u):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        u = np.atleast_2d(np.asarray(u, dtype=float))
        return bump_values(params, z[None, :] + u)

    return response


def eval_mv4(d, u) -> float:
    """(1/n) * sum_i (2*pi - u_i) * cos(u_i - d_i)."""
    d = np.atleast_1d(np.asarray(d, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if d.shape != u.shape:
        raise ValueError("design/uncertainty dimension mismatch")
    return float(np.mean((2.0 * np.pi - u) * np.cos(u - d)))


def mv4_response(d, u) -> np.ndarray:
    """Batched mv4: u is (N, n), design d broadcast across rows."""
    d = np.atleast_1d(np.asarray(d, dtype=float))
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[1] != d.size:
        raise ValueError("design/uncertainty dimension mismatch")
    return ((2.0 * np.pi - u) * np.cos(u - d)).mean(axis=1)


def eval_mv1(d, u) -> float:
    """sum_i d_i * u_i^2 (no 1/n factor)."""
    d = np.atleast_1d(np.asarray(d, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if d.shape != u.shape:
        raise ValueError("design/uncertainty dimension mismatch")
    return float(np.sum(d * u**2))


def mv1_response(d, u) -> np.ndarray:
    """Batched mv1: u is (N, n), design d broadcast across rows."""
    d = np.atleast_1d(np.asarray(d, dtype=float))
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.shape[1] != d.size:
        raise ValueError("design/uncertainty dimension mismatch")
    return (d * u**2).sum(axis=1)


def mv4_boxes(n: int) -> tuple[Box, Box]:
    """Design box [0, 2*pi]^n and uncertainty box [0, 3]^n."""
    return Box.cube(0.0, 2.0 * np.pi, n), Box.cube(0.0, 3.0, n)


def mv1_boxes(n: int) -> tuple[Box, Box]:
    """Design box [1, 5]^n and uncertainty box [-5, 3]^n."""
    return Box.cube(1.0, 5.0, n), Box.cube(-5.0, 3.0, n)


def bump_boxes(n: int = 1) -> tuple[Box, Box]:
    """Design box [0, 5]^n and uncertainty box [-0.25, 0.25]^n."""
    return Box.cube(0.0, 5.0, n), Box.cube(-0.25, 0.25, n)


@dataclass(frozen=True)
class ReferencePoint:
    design: np.ndarray
    uncertainty: np.ndarray
    value: float


def mv4_reference_solutions(n: int = 1) -> dict[str, ReferencePoint]:
    """Deterministic min and minimax solutions of mv4, identical for every n.

    The global minimum sits exactly at d_i = pi, u_i = 0 with value -2*pi
    (tables elsewhere print the 5-digit rounding 3.1416). The minimax design
    4.6638 is a numeric constant; its value is recomputed from the formula.
    """
    d_min = np.full(n, np.pi)
    d_mm = np.full(n, MV4_MINIMAX_DESIGN)
    zeros = np.zeros(n)
    return {
        "min": ReferencePoint(d_min, zeros, eval_mv4(d_min, zeros)),
        "minimax": ReferencePoint(d_mm, zeros, eval_mv4(d_mm, zeros)),
    }


def mv4_grid_references(coarse: float = 1e-3, refine: float = 1e-5) -> dict[str, float]:
    """Brute-force grid verification of the mv4 deterministic references (n=1).

    A single pass at the coarse step can miss the minimax value by more than
    1e-3 (the max over u moves steeply with d near the optimum), so the coarse
    scan is followed by a local refinement around the best coarse design.
    """
    d_grid = np.arange(0.0, 2.0 * np.pi + coarse / 2, coarse)
    u_grid = np.arange(0.0, 3.0 + coarse / 2, coarse)

    best_min = np.inf
    best_minimax = np.inf
    best_minimax_d = 0.0
    chunk = 4096
    for start in range(0, d_grid.size, chunk):
        d = d_grid[start : start + chunk, None]
        f = (2.0 * np.pi - u_grid[None, :]) * np.cos(u_grid[None, :] - d)
        best_min = min(best_min, float(f.min()))
        worst = f.max(axis=1)
        k = int(worst.argmin())
        if worst[k] < best_minimax:
            best_minimax = float(worst[k])
            best_minimax_d = float(d[k, 0])

    d_fine = np.arange(
        max(0.0, best_minimax_d - 2 * coarse),
        min(2.0 * np.pi, best_minimax_d + 2 * coarse) + refine / 2,
        refine,
    )
    u_fine = np.arange(0.0, 3.0 + refine / 2, refine)
    worst = np.full(d_fine.size, -np.inf)
    for start in range(0, u_fine.size, 200_000):
        u = u_fine[start : start + 200_000]
        f = (2.0 * np.pi - u[None, :]) * np.cos(u[None, :] - d_fine[:, None])
        worst = np.maximum(worst, f.max(axis=1))
    best_minimax = min(best_minimax, float(worst.min()))

    return {"min": best_min, "minimax": best_minimax}


def compose_front_from_1d(front_1d, n: int, evaluator,
                          max_candidates: int = MAX_COMPOSE_CANDIDATES):
    """Build an n-dimensional front from a 1-d front of a separable problem.

    Candidate designs are the n-fold combinations with replacement of the
    1-d front designs (the objectives are permutation-invariant, so ordered
    tuples would only add duplicates). Each candidate is scored with
    `evaluator` and the mutually non-dominated subset is returned as a list
    of (design vector, objective vector) pairs.
    """
    front_1d = list(front_1d)
    if not front_1d:
        raise ValueError("empty 1-d front")
    if n < 2:
        raise ValueError("n must be >= 2")
    designs = [float(d) for d, _ in front_1d]
    n_candidates = _n_multisets(len(designs), n)
    if n_candidates > max_candidates:
        raise ValueError(
            f"{n_candidates} candidate combinations exceed the cap of "
            f"{max_candidates}; thin the 1-d front first"
        )
    candidates = [
        np.array(combo) for combo in itertools.combinations_with_replacement(designs, n)
    ]
    objectives = np.array([np.asarray(evaluator(z), dtype=float) for z in candidates])
    keep = nondominated_filter(objectives)
    return [(candidates[i], objectives[i]) for i in keep]


def _n_multisets(m: int, n: int) -> int:
    # C(m+n-1, n) without scipy.special to keep this exact for big m
    num, den = 1, 1
    for i in range(n):
        num *= m + n - 1 - i
        den *= i + 1
    return num // den
