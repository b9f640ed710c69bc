"""Belief and plausibility curves estimated from focal-element-tagged sampling.

Per uncertain dimension, experts assign masses to intervals (which may
overlap); Cartesian products of intervals form focal-element boxes carrying
product masses. Sampling maps uniform draws through a per-dimension CDF that
stacks the intervals by mass, so every sample is tagged with its generating
focal element at creation time - with overlapping intervals a geometric
lookup after the fact would be ambiguous. Belief sums the masses of focal
elements whose (sampled or exact) maximum lies at or below the threshold;
plausibility does the same with minima.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .ecdf import Ecdf, build_ecdf
from .sampling import rng_from

MASS_SUM_TOL = 1e-9


@dataclass(frozen=True)
class BpaDimension:
    """Interval/mass assignment for one uncertain variable."""

    intervals: np.ndarray  # (k, 2) rows of [lo, hi]
    masses: np.ndarray     # (k,), non-negative, summing to 1

    @property
    def size(self) -> int:
        return self.masses.size

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.masses)


@dataclass(frozen=True)
class Bpa:
    dimensions: tuple[BpaDimension, ...]

    @property
    def dim(self) -> int:
        return len(self.dimensions)

    @property
    def n_focal_elements(self) -> int:
        out = 1
        for d in self.dimensions:
            out *= d.size
        return out


def validate_bpa(raw) -> Bpa:
    """Check per-dimension (interval, mass) lists and assemble a :class:`Bpa`.

    `raw` is a sequence over dimensions, each a sequence of ((lo, hi), mass)
    pairs. Violations are reported with the dimension that broke: negative
    mass, mass sum away from 1 by more than 1e-9, or an inverted interval.
    """
    dimensions = []
    for d, entries in enumerate(raw):
        entries = list(entries)
        if not entries:
            raise ValueError(f"dimension {d}: no intervals")
        intervals = np.array([[float(iv[0]), float(iv[1])] for iv, _ in entries])
        masses = np.array([float(m) for _, m in entries])
        if np.any(masses < 0):
            raise ValueError(f"dimension {d}: negative mass")
        total = masses.sum()
        if abs(total - 1.0) > MASS_SUM_TOL:
            raise ValueError(f"dimension {d}: mass sum {total:g} != 1")
        if np.any(intervals[:, 0] > intervals[:, 1]):
            raise ValueError(f"dimension {d}: inverted interval")
        if np.any(masses == 0):
            keep = masses > 0
            intervals, masses = intervals[keep], masses[keep]
        intervals.setflags(write=False)
        masses.setflags(write=False)
        dimensions.append(BpaDimension(intervals, masses))
    if not dimensions:
        raise ValueError("no dimensions")
    return Bpa(tuple(dimensions))


@dataclass(frozen=True)
class FocalElement:
    """Cartesian product of one interval per dimension, with product mass."""

    indices: tuple[int, ...]
    lower: np.ndarray
    upper: np.ndarray
    mass: float


def focal_elements(bpa: Bpa) -> list[FocalElement]:
    """Enumerate all focal-element boxes of the product structure."""
    out = []
    for combo in itertools.product(*(range(d.size) for d in bpa.dimensions)):
        lower = np.array([bpa.dimensions[j].intervals[k, 0] for j, k in enumerate(combo)])
        upper = np.array([bpa.dimensions[j].intervals[k, 1] for j, k in enumerate(combo)])
        mass = float(np.prod([bpa.dimensions[j].masses[k] for j, k in enumerate(combo)]))
        out.append(FocalElement(tuple(combo), lower, upper, mass))
    return out


def bpa_to_cdf(dimension: BpaDimension, t):
    """Map t in [0, 1] to (u, interval index) by stacking intervals by mass.

    Within the k-th mass band t maps affinely onto the k-th interval.
    Band boundaries belong to the next band (right-continuous), except t=1
    which stays in the last band.
    """
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise ValueError("t out of [0, 1]")
    cum = dimension.cumulative
    k = np.minimum(np.searchsorted(cum, t, side="right"), dimension.size - 1)
    band_start = cum[k] - dimension.masses[k]
    frac = np.where(dimension.masses[k] > 0,
                    (t - band_start) / dimension.masses[k], 0.0)
    frac = np.clip(frac, 0.0, 1.0)
    lo = dimension.intervals[k, 0]
    hi = dimension.intervals[k, 1]
    return lo + frac * (hi - lo), k


@dataclass
class TaggedSamples:
    """Monte Carlo sample of the uncertain space with focal-element tags.

    Stored column-wise: row i is the point u[i] generated inside the focal
    element indexed by the tuple fe_indices[i], with response values[i].
    """

    u: np.ndarray           # (N, dim)
    fe_indices: np.ndarray  # (N, dim) interval index per dimension
    values: np.ndarray      # (N,)

    def __len__(self) -> int:
        return self.values.size

    def tags(self) -> list[tuple[int, ...]]:
        return [tuple(row) for row in self.fe_indices]


def sample_tagged(bpa: Bpa, count: int, seed: int, response) -> tuple[TaggedSamples, Ecdf]:
    """Draw `count` tagged samples and the ECDF of their response values.

    `response` maps a (count, dim) batch of uncertain points to response
    values with the design already bound in.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = rng_from(seed)
    t = rng.random((count, bpa.dim))
    u = np.empty_like(t)
    fe = np.empty(t.shape, dtype=np.int64)
    for j, dimension in enumerate(bpa.dimensions):
        u[:, j], fe[:, j] = bpa_to_cdf(dimension, t[:, j])
    values = np.asarray(response(u), dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite response value")
    return TaggedSamples(u, fe, values), build_ecdf(values)


@dataclass(frozen=True)
class BeliefPlausibilityCurve:
    """Paired step curves over ascending thresholds, belief <= plausibility.

    `unresolved_mass` is the total mass of focal elements that received no
    sample; it contributes to neither curve. :meth:`conservative` shifts it
    pessimistically (out of belief, into plausibility).
    """

    thresholds: np.ndarray
    belief: np.ndarray
    plausibility: np.ndarray
    unresolved_mass: float = 0.0

    def conservative(self) -> "BeliefPlausibilityCurve":
        return BeliefPlausibilityCurve(
            self.thresholds,
            np.clip(self.belief - self.unresolved_mass, 0.0, 1.0),
            np.clip(self.plausibility + self.unresolved_mass, 0.0, 1.0),
            0.0,
        )


def focal_extrema(tagged: TaggedSamples) -> dict[tuple[int, ...], tuple[float, float]]:
    """Sampled (min, max) of the response per observed focal element."""
    extrema: dict[tuple[int, ...], tuple[float, float]] = {}
    for tag, value in zip(tagged.tags(), tagged.values):
        value = float(value)
        if tag in extrema:
            lo, hi = extrema[tag]
            extrema[tag] = (min(lo, value), max(hi, value))
        else:
            extrema[tag] = (value, value)
    return extrema


def curve_from_extrema(extrema, masses, thresholds) -> BeliefPlausibilityCurve:
    """Assemble Bel/Pl step curves from per-focal-element extrema and masses.

    Bel(nu) sums masses of elements with max <= nu; Pl(nu) those with
    min <= nu. Mass of elements missing from `extrema` is unresolved.
    """
    thresholds = np.asarray(thresholds, dtype=float)
    if np.any(np.diff(thresholds) < 0):
        raise ValueError("thresholds must be sorted ascending")
    belief = np.zeros(thresholds.size)
    plausibility = np.zeros(thresholds.size)
    unresolved = 0.0
    for tag, mass in masses.items():
        if tag not in extrema:
            unresolved += mass
            continue
        lo, hi = extrema[tag]
        belief += mass * (hi <= thresholds)
        plausibility += mass * (lo <= thresholds)
    return BeliefPlausibilityCurve(thresholds, belief, plausibility, unresolved)


def estimate_belief_plausibility(tagged: TaggedSamples, focal_masses,
                                 thresholds) -> BeliefPlausibilityCurve:
    """Curves from sampled per-focal-element extrema.

    The sampled maximum can only undershoot the true one, so the belief
    estimate is an upper bound on the true belief (anti-conservative), and
    symmetrically the plausibility estimate is a lower bound.
    """
    return curve_from_extrema(focal_extrema(tagged), dict(focal_masses), thresholds)


def exact_belief_plausibility(bpa: Bpa, response, thresholds,
                              optimizer=None) -> BeliefPlausibilityCurve:
    """Curves from true per-box response extrema.

    `optimizer(lower, upper)` must return the exact (min, max) of the
    response over the box; without one, a dense-grid scan of `response`
    (about `GRID_POINTS_PER_BOX` points per box) stands in, which is only
    approximate for responses with sharp features.
    """
    if optimizer is None:
        optimizer = grid_extrema(response)
    extrema = {}
    masses = {}
    for fe in focal_elements(bpa):
        extrema[fe.indices] = optimizer(fe.lower, fe.upper)
        masses[fe.indices] = fe.mass
    return curve_from_extrema(extrema, masses, thresholds)


def weighted_square_extrema(weights):
    """Exact per-box extrema of u -> sum_i w_i * u_i**2 for non-negative weights.

    Separable: per dimension the maximum sits at the endpoint of larger
    magnitude and the minimum at zero when the interval straddles it,
    otherwise at the endpoint of smaller magnitude.
    """
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")

    def extrema(lower, upper):
        hi = weights * np.maximum(lower**2, upper**2)
        straddles = (lower <= 0) & (upper >= 0)
        lo = weights * np.where(straddles, 0.0, np.minimum(lower**2, upper**2))
        return float(lo.sum()), float(hi.sum())

    return extrema


GRID_POINTS_PER_BOX = 10_000


def grid_extrema(response, points_per_box: int = GRID_POINTS_PER_BOX):
    """Approximate per-box extrema by scanning a dense regular grid."""

    def extrema(lower, upper):
        dim = len(lower)
        side = max(2, int(round(points_per_box ** (1.0 / dim))))
        axes = [np.linspace(lo, hi, side) for lo, hi in zip(lower, upper)]
        mesh = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
        values = np.asarray(response(mesh), dtype=float)
        return float(values.min()), float(values.max())

    return extrema
