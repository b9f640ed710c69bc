"""Bootstrap accuracy of ECDF quantiles.

The standard error of a quantile estimate is taken as half the width of the
central 68% interval of the bootstrap replicates; the maximum error is the
largest observed deviation of a replicate from the original estimate. A
sub-sample variant draws fewer values per replicate, which traces how both
errors grow as the sample budget shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ecdf import build_ecdf
from .sampling import rng_from


@dataclass(frozen=True)
class BootstrapResult:
    level: float
    replicates: np.ndarray
    observed: float
    se_hat: float
    me_hat: float


def bootstrap_quantile(samples, level: float, n_replicates: int = 2000,
                       seed: int = 0) -> BootstrapResult:
    """Classic bootstrap of the level-quantile: resamples of full size n."""
    samples = np.asarray(samples, dtype=float)
    return subsample_bootstrap(samples, level, samples.size, n_replicates, seed)


def subsample_bootstrap(samples, level: float, m: int, n_replicates: int = 2000,
                        seed: int = 0,
                        materialize_replicated_ecdf: bool = False) -> BootstrapResult:
    """Bootstrap drawing m <= n values per replicate.

    Replicating each drawn value to pad the replicate back to n points does
    not move any ECDF quantile, so the quantile is computed on the m-sample
    directly; `materialize_replicated_ecdf` builds the padded sample anyway
    (m must then divide n) to demonstrate the equivalence.
    """
    arr = np.asarray(samples, dtype=float)
    n = arr.size
    if n < 2:
        raise ValueError("need at least 2 samples")
    if not 1 <= m <= n:
        raise ValueError("sub-sample size out of range [1, n]")
    if n_replicates < 100:
        raise ValueError("need at least 100 replicates")

    observed = build_ecdf(arr).quantile(level)
    rng = rng_from(seed)
    draws = arr[rng.integers(0, n, size=(n_replicates, m))]
    if materialize_replicated_ecdf:
        if n % m:
            raise ValueError("padding requires m to divide n")
        draws = np.repeat(draws, n // m, axis=1)
    draws.sort(axis=1)
    width = draws.shape[1]
    q_idx = min(
        int(np.searchsorted(np.arange(1, width + 1) / width, level, side="left")),
        width - 1,
    )
    replicates = draws[:, q_idx]

    replicate_ecdf = build_ecdf(replicates)
    q_low = replicate_ecdf.quantile(0.16)
    q_high = replicate_ecdf.quantile(0.84)
    return BootstrapResult(
        level=float(level),
        replicates=replicates,
        observed=float(observed),
        se_hat=0.5 * (q_high - q_low),
        me_hat=float(np.max(np.abs(replicates - observed))),
    )


def replicate_ecdf_envelope(samples, m: int, n_replicates: int, seed: int,
                            grid) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise min/max of the replicate ECDFs on a value grid.

    Uses the same replicate stream as :func:`subsample_bootstrap` for the
    same (seed, m, n_replicates), so the band is consistent with the
    reported errors. The band is the region the replicate curves sweep out.
    """
    arr = np.asarray(samples, dtype=float)
    grid = np.asarray(grid, dtype=float)
    rng = rng_from(seed)
    draws = arr[rng.integers(0, arr.size, size=(n_replicates, m))]
    draws.sort(axis=1)
    f_low = np.ones(grid.size)
    f_high = np.zeros(grid.size)
    for row in draws:
        f = np.searchsorted(row, grid, side="right") / m
        np.minimum(f_low, f, out=f_low)
        np.maximum(f_high, f, out=f_high)
    return f_low, f_high


def error_vs_samples(samples, level: float, m_grid, n_replicates: int = 2000,
                     seed: int = 0) -> list[tuple[int, BootstrapResult]]:
    """One sub-sample bootstrap per m in the grid; rows of (m, result).

    Every m reuses the same seed (common random numbers across the grid),
    so a grid containing n reproduces the plain bootstrap exactly.
    """
    arr = np.asarray(samples, dtype=float)
    m_grid = [int(m) for m in m_grid]
    if any(b < a for a, b in zip(m_grid, m_grid[1:])):
        raise ValueError("m_grid must be sorted ascending")
    if m_grid and not (1 <= m_grid[0] and m_grid[-1] <= arr.size):
        raise ValueError("m_grid must lie within [1, n]")
    return [
        (m, subsample_bootstrap(arr, level, m, n_replicates, seed)) for m in m_grid
    ]
