"""Multi-objective GA on Pareto dominance with an elitist non-dominated archive.

Operators follow a deliberately simple recipe: local random walk selection,
one-point crossover on the concatenated fixed-point bit encoding of the
design vector, additive "word" mutation on the real variables, and
reinjection of archive members into a fraction of each new population.
All randomness flows through per-generation Philox streams, so runs are
reproducible regardless of evaluation parallelism.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .sampling import Box, rng_from, scale_to_box, sobol_sequence

ARCHIVE_SOFT_CAP = 100_000


def dominates(a, b) -> bool:
    """True iff a <= b componentwise with at least one strict inequality (minimization)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("objective vectors differ in length")
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated_filter(points) -> np.ndarray:
    """Indices of the mutually non-dominated rows of an (N, k) objective array.

    Exact, duplicates included (equal vectors do not dominate each other).
    Two-objective inputs take an O(N log N) sort-and-scan; the general case
    inserts into a running front, which is fast when the front is small.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] == 0:
        raise ValueError("empty point set")
    if pts.shape[1] == 2:
        return _nondominated_2d(pts)
    return _nondominated_general(pts)


def _nondominated_2d(pts: np.ndarray) -> np.ndarray:
    uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
    keep_uniq = np.zeros(len(uniq), dtype=bool)
    best = np.inf
    for i, (_, o2) in enumerate(uniq):  # lexicographic order from np.unique
        if o2 < best:
            keep_uniq[i] = True
            best = o2
    return np.flatnonzero(keep_uniq[inverse])


def _nondominated_general(pts: np.ndarray) -> np.ndarray:
    front: list[int] = []
    for i, p in enumerate(pts):
        fp = pts[front]
        if np.any(np.all(fp <= p, axis=1) & np.any(fp < p, axis=1)):
            continue
        killed = np.all(fp >= p, axis=1) & np.any(fp > p, axis=1)
        if killed.any():
            front = [j for j, dead in zip(front, killed) if not dead]
        front.append(i)
    return np.array(sorted(front))


@dataclass
class Individual:
    genome: np.ndarray
    objectives: np.ndarray | None = None


@dataclass
class GaConfig:
    population_size: int
    generations: int
    crossover_prob: float = 1.0
    mutation_rate: float = 0.5
    strength: float = 0.06
    elite_fraction: float = 0.2
    bits_per_variable: int = 32
    walk_length: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 4")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        for name in ("crossover_prob", "mutation_rate", "elite_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.strength <= 0:
            raise ValueError("strength must be positive")
        if not 8 <= self.bits_per_variable <= 64:
            raise ValueError("bits_per_variable must lie in [8, 64]")
        if self.walk_length < 1:
            raise ValueError("walk_length must be >= 1")


class ParetoArchive:
    """Mutually non-dominated set of evaluated individuals.

    Inserting a candidate rejects it if any member dominates it, otherwise
    removes every member it dominates. Exact duplicates (same genome, same
    objectives) are kept once. Above `cap` members, crowding-based thinning
    bounds memory while keeping the extremes.
    """

    def __init__(self, cap: int = ARCHIVE_SOFT_CAP):
        self.cap = cap
        self._genomes: list[np.ndarray] = []
        self._objectives: list[np.ndarray] = []
        self._matrix = np.empty((0, 0))

    def __len__(self) -> int:
        return len(self._genomes)

    @property
    def genomes(self) -> np.ndarray:
        return np.array(self._genomes)

    @property
    def objectives(self) -> np.ndarray:
        return np.array(self._objectives)

    def member(self, i: int) -> Individual:
        return Individual(self._genomes[i].copy(), self._objectives[i].copy())

    def members(self) -> list[Individual]:
        return [self.member(i) for i in range(len(self))]

    def add(self, individual: Individual) -> bool:
        obj = np.asarray(individual.objectives, dtype=float)
        if obj.ndim != 1 or not np.all(np.isfinite(obj)):
            raise ValueError("individual lacks finite objectives")
        if self._genomes:
            m = self._matrix
            le = m <= obj
            ge = m >= obj
            if np.any(le.all(axis=1) & (m < obj).any(axis=1)):
                return False
            for j in np.flatnonzero(le.all(axis=1) & ge.all(axis=1)):
                if np.array_equal(self._genomes[j], individual.genome):
                    return False  # exact duplicate
            killed = ge.all(axis=1) & (m > obj).any(axis=1)
            if killed.any():
                live = np.flatnonzero(~killed)
                self._genomes = [self._genomes[j] for j in live]
                self._objectives = [self._objectives[j] for j in live]
                self._matrix = self._matrix[live]
        genome = np.asarray(individual.genome, dtype=float).copy()
        self._genomes.append(genome)
        self._objectives.append(obj.copy())
        self._matrix = obj[None, :] if len(self) == 1 else np.vstack([self._matrix, obj])
        if len(self) > self.cap:
            self._thin()
        return True

    def update(self, population) -> None:
        for individual in population:
            self.add(individual)

    def _thin(self) -> None:
        keep = np.argsort(_crowding_distance(self._matrix))[::-1][: self.cap]
        keep = np.sort(keep)
        self._genomes = [self._genomes[j] for j in keep]
        self._objectives = [self._objectives[j] for j in keep]
        self._matrix = self._matrix[keep]


def _crowding_distance(objectives: np.ndarray) -> np.ndarray:
    n, k = objectives.shape
    dist = np.zeros(n)
    for j in range(k):
        order = np.argsort(objectives[:, j], kind="stable")
        col = objectives[order, j]
        span = col[-1] - col[0]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0 and n > 2:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def encode(genome, box: Box, bits_per_variable: int) -> np.ndarray:
    """Fixed-point bit string (one 0/1 per bit, variables concatenated).

    Each variable maps onto 2**bits equal cells of [lower, upper]; the lower
    bound encodes to all zeros and the upper bound to all ones.
    """
    genome = np.atleast_1d(np.asarray(genome, dtype=float))
    levels = 1 << bits_per_variable
    bits = np.empty(genome.size * bits_per_variable, dtype=np.uint8)
    for v, (x, lo, w) in enumerate(zip(genome, box.lower, box.width)):
        frac = 0.0 if w == 0 else (x - lo) / w
        k = min(levels - 1, max(0, int(frac * levels)))
        for j in range(bits_per_variable):
            bits[v * bits_per_variable + j] = (k >> (bits_per_variable - 1 - j)) & 1
    return bits


def decode(bits: np.ndarray, box: Box, bits_per_variable: int) -> np.ndarray:
    """Inverse of :func:`encode`, decoding each cell to its midpoint.

    Always lands strictly inside the box; round-tripping a point moves it by
    at most half a cell, (upper - lower) / 2**(bits+1).
    """
    n_vars = bits.size // bits_per_variable
    levels = 1 << bits_per_variable
    genome = np.empty(n_vars)
    for v in range(n_vars):
        k = 0
        for j in range(bits_per_variable):
            k = (k << 1) | int(bits[v * bits_per_variable + j])
        w = box.width[v]
        genome[v] = box.lower[v] if w == 0 else box.lower[v] + (k + 0.5) * w / levels
    return genome


def one_point_crossover(parent_a: np.ndarray, parent_b: np.ndarray, cut: int):
    """Swap suffixes of two equal-length bit strings at position `cut`."""
    if parent_a.size != parent_b.size:
        raise ValueError("parents differ in length")
    if not 1 <= cut <= parent_a.size - 1:
        raise ValueError("cut position out of range")
    child_a = np.concatenate([parent_a[:cut], parent_b[cut:]])
    child_b = np.concatenate([parent_b[:cut], parent_a[cut:]])
    return child_a, child_b


def word_mutation(genome, box: Box, mutation_rate: float, strength: float,
                  rng: np.random.Generator) -> np.ndarray:
    """Per-variable additive mutation strength*(r-0.5)*(upper-lower), clamped to the box."""
    genome = np.atleast_1d(np.asarray(genome, dtype=float)).copy()
    for v in range(genome.size):
        if rng.random() < mutation_rate:
            r = rng.random()
            genome[v] += strength * (r - 0.5) * box.width[v]
    return np.clip(genome, box.lower, box.upper)


def local_random_walk_selection(population, archive, walk_length: int,
                                rng: np.random.Generator) -> Individual:
    """Keep a walking winner over `walk_length` uniform picks.

    A new pick replaces the winner when it dominates it; mutual
    non-domination is settled by a fair coin. With walk_length=1 this is
    plain uniform selection.
    """
    if not population:
        raise ValueError("empty population")
    winner = population[rng.integers(len(population))]
    for _ in range(walk_length - 1):
        challenger = population[rng.integers(len(population))]
        if dominates(challenger.objectives, winner.objectives):
            winner = challenger
        elif not dominates(winner.objectives, challenger.objectives):
            if rng.random() < 0.5:
                winner = challenger
    return winner


def elitist_replacement(population, archive: ParetoArchive, elite_fraction: float,
                        rng: np.random.Generator) -> list[Individual]:
    """Update the archive with the population, then refill a fraction of slots.

    The archive absorbs the incoming population first so that non-dominated
    members cannot be lost to the replacement. floor(elite_fraction * N)
    distinct slots are then overwritten with uniform draws (with replacement)
    from the archive.
    """
    archive.update(population)
    new_population = list(population)
    n_slots = int(elite_fraction * len(population))
    if n_slots and len(archive):
        slots = rng.choice(len(population), size=n_slots, replace=False)
        for slot in slots:
            new_population[slot] = archive.member(int(rng.integers(len(archive))))
    return new_population


@dataclass
class FrontSnapshot:
    generation: int
    genomes: np.ndarray
    objectives: np.ndarray


@dataclass
class MogaResult:
    archive: ParetoArchive
    history: list[FrontSnapshot] = field(default_factory=list)


def run_moga(problem, config: GaConfig, threads: int = 1) -> MogaResult:
    """Evolve `problem` for config.generations generations.

    The initial population is the Sobol sequence scaled to the design box.
    Each generation: select parents by local random walk, cross them over at
    bit level in consecutive pairs, word-mutate, evaluate, update the archive
    and reinject elites. history holds one archive snapshot per generation
    plus one for the initial population.
    """
    box = problem.design_box
    n = config.population_size
    population = [
        Individual(genome)
        for genome in scale_to_box(sobol_sequence(box.dim, n), box)
    ]
    _evaluate(problem, population, generation=0, threads=threads)

    archive = ParetoArchive()
    rng = rng_from(config.seed, 0)
    population = elitist_replacement(population, archive, config.elite_fraction, rng)
    result = MogaResult(archive)
    result.history.append(FrontSnapshot(0, archive.genomes, archive.objectives))

    n_bits = box.dim * config.bits_per_variable
    for generation in range(1, config.generations + 1):
        rng = rng_from(config.seed, generation)
        parents = [
            local_random_walk_selection(population, archive, config.walk_length, rng)
            for _ in range(n)
        ]
        offspring: list[Individual] = []
        for a, b in zip(parents[0::2], parents[1::2]):
            if rng.random() < config.crossover_prob:
                bits_a = encode(a.genome, box, config.bits_per_variable)
                bits_b = encode(b.genome, box, config.bits_per_variable)
                cut = int(rng.integers(1, n_bits))
                bits_a, bits_b = one_point_crossover(bits_a, bits_b, cut)
                child_a = decode(bits_a, box, config.bits_per_variable)
                child_b = decode(bits_b, box, config.bits_per_variable)
            else:
                child_a, child_b = a.genome.copy(), b.genome.copy()
            for child in (child_a, child_b):
                mutated = word_mutation(child, box, config.mutation_rate,
                                        config.strength, rng)
                offspring.append(Individual(mutated))
        _evaluate(problem, offspring, generation, threads)
        population = elitist_replacement(offspring, archive, config.elite_fraction, rng)
        result.history.append(FrontSnapshot(generation, archive.genomes,
                                            archive.objectives))
    return result


def _evaluate(problem, population, generation: int, threads: int) -> None:
    pending = [(i, ind) for i, ind in enumerate(population) if ind.objectives is None]

    def evaluate_one(item):
        i, individual = item
        return problem.evaluate_design(individual.genome, draw_id=(generation, i))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate_one, pending))
    else:
        results = [evaluate_one(item) for item in pending]
    for (_, individual), objectives in zip(pending, results):
        individual.objectives = objectives
