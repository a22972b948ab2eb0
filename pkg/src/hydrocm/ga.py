"""Steady-state GA: binary tournament, one-point crossover, per-bit
mutation, replace-worst-if-not-worse. One offspring (one evaluation) per
iteration, which keeps numerical-effort accounting exact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .problems import Genome, is_optimum
from .records import IslandStats, RunResult
from .seeding import node_rng


@dataclass
class Individual:
    """Genome plus its cached fitness."""

    genome: Genome
    fitness: float

    def copy(self) -> "Individual":
        return Individual(self.genome.copy(), self.fitness)


def default_mutation_rate(length: int) -> float:
    """Standard per-bit mutation probability: 4.0 / chromosome length."""
    return min(1.0, 4.0 / length)


@dataclass(frozen=True)
class GaParams:
    pop_size: int = 64
    p_crossover: float = 0.8
    p_mutation_per_bit: float | None = None  # None resolves to 4/L
    tournament_size: int = 2

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError(f"pop_size must be >= 2, got {self.pop_size}")
        if not 0.0 <= self.p_crossover <= 1.0:
            raise ValueError(f"p_crossover must be in [0,1], got {self.p_crossover}")
        if self.p_mutation_per_bit is not None and not 0.0 <= self.p_mutation_per_bit <= 1.0:
            raise ValueError("p_mutation_per_bit must be in [0,1]")
        if self.tournament_size < 1:
            raise ValueError("tournament_size must be >= 1")

    def resolved_for(self, length: int) -> "GaParams":
        """Fill the length-dependent mutation rate if left unset."""
        if self.p_mutation_per_bit is not None:
            return self
        return replace(self, p_mutation_per_bit=default_mutation_rate(length))


class Population:
    """Fixed-size population backed by flat arrays; `t` counts steady-state
    iterations. Owned by exactly one execution unit; not safe for
    concurrent mutation."""

    __slots__ = ("genomes", "fitness", "t")

    def __init__(self, genomes: np.ndarray, fitness: np.ndarray, t: int = 0):
        if genomes.shape[0] != fitness.shape[0]:
            raise ValueError("genomes and fitness must have equal leading size")
        self.genomes = genomes
        self.fitness = fitness
        self.t = t

    def __len__(self) -> int:
        return self.genomes.shape[0]

    @property
    def size(self) -> int:
        return self.genomes.shape[0]

    def best_index(self) -> int:
        return int(np.argmax(self.fitness))

    def worst_index(self) -> int:
        return int(np.argmin(self.fitness))

    def best_fitness(self) -> float:
        return float(self.fitness.max())

    def member(self, i: int) -> Individual:
        return Individual(self.genomes[i].copy(), float(self.fitness[i]))

    def best(self) -> Individual:
        return self.member(self.best_index())


def init_population(params: GaParams, problem, rng) -> Population:
    """Uniformly random population with valid fitness caches
    (costs pop_size evaluations)."""
    genomes = rng.integers(0, 2, size=(params.pop_size, problem.length), dtype=np.uint8)
    fitness = np.array([problem.evaluate(g) for g in genomes], dtype=np.float64)
    return Population(genomes, fitness)


def _tournament_index(pop: Population, size: int, rng) -> int:
    """Index of the fittest of `size` draws with replacement; ties keep the
    first-drawn."""
    fitness = pop.fitness
    n = pop.size
    best = rng.integers(0, n)
    for _ in range(size - 1):
        j = rng.integers(0, n)
        if fitness[j] > fitness[best]:
            best = j
    return int(best)


def tournament_select(pop: Population, rng, tournament_size: int = 2) -> Individual:
    """Fitter of `tournament_size` uniformly drawn members (with replacement)."""
    if pop.size == 0:
        raise ValueError("population is empty")
    return pop.member(_tournament_index(pop, tournament_size, rng))


def one_point_crossover(a: Genome, b: Genome, p_crossover: float, rng) -> Genome:
    """With probability p_crossover, splice a prefix of `a` to a suffix of
    `b` at a cut in [1, L-1]; otherwise return a copy of `a`."""
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"parent lengths differ: {a.shape[0]} != {b.shape[0]}")
    length = a.shape[0]
    if rng.random() >= p_crossover or length < 2:
        return a.copy()
    cut = rng.integers(1, length)
    child = np.empty(length, dtype=np.uint8)
    child[:cut] = a[:cut]
    child[cut:] = b[cut:]
    return child


def mutate(genome: Genome, p_per_bit: float, rng) -> Genome:
    """Flip each bit independently with probability p_per_bit."""
    if not 0.0 <= p_per_bit <= 1.0:
        raise ValueError(f"p_per_bit must be in [0,1], got {p_per_bit}")
    flips = rng.random(genome.shape[0]) < p_per_bit
    return genome ^ flips.view(np.uint8)  # bool is 1 byte; view avoids a cast


def _offspring_step(pop: Population, params: GaParams, problem, rng) -> float:
    """One steady-state iteration; returns the offspring fitness.

    Exactly one evaluation. The offspring replaces the current worst
    member iff it is not worse, so the population best is monotone.
    """
    i = _tournament_index(pop, params.tournament_size, rng)
    j = _tournament_index(pop, params.tournament_size, rng)
    child = one_point_crossover(pop.genomes[i], pop.genomes[j], params.p_crossover, rng)
    child = mutate(child, params.p_mutation_per_bit, rng)
    f = problem.evaluate(child)
    w = int(np.argmin(pop.fitness))
    if f >= pop.fitness[w]:
        pop.genomes[w] = child
        pop.fitness[w] = f
    pop.t += 1
    return f


def ssga_step(pop: Population, params: GaParams, problem, rng) -> tuple[Population, int]:
    """Public steady-state step: returns the population and the evaluation
    count (always 1)."""
    _offspring_step(pop, params, problem, rng)
    return pop, 1


def immigrate(pop: Population, incoming: Individual) -> Population:
    """Unconditionally replace the worst member with the immigrant."""
    w = pop.worst_index()
    pop.genomes[w] = incoming.genome
    pop.fitness[w] = incoming.fitness
    return pop


def select_emigrant(pop: Population, rng) -> Individual:
    """Uniformly random member, copied (the population is unchanged)."""
    if pop.size == 0:
        raise ValueError("population is empty")
    return pop.member(rng.integers(0, pop.size))


def run_panmictic_ssga(params: GaParams, problem, budget: int, seed: int) -> RunResult:
    """Single unstructured population run until the optimum or the
    evaluation budget is reached.

    Virtual time: one iteration per tick, so elapsed_ms equals the
    iteration count. Matches a single-node island run with the same seed.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    rng = node_rng(seed)
    params = params.resolved_for(problem.length)
    pop = init_population(params, problem, rng)
    evals = pop.size
    best = pop.best_fitness()
    trace = [(0.0, best)]
    iterations = 0
    while not is_optimum(best, problem) and evals + 1 <= budget:
        f = _offspring_step(pop, params, problem, rng)
        evals += 1
        iterations += 1
        if f > best:
            best = f
            trace.append((float(iterations), best))
    stats = IslandStats(evaluations=evals, iterations=iterations)
    return RunResult(
        seed=seed,
        total_evaluations=evals,
        elapsed_ms=float(iterations),
        best_fitness=best,
        success=is_optimum(best, problem),
        trace=trace,
        per_island={"panmictic": stats},
    )
