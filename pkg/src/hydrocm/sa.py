"""Simulated annealing with Boltzmann acceptance and a very fast
default cooling schedule (T_k = t0 / (1 + rate*k)); a geometric schedule
is available behind the same interface. The framework maximizes fitness,
so the acceptance exponent uses delta = f_current - f_candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ga import Individual, mutate
from .problems import Genome, is_optimum, random_genome
from .records import IslandStats, RunResult
from .seeding import node_rng

SCHEDULES = ("fast", "geometric")

#: Random genomes sampled to estimate the initial temperature when t0 is
#: left unset; the estimate is the fitness standard deviation, which
#: scales acceptance to the problem's fitness range.
T0_SAMPLES = 100


@dataclass(frozen=True)
class SaParams:
    t0: float | None = None  # None estimates from T0_SAMPLES random genomes
    schedule: str = "fast"
    schedule_rate: float = 1.0
    p_perturb_per_bit: float | None = None  # None resolves to 4/L

    def __post_init__(self):
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}, got {self.schedule!r}")
        if self.schedule_rate <= 0:
            raise ValueError("schedule_rate must be positive")
        if self.schedule == "geometric" and self.schedule_rate > 1.0:
            raise ValueError("geometric schedule_rate must be in (0, 1]")
        if self.t0 is not None and self.t0 <= 0:
            raise ValueError("t0 must be positive")

    def resolved_for(self, length: int) -> "SaParams":
        if self.p_perturb_per_bit is not None:
            return self
        from dataclasses import replace

        return replace(self, p_perturb_per_bit=min(1.0, 4.0 / length))


@dataclass
class SaState:
    """Annealing state: current solution, best-so-far, and the cooling
    position. Owned by exactly one execution unit."""

    current: Individual
    best: Individual
    t0: float
    temperature: float
    step: int = 0


def perturb(genome: Genome, p_per_bit: float, rng) -> Genome:
    """Independent per-bit flips; the move generator of the annealer."""
    if not 0.0 < p_per_bit <= 1.0:
        raise ValueError(f"p_per_bit must be in (0,1], got {p_per_bit}")
    return mutate(genome, p_per_bit, rng)


def accept(f_current: float, f_candidate: float, temperature: float, rng) -> bool:
    """Boltzmann acceptance: improving or equal moves always pass, worse
    moves pass with probability exp(-(f_current - f_candidate)/T)."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    if f_candidate >= f_current:
        return True
    return rng.random() < math.exp(-(f_current - f_candidate) / temperature)


def update_temperature(t0: float, step: int, params: SaParams) -> float:
    """Temperature after `step` updates; strictly positive and
    non-increasing in `step` for both schedules."""
    if step < 0:
        raise ValueError(f"step must be >= 0, got {step}")
    if params.schedule == "fast":
        return t0 / (1.0 + params.schedule_rate * step)
    return t0 * params.schedule_rate**step


def estimate_t0(problem, rng, samples: int = T0_SAMPLES) -> float:
    """Fitness standard deviation over `samples` random genomes, floored
    away from zero so the temperature invariant holds."""
    fits = [problem.evaluate(random_genome(problem.length, rng)) for _ in range(samples)]
    return max(float(np.std(fits)), 1e-9)


def init_sa_state(params: SaParams, problem, rng) -> tuple[SaState, int]:
    """Fresh state from a random solution; returns (state, evaluations),
    counting the initial evaluation and any t0 estimation samples."""
    genome = random_genome(problem.length, rng)
    f = problem.evaluate(genome)
    evals = 1
    if params.t0 is not None:
        t0 = params.t0
    else:
        t0 = estimate_t0(problem, rng)
        evals += T0_SAMPLES
    current = Individual(genome, f)
    return SaState(current=current, best=current.copy(), t0=t0, temperature=t0), evals


def sa_step(state: SaState, params: SaParams, problem, rng) -> tuple[SaState, int]:
    """One annealing move: perturb, evaluate (one evaluation), accept or
    reject, update best, cool, advance the step counter."""
    cand = perturb(state.current.genome, params.p_perturb_per_bit, rng)
    f = problem.evaluate(cand)
    if accept(state.current.fitness, f, state.temperature, rng):
        state.current = Individual(cand, f)
        if f > state.best.fitness:
            state.best = state.current.copy()
    state.step += 1
    state.temperature = update_temperature(state.t0, state.step, params)
    return state, 1


def inject_immigrant(state: SaState, genome: Genome, problem, rng) -> SaState:
    """Treat an immigrant genome as a proposed move at the current
    temperature (costs one evaluation). The cooling position is untouched."""
    if genome.shape[0] != problem.length:
        raise ValueError(f"immigrant length {genome.shape[0]} != {problem.length}")
    f = problem.evaluate(genome)
    if accept(state.current.fitness, f, state.temperature, rng):
        state.current = Individual(genome.copy(), f)
        if f > state.best.fitness:
            state.best = state.current.copy()
    return state


def select_emigrant_sa(state: SaState) -> Individual:
    """Copy of the best-so-far solution; the state is unchanged."""
    return state.best.copy()


def run_panmictic_sa(params: SaParams, problem, budget: int, seed: int) -> RunResult:
    """Single annealer run until the optimum or the evaluation budget.

    Virtual time: one proposed move per tick, so elapsed_ms equals the
    move count. Matches a single-node island run with the same seed.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    rng = node_rng(seed)
    params = params.resolved_for(problem.length)
    state, evals = init_sa_state(params, problem, rng)
    best = state.best.fitness
    trace = [(0.0, best)]
    iterations = 0
    while not is_optimum(best, problem) and evals + 1 <= budget:
        sa_step(state, params, problem, rng)
        evals += 1
        iterations += 1
        if state.best.fitness > best:
            best = state.best.fitness
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
