"""Benchmark fitness functions: subset sum (SSP) and the massively
multimodal deceptive problem (MMDP), plus seeded instance generation.

All operations are pure; genomes are 1-D numpy uint8 arrays of 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

Genome = np.ndarray

#: Tolerance of the optimum test. SSP fitness values are integral, so the
#: test degenerates to exact equality there.
OPTIMUM_EPS = 1e-9

#: Inclusive weight range for generated subset-sum instances.
WEIGHT_MAX = 10_000

#: Bipolar deception subfunction, indexed by the unitation of a 6-bit block.
#: Fully deceptive: the two optima sit at unitation 0 and 6 while the
#: gradient of the interior points toward the center.
_MMDP_SUBFUNCTION = np.array(
    [1.000000, 0.000000, 0.360384, 0.640576, 0.360384, 0.000000, 1.000000]
)

MMDP_BLOCK_BITS = 6


def bits(s: str) -> Genome:
    """Parse a string of '0'/'1' characters into a genome."""
    return np.frombuffer(s.encode("ascii"), dtype=np.uint8) - ord("0")


def random_genome(length: int, rng) -> Genome:
    """Uniformly random genome of the given length."""
    return rng.integers(0, 2, size=length, dtype=np.uint8)


def unitation(block: Genome) -> int:
    """Number of 1-bits in a 6-bit block."""
    if len(block) != MMDP_BLOCK_BITS:
        raise ValueError(f"unitation block must have {MMDP_BLOCK_BITS} bits, got {len(block)}")
    return int(np.sum(block))


def mmdp_subfunction(u: int) -> float:
    """Bipolar deception value for a block with unitation `u`."""
    if not 0 <= u <= MMDP_BLOCK_BITS:
        raise ValueError(f"unitation must be in [0, {MMDP_BLOCK_BITS}], got {u}")
    return float(_MMDP_SUBFUNCTION[u])


@dataclass(frozen=True)
class MmdpInstance:
    """MMDP instance with k deceptive 6-bit subproblems; optimum is exactly k."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")

    @property
    def length(self) -> int:
        return MMDP_BLOCK_BITS * self.k

    @property
    def optimum(self) -> float:
        return float(self.k)

    def evaluate(self, genome: Genome) -> float:
        return mmdp_fitness(genome, self)

    def describe(self) -> str:
        return f"mmdp(k={self.k})"


def mmdp_fitness(genome: Genome, inst: MmdpInstance) -> float:
    """Sum of the deception subfunction over consecutive disjoint 6-bit blocks."""
    if genome.shape[0] != inst.length:
        raise ValueError(f"genome length {genome.shape[0]} != {inst.length} (k={inst.k})")
    u = genome.reshape(inst.k, MMDP_BLOCK_BITS).sum(axis=1)
    return float(_MMDP_SUBFUNCTION.take(u).sum())


@dataclass(frozen=True, eq=False)
class SubsetSumInstance:
    """Subset-sum instance: pick a subset of `weights` whose sum approaches
    `capacity` without exceeding it. `known_optimum` is achievable by
    construction."""

    weights: np.ndarray
    capacity: int
    known_optimum: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1 or w.shape[0] < 1:
            raise ValueError("weights must be a non-empty 1-D sequence")
        if (w < 0).any() or (w > WEIGHT_MAX).any():
            raise ValueError(f"weights must lie in [0, {WEIGHT_MAX}]")
        if not 0 <= self.capacity <= int(w.sum()):
            raise ValueError("capacity must lie in [0, sum(weights)]")
        if not 0 <= self.known_optimum <= self.capacity:
            raise ValueError("known_optimum must lie in [0, capacity]")

    @property
    def length(self) -> int:
        return int(self.weights.shape[0])

    @property
    def optimum(self) -> float:
        return float(self.known_optimum)

    def evaluate(self, genome: Genome) -> float:
        return ssp_fitness(genome, self)

    def describe(self) -> str:
        return f"ssp(n={self.length})"


def ssp_fitness(genome: Genome, inst: SubsetSumInstance) -> float:
    """Subset sum with a reflected over-capacity penalty.

    For subset sum s: returns s when s <= C, else max(0, C - (s - C)),
    so fitness always lies in [0, C] and the optimum test is exact.
    """
    if genome.shape[0] != inst.length:
        raise ValueError(f"genome length {genome.shape[0]} != {inst.length} weights")
    s = int(inst.weights @ genome)
    c = inst.capacity
    if s <= c:
        return float(s)
    return float(max(0, c - (s - c)))


def generate_ssp_instance(n: int, seed: int) -> SubsetSumInstance:
    """Seeded instance: n Gaussian weights in [0, 10^4], capacity the sum of
    a uniformly random half of them (so a perfect subset always exists).

    Weights are drawn from N(5000, (5000/3)^2), rounded and clamped; about
    99.7% of the mass lies inside the range before clamping.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    rng = np.random.default_rng(seed)
    raw = rng.normal(WEIGHT_MAX / 2.0, WEIGHT_MAX / 6.0, size=n)
    weights = np.clip(np.rint(raw), 0, WEIGHT_MAX).astype(np.int64)
    half = rng.choice(n, size=n // 2, replace=False)
    capacity = int(weights[half].sum())
    return SubsetSumInstance(weights=weights, capacity=capacity, known_optimum=capacity)


def is_optimum(fitness: float, problem) -> bool:
    """True iff `fitness` reaches the problem's known optimum (within 1e-9;
    exact for the integral SSP fitness)."""
    return fitness >= problem.optimum - OPTIMUM_EPS


def save_instance(inst: SubsetSumInstance, path) -> None:
    """Write the flat text format: n, capacity, known_optimum, then one
    weight per line."""
    lines = [str(inst.length), str(inst.capacity), str(inst.known_optimum)]
    lines.extend(str(int(w)) for w in inst.weights)
    Path(path).write_text("\n".join(lines) + "\n")


def load_instance(path) -> SubsetSumInstance:
    """Read the flat text instance format written by save_instance."""
    raw = Path(path).read_text().split()
    if len(raw) < 3:
        raise ValueError(f"{path}: truncated instance file")
    n, capacity, known_optimum = int(raw[0]), int(raw[1]), int(raw[2])
    weights = [int(tok) for tok in raw[3:]]
    if len(weights) != n:
        raise ValueError(f"{path}: expected {n} weights, found {len(weights)}")
    return SubsetSumInstance(
        weights=np.array(weights, dtype=np.int64),
        capacity=capacity,
        known_optimum=known_optimum,
    )
