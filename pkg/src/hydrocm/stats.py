"""Performance statistics for benchmark runs: effort/time aggregates,
speedup against a sequential reference, the Mann-Whitney U test (exact by
enumeration for small samples, tie-corrected normal approximation
otherwise), and median-trace selection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

from .records import RecordRow

#: Largest per-sample size for which the exact permutation distribution is
#: enumerated; C(16, 8) = 12870 splits is still cheap.
EXACT_LIMIT = 8


@dataclass(frozen=True)
class SampleSet:
    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


def _values(sample) -> list[float]:
    if isinstance(sample, SampleSet):
        return list(sample.values)
    return [float(v) for v in sample]


def mean_std(sample) -> tuple[float, float]:
    """Arithmetic mean and sample standard deviation (n-1 denominator);
    a singleton has deviation 0 by convention."""
    xs = _values(sample)
    if not xs:
        raise ValueError("sample is empty")
    n = len(xs)
    mean = sum(xs) / n
    if n == 1:
        return mean, 0.0
    var = sum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, math.sqrt(var)


@dataclass(frozen=True)
class SpeedupResult:
    mean_sequential: float
    mean_parallel: float
    speedup: float


def speedup(sequential, parallel) -> SpeedupResult:
    """Ratio of mean sequential to mean parallel execution time. Rounding
    happens only at presentation (see format_speedup)."""
    seq_mean, _ = mean_std(sequential)
    par_mean, _ = mean_std(parallel)
    if par_mean == 0:
        raise ValueError("parallel mean time is zero; speedup undefined")
    return SpeedupResult(seq_mean, par_mean, seq_mean / par_mean)


def format_speedup(result: SpeedupResult) -> str:
    return f"{result.speedup:.2f}"


class MannWhitneyResult(NamedTuple):
    U: float
    p: float
    method: str


def _midranks(pooled: list[float]) -> list[float]:
    n = len(pooled)
    order = sorted(range(n), key=pooled.__getitem__)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def mann_whitney_u(a, b) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test.

    U is the statistic of the first sample (rank-sum form with midranks
    for ties). For sizes up to EXACT_LIMIT each, the two-sided p-value is
    computed by full enumeration of all rank splits of the pooled data;
    beyond that a normal approximation with tie-corrected variance and
    continuity correction is used. Swapping the samples maps U to
    n_a*n_b - U and leaves p unchanged.
    """
    xs, ys = _values(a), _values(b)
    if not xs or not ys:
        raise ValueError("both samples must be non-empty")
    n_a, n_b = len(xs), len(ys)
    n = n_a + n_b
    ranks = _midranks(xs + ys)
    r_a = sum(ranks[:n_a])
    u = r_a - n_a * (n_a + 1) / 2.0
    mu = n_a * n_b / 2.0

    if n_a <= EXACT_LIMIT and n_b <= EXACT_LIMIT:
        d_obs = abs(u - mu)
        offset = n_a * (n_a + 1) / 2.0
        count = 0
        total = 0
        for combo in itertools.combinations(range(n), n_a):
            u_perm = sum(ranks[i] for i in combo) - offset
            if abs(u_perm - mu) >= d_obs:
                count += 1
            total += 1
        return MannWhitneyResult(u, count / total, "exact")

    tie_counts = []
    for _, group in itertools.groupby(sorted(xs + ys)):
        tie_counts.append(len(list(group)))
    tie_term = sum(t**3 - t for t in tie_counts)
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        return MannWhitneyResult(u, 1.0, "normal_approx")  # all values tied
    z = max(0.0, abs(u - mu) - 0.5) / math.sqrt(var)  # continuity correction
    p = min(1.0, math.erfc(z / math.sqrt(2.0)))
    return MannWhitneyResult(u, p, "normal_approx")


def median_trace(traces, successes=None):
    """The single trace whose finish ranks in the lower-median position.

    Successful runs order by final timestamp (faster is better) and rank
    ahead of failed runs, which order by final fitness (higher is
    better). With no success flags, all traces are treated as successful.
    """
    if not traces:
        raise ValueError("need at least one trace")
    if successes is None:
        successes = [True] * len(traces)
    if len(successes) != len(traces):
        raise ValueError("successes must match traces in length")

    def key(i):
        trace = traces[i]
        end_time, end_fitness = trace[-1] if trace else (math.inf, -math.inf)
        if successes[i]:
            return (0, end_time)
        return (1, -end_fitness)

    order = sorted(range(len(traces)), key=key)
    return traces[order[(len(traces) - 1) // 2]]


@dataclass(frozen=True)
class SummaryRow:
    """One aggregate line in the style of the benchmark tables: means and
    deviations over successful runs only, with the success rate alongside.
    Aggregates are None when no run succeeded (rendered as '*')."""

    algorithm: str
    problem: str
    runs: int
    successes: int
    success_rate: float
    eval_mean: float | None = None
    eval_std: float | None = None
    time_mean: float | None = None
    time_std: float | None = None


def summarize_experiment(runs: list[RecordRow], algorithm: str = "", problem: str = "") -> SummaryRow:
    """Aggregate one experiment's record rows; failed runs are excluded
    from the to-optimum statistics and surface only via success_rate."""
    if not runs:
        raise ValueError("need at least one run")
    solved = [r for r in runs if r.success]
    row = SummaryRow(
        algorithm=algorithm,
        problem=problem,
        runs=len(runs),
        successes=len(solved),
        success_rate=len(solved) / len(runs),
    )
    if not solved:
        return row
    eval_mean, eval_std = mean_std([r.evaluations for r in solved])
    time_mean, time_std = mean_std([r.elapsed_ms for r in solved])
    return SummaryRow(
        algorithm=row.algorithm,
        problem=row.problem,
        runs=row.runs,
        successes=row.successes,
        success_rate=row.success_rate,
        eval_mean=eval_mean,
        eval_std=eval_std,
        time_mean=time_mean,
        time_std=time_std,
    )
