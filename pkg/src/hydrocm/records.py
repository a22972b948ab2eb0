"""Run results and their flat on-disk formats.

Record files: a CSV header `seed,evaluations,elapsed_ms,best,success`
followed by one row per run. Trace files: `time_ms,fitness` per line.
Both are written with fixed newlines and repr-exact floats so that
virtual-time reruns are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

RECORD_HEADER = "seed,evaluations,elapsed_ms,best,success"


@dataclass
class IslandStats:
    """Per-node counters aggregated into a RunResult."""

    evaluations: int = 0
    iterations: int = 0
    emigrants_sent: int = 0
    immigrants_received: int = 0
    messages_dropped: int = 0


@dataclass
class RunResult:
    """Outcome of one optimization run.

    `trace` is an ordered list of (time_ms, best_fitness) pairs, one entry
    per improvement of the global best; `elapsed_ms` is virtual or
    wall-clock depending on the run mode.
    """

    seed: int
    total_evaluations: int
    elapsed_ms: float
    best_fitness: float
    success: bool
    trace: list[tuple[float, float]] = field(default_factory=list)
    per_island: dict[str, IslandStats] = field(default_factory=dict)


@dataclass(frozen=True)
class RecordRow:
    """One parsed row of a record file."""

    seed: int
    evaluations: int
    elapsed_ms: float
    best: float
    success: bool


def record_from_result(result: RunResult) -> RecordRow:
    return RecordRow(
        seed=result.seed,
        evaluations=result.total_evaluations,
        elapsed_ms=result.elapsed_ms,
        best=result.best_fitness,
        success=result.success,
    )


def _format_row(row: RecordRow) -> str:
    return (
        f"{row.seed},{row.evaluations},{row.elapsed_ms!r},"
        f"{row.best!r},{int(row.success)}"
    )


def write_records(path, rows: list[RecordRow]) -> None:
    lines = [RECORD_HEADER]
    lines.extend(_format_row(r) for r in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def read_records(path) -> list[RecordRow]:
    """Parse a record file; raises ValueError naming the offending line."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != RECORD_HEADER:
        raise ValueError(f"{path}: line 1: expected header '{RECORD_HEADER}'")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"{path}: line {lineno}: expected 5 fields, got {len(parts)}")
        try:
            rows.append(
                RecordRow(
                    seed=int(parts[0]),
                    evaluations=int(parts[1]),
                    elapsed_ms=float(parts[2]),
                    best=float(parts[3]),
                    success=bool(int(parts[4])),
                )
            )
        except ValueError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return rows


def write_trace(path, trace: list[tuple[float, float]]) -> None:
    lines = [f"{t!r},{f!r}" for t, f in trace]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_trace(path) -> list[tuple[float, float]]:
    trace = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}: line {lineno}: expected 'time_ms,fitness'")
        trace.append((float(parts[0]), float(parts[1])))
    return trace
