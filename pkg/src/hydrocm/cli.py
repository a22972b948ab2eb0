"""Command-line front end: run experiments from a config file, report
statistics over record files, and validate topology files.

Exit codes: 0 success, 1 validation findings, 2 input error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import yaml

from .engine import MODES, VIRTUAL_TIME, WALL_CLOCK, RunConfig, run_experiment
from .ga import GaParams, run_panmictic_ssga
from .problems import MmdpInstance, SubsetSumInstance, generate_ssp_instance, save_instance
from .records import (
    read_records,
    record_from_result,
    write_records,
    write_trace,
)
from .sa import SaParams, run_panmictic_sa
from .stats import SummaryRow, mann_whitney_u, mean_std, summarize_experiment
from .topology import (
    NodeSpec,
    TopologySpec,
    ethane_topology,
    load_topology,
    ring_topology,
    validate_topology,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_INPUT = 2
EXIT_IO = 3

SETUPS = ("ethane_g", "ethane_s", "ring", "panmictic_ssga", "panmictic_sa", "custom")

MODE_NAMES = {"virtual": VIRTUAL_TIME, "wall": WALL_CLOCK}


class ConfigError(ValueError):
    def __init__(self, fieldname: str, message: str):
        self.fieldname = fieldname
        super().__init__(f"config field '{fieldname}': {message}")


@dataclass
class ExperimentConfig:
    """Parsed and validated experiment description."""

    problem: object
    problem_label: str
    setup: str
    topology: TopologySpec | None
    repetitions: int
    budget: int
    mode: str
    master_seed: int
    migration_frequency: int = 50
    migration_count: int = 1
    slow_factor: float = 0.35
    ga: GaParams | None = None
    sa: SaParams | None = None
    multiplicity_as_frequency: bool = False
    wall_throttle_ms: float = 0.0


def _require(data: dict, key: str, fieldname: str | None = None):
    if key not in data:
        raise ConfigError(fieldname or key, "missing")
    return data[key]


def _as_int(value, fieldname: str, minimum=None) -> int:
    try:
        out = int(value)
    except (TypeError, ValueError):
        raise ConfigError(fieldname, f"expected an integer, got {value!r}") from None
    if minimum is not None and out < minimum:
        raise ConfigError(fieldname, f"must be >= {minimum}, got {out}")
    return out


def _build_problem(data, cfg_dir: Path):
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("problem", "expected a mapping with a 'kind'")
    kind = data["kind"]
    if kind == "mmdp":
        k = _as_int(_require(data, "k", "problem.k"), "problem.k", minimum=1)
        return MmdpInstance(k=k), f"mmdp_k{k}"
    if kind == "ssp":
        n = _as_int(_require(data, "n", "problem.n"), "problem.n", minimum=2)
        seed = _as_int(_require(data, "seed", "problem.seed"), "problem.seed")
        return generate_ssp_instance(n, seed), f"ssp_n{n}_s{seed}"
    raise ConfigError("problem.kind", f"unknown problem {kind!r}")


def _build_setup(data, slow_factor: float, cfg_dir: Path):
    if isinstance(data, str):
        data = {"kind": data}
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("setup", "expected a mapping with a 'kind'")
    kind = data["kind"]
    if kind not in SETUPS:
        raise ConfigError("setup.kind", f"must be one of {SETUPS}, got {kind!r}")
    if kind == "ethane_g":
        return kind, ethane_topology("G", slow_factor)
    if kind == "ethane_s":
        return kind, ethane_topology("S", slow_factor)
    if kind == "ring":
        n = _as_int(data.get("n", 8), "setup.n", minimum=2)
        positions = data.get("fast_positions", [0, 3])
        try:
            topo = ring_topology(n, [int(p) for p in positions], slow_factor)
        except (TypeError, ValueError) as exc:
            raise ConfigError("setup.fast_positions", str(exc)) from None
        return kind, topo
    if kind == "custom":
        raw_path = _require(data, "topology", "setup.topology")
        path = Path(raw_path)
        if not path.is_absolute():
            path = cfg_dir / path
        if not path.exists():
            raise ConfigError("setup.topology", f"file not found: {path}")
        try:
            topo = load_topology(path)
        except ValueError as exc:
            raise ConfigError("setup.topology", str(exc)) from None
        violations = validate_topology(topo)
        if violations:
            raise ConfigError("setup.topology", "; ".join(violations))
        return kind, topo
    return kind, None  # panmictic setups


def _build_ga(data) -> GaParams | None:
    if data is None:
        return None
    try:
        return GaParams(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError("ga", str(exc)) from None


def _build_sa(data) -> SaParams | None:
    if data is None:
        return None
    try:
        return SaParams(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError("sa", str(exc)) from None


def load_experiment_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Parse a YAML experiment config; `overrides` (from command-line
    flags) win over file values."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a mapping")
    data = dict(data)
    data.update(overrides or {})

    mode_name = data.get("mode", "virtual")
    if mode_name in MODE_NAMES:
        mode = MODE_NAMES[mode_name]
    elif mode_name in MODES:
        mode = mode_name
    else:
        raise ConfigError("mode", f"must be 'virtual' or 'wall', got {mode_name!r}")

    slow_factor = float(data.get("slow_factor", 0.35))
    if slow_factor <= 0:
        raise ConfigError("slow_factor", "must be positive")
    problem, problem_label = _build_problem(_require(data, "problem"), path.parent)
    setup, topology = _build_setup(_require(data, "setup"), slow_factor, path.parent)

    return ExperimentConfig(
        problem=problem,
        problem_label=problem_label,
        setup=setup,
        topology=topology,
        repetitions=_as_int(data.get("repetitions", 100), "repetitions", minimum=1),
        budget=_as_int(_require(data, "budget"), "budget", minimum=1),
        mode=mode,
        master_seed=_as_int(data.get("master_seed", 0), "master_seed"),
        migration_frequency=_as_int(
            data.get("migration_frequency", 50), "migration_frequency", minimum=1
        ),
        migration_count=_as_int(data.get("migration_count", 1), "migration_count", minimum=1),
        slow_factor=slow_factor,
        ga=_build_ga(data.get("ga")),
        sa=_build_sa(data.get("sa")),
        multiplicity_as_frequency=bool(data.get("multiplicity_as_frequency", False)),
        wall_throttle_ms=float(data.get("wall_throttle_ms", 0.0)),
    )


def _run_one(cfg: ExperimentConfig, seed: int):
    panmictic = cfg.setup in ("panmictic_ssga", "panmictic_sa")
    if panmictic and cfg.mode == VIRTUAL_TIME:
        if cfg.setup == "panmictic_ssga":
            return run_panmictic_ssga(cfg.ga or GaParams(), cfg.problem, cfg.budget, seed)
        return run_panmictic_sa(cfg.sa or SaParams(), cfg.problem, cfg.budget, seed)
    topology = cfg.topology
    if panmictic:
        # wall mode: a single-island run is the same algorithm with real timestamps
        algorithm = "ssga" if cfg.setup == "panmictic_ssga" else "sa"
        topology = TopologySpec((NodeSpec("panmictic", "carbon", algorithm, 1.0),), ())
    run_config = RunConfig(
        topology=topology,
        problem=cfg.problem,
        evaluation_budget=cfg.budget,
        seed=seed,
        migration_frequency=cfg.migration_frequency,
        migration_count=cfg.migration_count,
        mode=cfg.mode,
        ga=cfg.ga,
        sa=cfg.sa,
        multiplicity_as_frequency=cfg.multiplicity_as_frequency,
        wall_throttle_ms=cfg.wall_throttle_ms,
    )
    return run_experiment(run_config)


def _summary_csv(row: SummaryRow) -> str:
    def fmt(v):
        return "*" if v is None else f"{v}"

    return ",".join(
        [
            row.algorithm,
            row.problem,
            str(row.runs),
            str(row.successes),
            f"{row.success_rate}",
            fmt(row.eval_mean),
            fmt(row.eval_std),
            fmt(row.time_mean),
            fmt(row.time_std),
        ]
    )


def cmd_run(args) -> int:
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.reps is not None:
        overrides["repetitions"] = args.reps
    if args.mode is not None:
        overrides["mode"] = args.mode
    if args.budget is not None:
        overrides["budget"] = args.budget
    try:
        cfg = load_experiment_config(args.config, overrides)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    out_dir = Path(args.out or "runs")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        traces_dir = out_dir / "traces"
        traces_dir.mkdir(exist_ok=True)
        if isinstance(cfg.problem, SubsetSumInstance):
            save_instance(cfg.problem, out_dir / "instance.txt")

        rows = []
        for rep in range(cfg.repetitions):
            seed = cfg.master_seed + rep
            result = _run_one(cfg, seed)
            rows.append(record_from_result(result))
            write_trace(traces_dir / f"rep{rep:04d}.trace", result.trace)
        write_records(out_dir / "records.csv", rows)
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO

    summary = summarize_experiment(rows, algorithm=cfg.setup, problem=cfg.problem_label)
    print("algorithm,problem,runs,successes,success_rate,eval_mean,eval_std,time_mean,time_std")
    print(_summary_csv(summary))
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        groups = []
        for record_file in args.records:
            path = Path(record_file)
            rows = read_records(path)
            if not rows:
                raise ValueError(f"{path}: no run records")
            groups.append((path.stem, rows))
        sequential = None
        if args.sequential:
            sequential = read_records(Path(args.sequential))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    labels = [label for label, _ in groups]
    header = [
        "algorithm",
        "runs",
        "successes",
        "success_rate",
        "eval_mean",
        "eval_std",
        "time_mean",
        "time_std",
    ]
    if sequential is not None:
        header.append("speedup")
    if len(groups) > 1:
        header.extend(f"p_vs_{label}" for label in labels)

    lines = [",".join(header)]
    seq_mean = None
    if sequential is not None:
        seq_solved = [r.elapsed_ms for r in sequential if r.success]
        if seq_solved:
            seq_mean, _ = mean_std(seq_solved)

    for label, rows in groups:
        summary = summarize_experiment(rows, algorithm=label)
        cells = [
            label,
            str(summary.runs),
            str(summary.successes),
            f"{summary.success_rate}",
            "*" if summary.eval_mean is None else f"{summary.eval_mean}",
            "*" if summary.eval_std is None else f"{summary.eval_std}",
            "*" if summary.time_mean is None else f"{summary.time_mean}",
            "*" if summary.time_std is None else f"{summary.time_std}",
        ]
        if sequential is not None:
            if seq_mean is None or summary.time_mean in (None, 0):
                cells.append("*")
            else:
                cells.append(f"{seq_mean / summary.time_mean:.2f}")
        if len(groups) > 1:
            mine = [r.elapsed_ms for r in rows if r.success]
            for other_label, other_rows in groups:
                if other_label == label:
                    cells.append("-")
                    continue
                theirs = [r.elapsed_ms for r in other_rows if r.success]
                if not mine or not theirs:
                    cells.append("*")
                    continue
                _, p, _ = mann_whitney_u(mine, theirs)
                cells.append(f"{p:.4f}")
        lines.append(",".join(cells))

    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"error: I/O failure: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate_topology(args) -> int:
    path = Path(args.topology)
    try:
        spec = load_topology(path)
    except FileNotFoundError:
        print(f"error: file not found: {path}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    violations = validate_topology(spec)
    if violations:
        for v in violations:
            print(v)
        return EXIT_FINDINGS
    print("valid")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hydrocm",
        description="Hydrocarbon-shaped heterogeneous island metaheuristics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured experiment")
    p_run.add_argument("--config", required=True, help="experiment config file (YAML)")
    p_run.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_run.add_argument("--reps", type=int, default=None, help="override repetitions")
    p_run.add_argument("--budget", type=int, default=None, help="override evaluation budget")
    p_run.add_argument("--mode", choices=("virtual", "wall"), default=None)
    p_run.add_argument("--out", default=None, help="output directory (default: runs)")
    p_run.set_defaults(func=cmd_run)

    p_rep = sub.add_parser("report", help="summarize record files")
    p_rep.add_argument("records", nargs="+", help="record CSV files")
    p_rep.add_argument("--sequential", default=None, help="single-processor reference records")
    p_rep.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_rep.set_defaults(func=cmd_report)

    p_val = sub.add_parser("validate-topology", help="check a topology file")
    p_val.add_argument("topology", help="topology YAML file")
    p_val.set_defaults(func=cmd_validate_topology)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
