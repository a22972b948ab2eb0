"""End-to-end CLI tests on tiny instances (every path finishes in seconds)."""

from pathlib import Path

import yaml

from hydrocm.cli import main
from hydrocm.records import read_records

REPO_ROOT = Path(__file__).resolve().parent.parent


def write_config(path, **overrides):
    data = {
        "problem": {"kind": "mmdp", "k": 2},
        "setup": {"kind": "panmictic_ssga"},
        "repetitions": 5,
        "budget": 50_000,
        "mode": "virtual",
        "master_seed": 100,
    }
    data.update(overrides)
    path.write_text(yaml.safe_dump(data))
    return path


class TestRun:
    def test_writes_one_record_per_repetition(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "exp.yaml")
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_records(out / "records.csv")
        assert len(rows) == 5
        assert [r.seed for r in rows] == [100, 101, 102, 103, 104]
        assert sorted(p.name for p in (out / "traces").iterdir()) == [
            f"rep{i:04d}.trace" for i in range(5)
        ]

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path / "exp.yaml", setup={"kind": "ethane_g"}, budget=20_000)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--config", str(cfg), "--out", str(out_a)]) == 0
        assert main(["run", "--config", str(cfg), "--out", str(out_b)]) == 0
        assert (out_a / "records.csv").read_bytes() == (out_b / "records.csv").read_bytes()
        for trace in sorted((out_a / "traces").iterdir()):
            assert trace.read_bytes() == (out_b / "traces" / trace.name).read_bytes()

    def test_flags_override_config(self, tmp_path):
        cfg = write_config(tmp_path / "exp.yaml")
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out), "--reps", "2", "--seed", "7"]) == 0
        rows = read_records(out / "records.csv")
        assert [r.seed for r in rows] == [7, 8]

    def test_bad_config_names_field(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "exp.yaml", problem={"kind": "mmdp"})  # k missing
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "problem.k" in capsys.readouterr().err

    def test_unknown_setup_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "exp.yaml", setup={"kind": "mesh"})
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "setup.kind" in capsys.readouterr().err

    def test_ssp_instance_dumped(self, tmp_path):
        cfg = write_config(
            tmp_path / "exp.yaml",
            problem={"kind": "ssp", "n": 16, "seed": 11},
            repetitions=2,
            budget=20_000,
        )
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / "instance.txt").exists()

    def test_ring_and_custom_setups(self, tmp_path):
        out = tmp_path / "ring"
        cfg = write_config(
            tmp_path / "ring.yaml",
            setup={"kind": "ring", "n": 4, "fast_positions": [0]},
            repetitions=2,
            budget=20_000,
        )
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        cfg2 = write_config(
            tmp_path / "custom.yaml",
            setup={"kind": "custom", "topology": str(REPO_ROOT / "topologies" / "ethane_s.topology")},
            repetitions=2,
            budget=20_000,
        )
        assert main(["run", "--config", str(cfg2), "--out", str(tmp_path / "custom")]) == 0

    def test_missing_custom_topology_is_config_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "exp.yaml", setup={"kind": "custom", "topology": "nope.yaml"})
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "setup.topology" in capsys.readouterr().err

    def test_panmictic_sa_setup(self, tmp_path):
        cfg = write_config(
            tmp_path / "exp.yaml",
            problem={"kind": "mmdp", "k": 1},
            setup={"kind": "panmictic_sa"},
            repetitions=3,
            budget=10_000,
        )
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        rows = read_records(out / "records.csv")
        assert all(r.success for r in rows)

    def test_exit_zero_even_with_failures(self, tmp_path):
        cfg = write_config(tmp_path / "exp.yaml", problem={"kind": "mmdp", "k": 6}, budget=200, repetitions=2)
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0


class TestReport:
    def make_records(self, tmp_path):
        cfg = write_config(tmp_path / "a.yaml", repetitions=4, budget=30_000)
        out_a = tmp_path / "alpha"
        main(["run", "--config", str(cfg), "--out", str(out_a)])
        cfg2 = write_config(tmp_path / "b.yaml", setup={"kind": "ethane_g"}, repetitions=4, budget=30_000)
        out_b = tmp_path / "beta"
        main(["run", "--config", str(cfg2), "--out", str(out_b)])
        a = tmp_path / "alpha.csv"
        b = tmp_path / "beta.csv"
        a.write_bytes((out_a / "records.csv").read_bytes())
        b.write_bytes((out_b / "records.csv").read_bytes())
        return a, b

    def test_single_file_summary_matches_hand_means(self, tmp_path, capsys):
        path = tmp_path / "r.csv"
        path.write_text(
            "seed,evaluations,elapsed_ms,best,success\n"
            "1,10,1.0,5.0,1\n2,20,2.0,5.0,1\n3,30,3.0,5.0,1\n4,40,4.0,5.0,1\n5,50,5.0,4.0,0\n"
        )
        assert main(["report", str(path)]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert "speedup" not in lines[0]
        cells = lines[1].split(",")
        assert cells[0] == "r"
        assert float(cells[3]) == 0.8  # 4 of 5 solved
        assert float(cells[4]) == 25.0  # mean evals over the 4 successes
        assert float(cells[6]) == 2.5  # mean time over the 4 successes

    def test_two_files_add_pairwise_pvalues(self, tmp_path, capsys):
        a, b = self.make_records(tmp_path)
        capsys.readouterr()  # discard run-command output
        assert main(["report", str(a), str(b)]) == 0
        out = capsys.readouterr().out
        header = out.splitlines()[0].split(",")
        assert "p_vs_alpha" in header and "p_vs_beta" in header

    def test_sequential_reference_adds_speedup(self, tmp_path, capsys):
        a, b = self.make_records(tmp_path)
        capsys.readouterr()  # discard run-command output
        assert main(["report", str(b), "--sequential", str(a)]) == 0
        out = capsys.readouterr().out
        header = out.splitlines()[0].split(",")
        assert header[-1] == "speedup"

    def test_malformed_record_is_input_error(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("seed,evaluations,elapsed_ms,best,success\n1,2\n")
        assert main(["report", str(path)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_written_report(self, tmp_path):
        a, b = self.make_records(tmp_path)
        out = tmp_path / "report.csv"
        assert main(["report", str(a), str(b), "--out", str(out)]) == 0
        assert out.read_text().startswith("algorithm,")


class TestValidateTopology:
    def test_shipped_ethane_files_valid(self, capsys):
        for name in ("ethane_g.topology", "ethane_s.topology", "ring8.topology"):
            path = REPO_ROOT / "topologies" / name
            assert main(["validate-topology", str(path)]) == 0
            assert "valid" in capsys.readouterr().out

    def test_pentavalent_carbon_rejected(self, tmp_path, capsys):
        doc = {
            "nodes": [{"id": "C0", "atom": "carbon", "algorithm": "ssga"}]
            + [{"id": f"H{i}", "atom": "hydrogen", "algorithm": "sa"} for i in range(5)],
            "bonds": [{"a": "C0", "b": f"H{i}"} for i in range(5)],
        }
        path = tmp_path / "penta.topology"
        path.write_text(yaml.safe_dump(doc))
        assert main(["validate-topology", str(path)]) == 1
        out = capsys.readouterr().out
        assert out.count("\n") == 1 and "C0" in out

    def test_disconnected_rejected(self, tmp_path, capsys):
        doc = {
            "nodes": [
                {"id": "C0", "atom": "carbon", "algorithm": "ssga"},
                {"id": "H0", "atom": "hydrogen", "algorithm": "sa"},
                {"id": "C1", "atom": "carbon", "algorithm": "ssga"},
                {"id": "H1", "atom": "hydrogen", "algorithm": "sa"},
            ],
            "bonds": [{"a": "C0", "b": "H0"}, {"a": "C1", "b": "H1"}],
        }
        path = tmp_path / "disc.topology"
        path.write_text(yaml.safe_dump(doc))
        assert main(["validate-topology", str(path)]) == 1
        assert "disconnected" in capsys.readouterr().out

    def test_parse_failure_is_input_error(self, tmp_path):
        path = tmp_path / "broken.topology"
        path.write_text("nodes: [{id: C0")
        assert main(["validate-topology", str(path)]) == 2

    def test_missing_file_is_input_error(self, tmp_path):
        assert main(["validate-topology", str(tmp_path / "missing.topology")]) == 2
