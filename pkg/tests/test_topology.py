import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hydrocm.topology import (
    BondSpec,
    NodeSpec,
    TopologySpec,
    TopologyValidationError,
    compile_channels,
    ethane_topology,
    load_topology,
    random_hydrocarbon,
    ring_topology,
    save_topology,
    validate_hydrocarbon,
    validate_topology,
)


def methane():
    nodes = [NodeSpec("C0", "carbon", "ssga", 1.0)]
    nodes += [NodeSpec(f"H{i}", "hydrogen", "sa", 0.35) for i in range(4)]
    bonds = [BondSpec("C0", f"H{i}") for i in range(4)]
    return TopologySpec(tuple(nodes), tuple(bonds))


class TestEthane:
    def test_structure(self):
        spec = ethane_topology("G")
        assert len(spec.nodes) == 8
        assert len(spec.bonds) == 7
        degree = spec.bond_degree()
        assert degree["C0"] == 4 and degree["C1"] == 4
        assert all(degree[f"H{i}"] == 1 for i in range(6))

    def test_variant_g_assignment(self):
        spec = ethane_topology("G")
        assert {n.algorithm for n in spec.nodes if n.atom == "carbon"} == {"ssga"}
        assert {n.algorithm for n in spec.nodes if n.atom == "hydrogen"} == {"sa"}

    def test_variant_s_swaps_algorithms(self):
        g = ethane_topology("G")
        s = ethane_topology("S")
        assert [b.pair for b in g.bonds] == [b.pair for b in s.bonds]
        assert {n.algorithm for n in s.nodes if n.atom == "carbon"} == {"sa"}
        assert {n.algorithm for n in s.nodes if n.atom == "hydrogen"} == {"ssga"}

    def test_speed_classes(self):
        spec = ethane_topology("G", slow_factor=0.5)
        assert all(n.speed_factor == 1.0 for n in spec.nodes if n.atom == "carbon")
        assert all(n.speed_factor == 0.5 for n in spec.nodes if n.atom == "hydrogen")

    def test_validates(self):
        assert validate_hydrocarbon(ethane_topology("G")) == []
        assert validate_hydrocarbon(ethane_topology("S")) == []

    def test_pure_constructor(self):
        assert ethane_topology("G") == ethane_topology("G")

    def test_rejects_unknown_variant(self):
        with pytest.raises(ValueError):
            ethane_topology("X")


class TestRing:
    def test_structure(self):
        spec = ring_topology(8, {0, 3})
        plan = compile_channels(spec)
        assert len(spec.nodes) == 8
        assert len(plan.channels) == 8
        out_degrees = {n.id: len(plan.outgoing(n.id)) for n in spec.nodes}
        assert set(out_degrees.values()) == {1}

    def test_fast_positions(self):
        spec = ring_topology(8, {0, 3})
        speeds = [n.speed_factor for n in spec.nodes]
        assert speeds[0] == 1.0 and speeds[3] == 1.0
        assert all(s < 1.0 for i, s in enumerate(speeds) if i not in (0, 3))

    def test_two_node_ring(self):
        plan = compile_channels(ring_topology(2, {0}))
        pairs = {(c.src, c.dst) for c in plan.channels}
        assert pairs == {("N0", "N1"), ("N1", "N0")}

    def test_all_nodes_reachable_within_n_minus_1_hops(self):
        spec = ring_topology(8, {0, 3})
        plan = compile_channels(spec)
        succ = {c.src: c.dst for c in plan.channels}
        reached = {"N0": 0}
        cursor = "N0"
        for hop in range(1, len(spec.nodes)):
            cursor = succ[cursor]
            reached.setdefault(cursor, hop)
        assert set(reached) == set(spec.node_ids())
        assert max(reached.values()) == len(spec.nodes) - 1

    def test_rejects_bad_positions(self):
        with pytest.raises(ValueError):
            ring_topology(4, {0, 4})

    def test_rejects_tiny_ring(self):
        with pytest.raises(ValueError):
            ring_topology(1, set())

    def test_ring_passes_kind_aware_validation(self):
        assert validate_topology(ring_topology(5, {0})) == []


class TestValidateHydrocarbon:
    def test_methane_valid(self):
        assert validate_hydrocarbon(methane()) == []

    def test_pentavalent_carbon(self):
        nodes = [NodeSpec("C0", "carbon", "ssga")]
        nodes += [NodeSpec(f"H{i}", "hydrogen", "sa") for i in range(5)]
        bonds = [BondSpec("C0", f"H{i}") for i in range(5)]
        violations = validate_hydrocarbon(TopologySpec(tuple(nodes), tuple(bonds)))
        assert len(violations) == 1
        assert "C0" in violations[0]

    def test_lonely_hydrogen(self):
        spec = TopologySpec(
            (NodeSpec("C0", "carbon", "ssga"), NodeSpec("H0", "hydrogen", "sa")), ()
        )
        violations = validate_hydrocarbon(spec)
        assert any("H0" in v for v in violations)

    def test_disconnected_molecules(self):
        a = ethane_topology("G")
        renamed = tuple(
            NodeSpec(n.id + "x", n.atom, n.algorithm, n.speed_factor) for n in a.nodes
        )
        rebonds = tuple(BondSpec(b.a + "x", b.b + "x", b.multiplicity) for b in a.bonds)
        combined = TopologySpec(a.nodes + renamed, a.bonds + rebonds)
        violations = validate_hydrocarbon(combined)
        assert any("disconnected" in v for v in violations)

    def test_duplicate_bond(self):
        nodes = (
            NodeSpec("C0", "carbon", "ssga"),
            NodeSpec("C1", "carbon", "ssga"),
            NodeSpec("H0", "hydrogen", "sa"),
            NodeSpec("H1", "hydrogen", "sa"),
        )
        bonds = (
            BondSpec("C0", "C1"),
            BondSpec("C1", "C0"),
            BondSpec("C0", "H0"),
            BondSpec("C1", "H1"),
        )
        violations = validate_hydrocarbon(TopologySpec(nodes, bonds))
        assert any("duplicate" in v for v in violations)

    def test_unknown_endpoint(self):
        spec = TopologySpec((NodeSpec("C0", "carbon", "ssga"),), (BondSpec("C0", "Z9"),))
        violations = validate_hydrocarbon(spec)
        assert any("Z9" in v for v in violations)


class TestCompileChannels:
    def test_ethane_channel_count(self):
        plan = compile_channels(ethane_topology("G"))
        assert len(plan.channels) == 14
        assert all(c.batch_size == 1 for c in plan.channels)

    def test_double_bond_batch(self):
        nodes = (
            NodeSpec("C0", "carbon", "ssga"),
            NodeSpec("C1", "carbon", "sa"),
            NodeSpec("H0", "hydrogen", "sa"),
            NodeSpec("H1", "hydrogen", "sa"),
            NodeSpec("H2", "hydrogen", "sa"),
            NodeSpec("H3", "hydrogen", "sa"),
        )
        bonds = (
            BondSpec("C0", "C1", multiplicity=2),
            BondSpec("C0", "H0"),
            BondSpec("C0", "H1"),
            BondSpec("C1", "H2"),
            BondSpec("C1", "H3"),
        )
        plan = compile_channels(TopologySpec(nodes, bonds))
        doubles = [c for c in plan.channels if c.batch_size == 2]
        assert {(c.src, c.dst) for c in doubles} == {("C0", "C1"), ("C1", "C0")}

    def test_ring_is_unidirectional(self):
        plan = compile_channels(ring_topology(8, {0, 3}))
        assert len(plan.channels) == 8
        pairs = {(c.src, c.dst) for c in plan.channels}
        assert all((dst, src) not in pairs for src, dst in pairs)

    def test_invalid_spec_raises_with_violations(self):
        spec = TopologySpec(
            (NodeSpec("H0", "hydrogen", "sa"), NodeSpec("H1", "hydrogen", "sa")), ()
        )
        with pytest.raises(TopologyValidationError) as err:
            compile_channels(spec)
        assert err.value.violations

    def test_symmetric_channels_for_hydrocarbons(self):
        plan = compile_channels(ethane_topology("S"))
        table = {(c.src, c.dst): c.batch_size for c in plan.channels}
        for (src, dst), batch in table.items():
            assert table[(dst, src)] == batch


class TestRandomHydrocarbon:
    @given(st.integers(0, 10_000))
    def test_always_valid(self, seed):
        spec = random_hydrocarbon(np.random.default_rng(seed))
        assert validate_hydrocarbon(spec) == []

    @given(st.integers(0, 10_000))
    def test_handshake_lemma(self, seed):
        spec = random_hydrocarbon(np.random.default_rng(seed), max_carbons=8)
        total_degree = sum(spec.bond_degree().values())
        assert total_degree == 2 * sum(b.multiplicity for b in spec.bonds)


class TestTopologyIO:
    def test_round_trip(self, tmp_path):
        spec = ethane_topology("G")
        path = tmp_path / "ethane.topology"
        save_topology(spec, path)
        assert load_topology(path) == spec

    def test_ring_round_trip(self, tmp_path):
        spec = ring_topology(5, {0, 2})
        path = tmp_path / "ring.topology"
        save_topology(spec, path)
        back = load_topology(path)
        assert back == spec
        assert back.kind == "ring"

    def test_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.topology"
        path.write_text("nodes: [")
        with pytest.raises(ValueError):
            load_topology(path)

    def test_rejects_missing_sections(self, tmp_path):
        path = tmp_path / "empty.topology"
        path.write_text("nodes: []\n")
        with pytest.raises(ValueError):
            load_topology(path)
