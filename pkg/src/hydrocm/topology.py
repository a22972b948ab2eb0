"""Hydrocarbon-shaped migration topologies.

Nodes are atoms (carbon = fast hub with valence 4, hydrogen = slow leaf
with valence 1), bonds are communication links whose multiplicity sets
the migration batch size. Classic unidirectional rings are supported as
a separate kind that bypasses valence rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

CARBON = "carbon"
HYDROGEN = "hydrogen"
VALENCE = {CARBON: 4, HYDROGEN: 1}

SSGA = "ssga"
SA = "sa"
ALGORITHMS = (SSGA, SA)

KIND_HYDROCARBON = "hydrocarbon"
KIND_RING = "ring"

#: Default speed emulation factor for the slow node class, roughly the
#: single-core gap between the fast and slow hardware tiers it stands for.
DEFAULT_SLOW_FACTOR = 0.35


class TopologyValidationError(ValueError):
    """Raised when channels are compiled from an invalid topology."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class NodeSpec:
    id: str
    atom: str
    algorithm: str
    speed_factor: float = 1.0

    def __post_init__(self):
        if self.atom not in VALENCE:
            raise ValueError(f"unknown atom {self.atom!r}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.speed_factor <= 0:
            raise ValueError(f"speed_factor must be positive, got {self.speed_factor}")


@dataclass(frozen=True)
class BondSpec:
    """Communication link between two distinct nodes.

    For hydrocarbon topologies the pair is unordered; ring topologies
    interpret (a, b) as the direction of flow.
    """

    a: str
    b: str
    multiplicity: int = 1

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"bond endpoints must differ, got {self.a!r} twice")
        if self.multiplicity not in (1, 2, 3):
            raise ValueError(f"multiplicity must be 1, 2 or 3, got {self.multiplicity}")

    @property
    def pair(self) -> frozenset:
        return frozenset((self.a, self.b))


@dataclass(frozen=True)
class TopologySpec:
    nodes: tuple[NodeSpec, ...]
    bonds: tuple[BondSpec, ...]
    kind: str = KIND_HYDROCARBON

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        if self.kind not in (KIND_HYDROCARBON, KIND_RING):
            raise ValueError(f"unknown topology kind {self.kind!r}")
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("node ids must be unique")

    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def node(self, node_id: str) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def bond_degree(self) -> dict[str, int]:
        """Total bond multiplicity per node id."""
        deg = {n.id: 0 for n in self.nodes}
        for b in self.bonds:
            if b.a in deg:
                deg[b.a] += b.multiplicity
            if b.b in deg:
                deg[b.b] += b.multiplicity
        return deg


@dataclass(frozen=True)
class ChannelSpec:
    src: str
    dst: str
    batch_size: int


@dataclass(frozen=True)
class ChannelPlan:
    channels: tuple[ChannelSpec, ...]

    def outgoing(self, node_id: str) -> list[ChannelSpec]:
        return [c for c in self.channels if c.src == node_id]

    def incoming(self, node_id: str) -> list[ChannelSpec]:
        return [c for c in self.channels if c.dst == node_id]


def ethane_topology(variant: str, slow_factor: float = DEFAULT_SLOW_FACTOR) -> TopologySpec:
    """Two bonded carbon hubs, each carrying three hydrogen leaves.

    Variant "G" puts ssGA on the carbons and SA on the hydrogens;
    variant "S" swaps the assignment. Carbons run at speed 1.0,
    hydrogens at `slow_factor`.
    """
    v = variant.upper()
    if v not in ("G", "S"):
        raise ValueError(f"variant must be 'G' or 'S', got {variant!r}")
    hub_alg, leaf_alg = (SSGA, SA) if v == "G" else (SA, SSGA)
    nodes = [
        NodeSpec("C0", CARBON, hub_alg, 1.0),
        NodeSpec("C1", CARBON, hub_alg, 1.0),
    ]
    nodes += [NodeSpec(f"H{i}", HYDROGEN, leaf_alg, slow_factor) for i in range(6)]
    bonds = [BondSpec("C0", "C1")]
    bonds += [BondSpec("C0", f"H{i}") for i in range(3)]
    bonds += [BondSpec("C1", f"H{i}") for i in range(3, 6)]
    return TopologySpec(tuple(nodes), tuple(bonds), KIND_HYDROCARBON)


def ring_topology(
    n: int,
    fast_positions,
    slow_factor: float = DEFAULT_SLOW_FACTOR,
    algorithm: str = SSGA,
) -> TopologySpec:
    """Unidirectional ring of `n` islands; nodes listed in `fast_positions`
    run at speed 1.0, the rest at `slow_factor`.

    Bonds are stored in cycle order and compiled one directed channel
    each; valence rules do not apply to rings.
    """
    if n < 2:
        raise ValueError(f"ring needs at least 2 nodes, got {n}")
    fast = set(fast_positions)
    bad = [p for p in fast if not 0 <= p < n]
    if bad:
        raise ValueError(f"fast_positions out of range [0,{n}): {sorted(bad)}")
    nodes = tuple(
        NodeSpec(
            f"N{i}",
            CARBON if i in fast else HYDROGEN,
            algorithm,
            1.0 if i in fast else slow_factor,
        )
        for i in range(n)
    )
    bonds = tuple(BondSpec(f"N{i}", f"N{(i + 1) % n}") for i in range(n))
    return TopologySpec(nodes, bonds, KIND_RING)


def _connected_components(spec: TopologySpec) -> list[set[str]]:
    ids = set(spec.node_ids())
    adj: dict[str, set[str]] = {i: set() for i in ids}
    for b in spec.bonds:
        if b.a in ids and b.b in ids:
            adj[b.a].add(b.b)
            adj[b.b].add(b.a)
    seen: set[str] = set()
    components = []
    for start in spec.node_ids():
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        seen |= comp
        components.append(comp)
    return components


def validate_hydrocarbon(spec: TopologySpec) -> list[str]:
    """All valence, duplicate-bond and connectivity violations, with node
    ids; an empty list means the spec is a valid hydrocarbon."""
    violations = []
    ids = set(spec.node_ids())
    for b in spec.bonds:
        for endpoint in (b.a, b.b):
            if endpoint not in ids:
                violations.append(f"bond {b.a}-{b.b} references unknown node {endpoint}")
    seen_pairs = set()
    for b in spec.bonds:
        if b.pair in seen_pairs:
            violations.append(f"duplicate bond between {b.a} and {b.b}")
        seen_pairs.add(b.pair)
    degree = spec.bond_degree()
    for node in spec.nodes:
        d = degree[node.id]
        if node.atom == HYDROGEN and d != 1:
            violations.append(f"hydrogen {node.id} has bond multiplicity {d}, expected exactly 1")
        elif node.atom == CARBON and d > VALENCE[CARBON]:
            violations.append(f"carbon {node.id} has bond multiplicity {d}, at most 4 allowed")
    components = _connected_components(spec)
    if len(components) > 1:
        for comp in components[1:]:
            violations.append(f"disconnected component: {sorted(comp)}")
    return violations


def _validate_ring(spec: TopologySpec) -> list[str]:
    """Structural checks for ring kind: the directed bonds must form one
    cycle covering every node."""
    violations = []
    ids = spec.node_ids()
    succ: dict[str, str] = {}
    for b in spec.bonds:
        if b.a not in set(ids) or b.b not in set(ids):
            violations.append(f"bond {b.a}-{b.b} references unknown node")
            continue
        if b.a in succ:
            violations.append(f"node {b.a} has more than one outgoing ring bond")
        succ[b.a] = b.b
    missing = [i for i in ids if i not in succ]
    if missing:
        violations.append(f"nodes without outgoing ring bond: {missing}")
    if violations:
        return violations
    cursor = ids[0]
    visited = []
    for _ in range(len(ids)):
        visited.append(cursor)
        cursor = succ[cursor]
    if cursor != ids[0] or len(set(visited)) != len(ids):
        violations.append("ring bonds do not form a single cycle over all nodes")
    return violations


def validate_topology(spec: TopologySpec) -> list[str]:
    """Kind-aware validation: hydrocarbon rules, or ring structure for
    ring kind (which bypasses valence)."""
    if spec.kind == KIND_RING:
        return _validate_ring(spec)
    return validate_hydrocarbon(spec)


def compile_channels(spec: TopologySpec) -> ChannelPlan:
    """Directed migration channels: two opposite channels per hydrocarbon
    bond, one per ring bond; batch_size equals the bond multiplicity."""
    violations = validate_topology(spec)
    if violations:
        raise TopologyValidationError(violations)
    channels = []
    for b in spec.bonds:
        channels.append(ChannelSpec(b.a, b.b, b.multiplicity))
        if spec.kind != KIND_RING:
            channels.append(ChannelSpec(b.b, b.a, b.multiplicity))
    return ChannelPlan(tuple(channels))


def random_hydrocarbon(
    rng,
    max_carbons: int = 6,
    variant: str = "G",
    slow_factor: float = DEFAULT_SLOW_FACTOR,
    p_multi: float = 0.3,
) -> TopologySpec:
    """Random valid hydrocarbon: a carbon tree with optional double/triple
    bonds, hydrogens filling every remaining valence slot."""
    hub_alg, leaf_alg = (SSGA, SA) if variant.upper() == "G" else (SA, SSGA)
    n_carbons = int(rng.integers(1, max_carbons + 1))
    free = {f"C{i}": VALENCE[CARBON] for i in range(n_carbons)}
    bonds: list[list] = []
    for i in range(1, n_carbons):
        candidates = [f"C{j}" for j in range(i) if free[f"C{j}"] >= 1]
        parent = candidates[int(rng.integers(0, len(candidates)))]
        bonds.append([parent, f"C{i}", 1])
        free[parent] -= 1
        free[f"C{i}"] -= 1
    for bond in bonds:
        while bond[2] < 3 and free[bond[0]] >= 1 and free[bond[1]] >= 1 and rng.random() < p_multi:
            bond[2] += 1
            free[bond[0]] -= 1
            free[bond[1]] -= 1
    nodes = [NodeSpec(f"C{i}", CARBON, hub_alg, 1.0) for i in range(n_carbons)]
    h = 0
    hydrogen_bonds = []
    for cid in sorted(free):
        for _ in range(free[cid]):
            nodes.append(NodeSpec(f"H{h}", HYDROGEN, leaf_alg, slow_factor))
            hydrogen_bonds.append(BondSpec(cid, f"H{h}"))
            h += 1
    all_bonds = [BondSpec(a, b, m) for a, b, m in bonds] + hydrogen_bonds
    return TopologySpec(tuple(nodes), tuple(all_bonds), KIND_HYDROCARBON)


def topology_to_dict(spec: TopologySpec) -> dict:
    return {
        "kind": spec.kind,
        "nodes": [
            {
                "id": n.id,
                "atom": n.atom,
                "algorithm": n.algorithm,
                "speed_factor": n.speed_factor,
            }
            for n in spec.nodes
        ],
        "bonds": [{"a": b.a, "b": b.b, "multiplicity": b.multiplicity} for b in spec.bonds],
    }


def topology_from_dict(data: dict) -> TopologySpec:
    if not isinstance(data, dict):
        raise ValueError("topology document must be a mapping")
    for key in ("nodes", "bonds"):
        if key not in data:
            raise ValueError(f"topology document missing {key!r}")
    nodes = tuple(
        NodeSpec(
            id=str(n["id"]),
            atom=n.get("atom", CARBON),
            algorithm=n.get("algorithm", SSGA),
            speed_factor=float(n.get("speed_factor", 1.0)),
        )
        for n in data["nodes"]
    )
    bonds = tuple(
        BondSpec(a=str(b["a"]), b=str(b["b"]), multiplicity=int(b.get("multiplicity", 1)))
        for b in data["bonds"]
    )
    return TopologySpec(nodes, bonds, data.get("kind", KIND_HYDROCARBON))


def save_topology(spec: TopologySpec, path) -> None:
    Path(path).write_text(yaml.safe_dump(topology_to_dict(spec), sort_keys=False))


def load_topology(path) -> TopologySpec:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise ValueError(f"{path}: not valid topology YAML: {exc}") from None
    try:
        return topology_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: {exc}") from None
