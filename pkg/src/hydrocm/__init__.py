"""hydrocm: hydrocarbon-shaped heterogeneous island metaheuristics.

Steady-state GA and simulated annealing islands wired by molecule-like
topologies (carbon hubs, hydrogen leaves), with asynchronous migration,
deterministic heterogeneous-speed emulation, benchmark problems, and a
statistics harness.
"""

from .engine import RunConfig, run_experiment
from .ga import GaParams, run_panmictic_ssga
from .problems import MmdpInstance, SubsetSumInstance, generate_ssp_instance
from .records import RunResult
from .sa import SaParams, run_panmictic_sa
from .topology import TopologySpec, ethane_topology, ring_topology

__all__ = [
    "GaParams",
    "MmdpInstance",
    "RunConfig",
    "RunResult",
    "SaParams",
    "SubsetSumInstance",
    "TopologySpec",
    "ethane_topology",
    "generate_ssp_instance",
    "ring_topology",
    "run_experiment",
    "run_panmictic_sa",
    "run_panmictic_ssga",
]
