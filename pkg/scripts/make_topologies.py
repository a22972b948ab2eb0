#!/usr/bin/env python3
"""Regenerate the shipped topology files in topologies/."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hydrocm.topology import ethane_topology, ring_topology, save_topology

out = Path(__file__).resolve().parent.parent / "topologies"
out.mkdir(exist_ok=True)
save_topology(ethane_topology("G"), out / "ethane_g.topology")
save_topology(ethane_topology("S"), out / "ethane_s.topology")
save_topology(ring_topology(8, [0, 3]), out / "ring8.topology")
print(f"wrote {out}/ethane_g.topology, ethane_s.topology, ring8.topology")
