"""Scoring a replica set: validity, serviceability, placement cost, and the exact optimum.

Run: python3 demos/03_placement_cost.py
"""

from vertexplace.objective import (
    CoverSolution, brute_force_mvc, cost_function, is_serviceable, is_valid_cover, set_cover_cost,
)
from vertexplace.topology import Topology, TopologySpec, generate

# star with a fast centre and three WiFi leaves
t = Topology.from_edges(4, [(0, 1), (0, 2), (0, 3)], capacity=25.0)
for members in [(0,), (1, 2, 3), (0, 1, 2, 3)]:
    s = CoverSolution(members)
    cb = cost_function(t, s, image_size=100.0)
    print(f"S={members}: valid={is_valid_cover(t, s)}, cf = {cb.replica_count} + {cb.transfer_term:.1f} = {cb.cf:.1f}")

# a 4-cycle with a single replica leaves the far vertex with no neighbour to fetch from
c4 = Topology.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
cb = cost_function(c4, CoverSolution((0,)))
print(f"\n4-cycle, S={{0}}: serviceable={is_serviceable(c4, CoverSolution((0,)))}, "
      f"cf={cb.cf}, unreachable={cb.unreachable}")

# storage cost: image size times per-MB cost at each replica
print("storage cost of S={0,1}:", set_cover_cost(c4, CoverSolution((0, 1)), 100.0).total)

# exhaustive search is exact but only feasible on small graphs
t = generate(TopologySpec("er", 16, p=0.3, seed=2))
best = brute_force_mvc(t)
print(f"\nER(16, 0.3): minimum cover {best.members}, size {len(best)}, cf {cost_function(t, best).cf:.1f}")
