"""Max-min fair bandwidth sharing and the delivery times it implies.

Run: python3 demos/02_fair_sharing.py
"""

from vertexplace.netmodel import Flow, maxmin_allocate, simulate_distribution, transfer_time
from vertexplace.objective import CoverSolution
from vertexplace.topology import Topology, TopologySpec, generate

print(f"100 MB over Ethernet: {transfer_time(100, 100):.1f} s, over WiFi: {transfer_time(100, 25):.1f} s")

# two links out of vertex 0: e1 = (0,1) at 30 MB/s, e2 = (0,2) at 10 MB/s.
# A uses e1 only, B crosses both. B is capped by e2, A takes what is left of e1.
t = Topology.from_edges(3, [(0, 1), (0, 2)], capacity=[30.0, 10.0])
a = Flow(1, 0, [(0, 1)])
b = Flow(1, 2, [(0, 1), (0, 2)])
alloc = maxmin_allocate(t, [a, b])
print(f"\nA = {a.rate:.0f} MB/s, B = {b.rate:.0f} MB/s, residual {alloc.residual}")

# four flows on one link split it evenly
t = Topology.from_edges(2, [(0, 1)])
print("4 flows on one 100 MB/s link:", maxmin_allocate(t, [Flow(0, 1, [(0, 1)]) for _ in range(4)]).rates)

# every vertex outside the replica set fetches from its best neighbour at once
t = generate(TopologySpec("ba", 20, m=1, seed=4))
hubs = CoverSolution(tuple(v for v in range(t.n) if t.degree[v] > 1))
leaves = simulate_distribution(t, hubs, 100.0)
print(f"\nBA tree, {len(hubs)} replicas on non-leaf vertices:")
for d, secs in leaves.items():
    print(f"  vertex {d:2d} receives the image in {secs:.1f} s")
