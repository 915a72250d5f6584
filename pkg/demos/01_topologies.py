"""Generate one graph from each random family and look at its network annotation.

Run: python3 demos/01_topologies.py
"""

import numpy as np

from vertexplace.topology import ETHERNET, WIFI, TopologySpec, deserialize, generate, serialize

specs = [
    TopologySpec("er", 64, p=0.2, seed=1),
    TopologySpec("sw", 64, k=2, p=0.5, seed=1),
    TopologySpec("ba", 64, m=3, seed=1),
]

for spec in specs:
    t = generate(spec)
    deg = t.degree
    print(f"{spec.family} {spec.param_label:>10}: {t.num_edges:4d} edges, "
          f"degree min/mean/max {deg.min()}/{deg.mean():.1f}/{deg.max()}")

# 3/4 of the nodes get a 25 MB/s WiFi adapter, the rest 100 MB/s Ethernet;
# a link runs at the slower of its two ends
t = generate(specs[0])
print(f"\nadapters: {t.adapter.count(WIFI)} WiFi, {t.adapter.count(ETHERNET)} Ethernet")
caps, counts = np.unique(t.capacity, return_counts=True)
for c, k in zip(caps, counts):
    print(f"  {k:4d} links at {c:5.1f} MB/s")

# same spec, same seed, same bytes
text = serialize(t)
assert serialize(generate(specs[0])) == text
assert deserialize(text) == t
print(f"\nJSON document: {len(text)} bytes, round-trips exactly")

# the small-world mean edge count: ring edges plus about p * n shortcuts
counts = [generate(TopologySpec("sw", 64, k=2, p=0.5, seed=s)).num_edges for s in range(500)]
print(f"SW(64, k=2, p=0.5) over 500 seeds: mean {np.mean(counts):.1f} edges (64 ring + ~32 shortcuts)")
