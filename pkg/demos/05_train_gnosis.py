"""Train the GNN actor-critic on small random graphs and decode covers with it.

Run: python3 demos/05_train_gnosis.py   (about a minute)
"""

import numpy as np

from vertexplace import gnosis
from vertexplace.solvers import approx_cover, greedy_cover
from vertexplace.topology import Topology, TopologySpec, generate

# on a 3-vertex path the centre covers both edges; the policy learns to pick it first
path = Topology.from_edges(3, [(0, 1), (1, 2)])
p = gnosis.train(path, gnosis.TrainConfig(episodes=300, seed=0))
print("path 0-1-2: policy at the empty cover", np.round(gnosis.policy(p, gnosis.MvcState(path)), 3))
print("decoded cover:", gnosis.infer_cover(p, path).members)

# hand-written backprop against central differences
small = generate(TopologySpec("er", 8, p=0.5, seed=3))
print("\ngradient check:", gnosis.gradient_check(gnosis.init_params(8, 2, seed=1), small))

# a fresh small-world graph every episode; return = alpha - |cover|
spec = TopologySpec("sw", 32, k=2, p=0.5)
cfg = gnosis.TrainConfig(episodes=600, seed=0)
returns: list[float] = []
model = gnosis.train(spec, cfg, returns)
r = np.asarray(returns)
print(f"\nmean return per 100 episodes: {np.round(r.reshape(-1, 100).mean(axis=1), 2)}")

for seed in range(3):
    t = generate(TopologySpec("sw", 64, k=2, p=0.5, seed=100 + seed))
    print(f"SW(64) seed {100 + seed}: gnosis {len(gnosis.infer_cover(model, t))}, "
          f"greedy {len(greedy_cover(t))}, approx {len(approx_cover(t, seed))}")
