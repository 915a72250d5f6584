"""The three classical heuristics side by side on mid-sized graphs.

Run: python3 demos/04_classical_solvers.py
"""

import time

from vertexplace.objective import brute_force_mvc, cost_function, is_valid_cover
from vertexplace.solvers import GaConfig, approx_cover, genetic_cover, greedy_cover
from vertexplace.topology import TopologySpec, generate

solvers = {
    "approx": lambda t, s: approx_cover(t, s),
    "greedy": lambda t, s: greedy_cover(t, "degree", s),
    "greedy-edge-pair": lambda t, s: greedy_cover(t, "edge-pair", s),
    "genetic": lambda t, s: genetic_cover(t, GaConfig(), seed=s),
}

for spec in [TopologySpec("er", 64, p=0.2, seed=5), TopologySpec("sw", 64, k=2, p=0.5, seed=5),
             TopologySpec("ba", 64, m=1, seed=5)]:
    t = generate(spec)
    print(f"\n{spec.family} {spec.param_label} n={spec.n}, {t.num_edges} edges")
    for name, solve in solvers.items():
        start = time.perf_counter()
        cover = solve(t, 0)
        elapsed = time.perf_counter() - start
        assert is_valid_cover(t, cover)
        print(f"  {name:17s} VCS {len(cover):3d}  CF {cost_function(t, cover).cf:7.1f}  {elapsed * 1e3:8.2f} ms")

# the matching-based approximation never exceeds twice the optimum
t = generate(TopologySpec("er", 14, p=0.4, seed=9))
opt = len(brute_force_mvc(t))
sizes = [len(approx_cover(t, s)) for s in range(50)]
print(f"\nER(14, 0.4): optimum {opt}, approx sizes over 50 seeds {min(sizes)}..{max(sizes)} (bound {2 * opt})")
