"""Replica placement on edge networks as minimum vertex cover.

Submodules: ``topology`` (graph generation and JSON I/O), ``netmodel``
(link bandwidth and max-min sharing), ``objective`` (cost function and
exact oracle), ``solvers`` (approximation, greedy, genetic), ``gnosis``
(GNN actor-critic policy) and ``bench`` (benchmark grid, CSV, plots).
"""

from .objective import CoverSolution, cost_function
from .topology import Topology, TopologySpec, generate

__all__ = ["CoverSolution", "Topology", "TopologySpec", "cost_function", "generate"]
__version__ = "0.1.0"
