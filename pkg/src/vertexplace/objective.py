"""Cover validity, placement cost, and an exhaustive minimum-vertex-cover oracle.

The placement cost of a replica set ``S`` is

    cf = |S| + sum over destinations d of  image_size / bandwidth(v*(d), d)

where the destinations are the non-isolated vertices outside ``S`` and
``v*(d)`` is the neighbour of ``d`` in ``S`` with the most available
bandwidth (lowest id on ties).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .topology import Topology

ORACLE_MAX_N = 24
DEFAULT_IMAGE_MB = 100.0


@dataclass(frozen=True)
class CoverSolution:
    members: tuple[int, ...]
    producer: str = ""
    seed: int = 0

    def __post_init__(self):
        members = tuple(int(x) for x in self.members)
        if len(set(members)) != len(members):
            raise ValueError("cover members must be distinct")
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def mask(self, n: int) -> np.ndarray:
        if any(not 0 <= x < n for x in self.members):
            raise ValueError("cover member outside 0..n-1")
        out = np.zeros(n, dtype=bool)
        out[list(self.members)] = True
        return out

    def to_json(self) -> str:
        return json.dumps({"members": list(self.members), "producer": self.producer,
                           "seed": self.seed})

    @classmethod
    def from_json(cls, text: str) -> "CoverSolution":
        doc = json.loads(text)
        try:
            return cls(tuple(doc["members"]), doc.get("producer", ""), int(doc.get("seed", 0)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed cover document: {exc}") from None


@dataclass
class CostBreakdown:
    replica_count: int
    transfer_term: float
    cf: float
    per_destination: dict[int, tuple[int | None, float]] = field(default_factory=dict)
    unreachable: list[int] = field(default_factory=list)


@dataclass
class SetCoverCost:
    total: float


def _as_mask(t: Topology, s) -> np.ndarray:
    if isinstance(s, CoverSolution):
        return s.mask(t.n)
    s = np.asarray(s)
    if s.dtype == bool and s.shape == (t.n,):
        return s
    return CoverSolution(tuple(s.tolist())).mask(t.n)


def is_valid_cover(t: Topology, s) -> bool:
    """Every edge has at least one endpoint in ``s``."""
    mask = _as_mask(t, s)
    return bool(np.all(mask[t.u] | mask[t.v]))


def is_serviceable(t: Topology, s) -> bool:
    """Every vertex outside ``s`` has a neighbour inside ``s``."""
    mask = _as_mask(t, s)
    served = mask.copy()
    served[t.v[mask[t.u]]] = True
    served[t.u[mask[t.v]]] = True
    return bool(served.all())


def cost_function(t: Topology, s, image_size: float = DEFAULT_IMAGE_MB) -> CostBreakdown:
    """Replica count plus summed per-destination transfer delay.

    A destination without a cover neighbour, or whose best link has no
    available bandwidth, makes ``cf`` infinite and is listed in
    ``unreachable``.
    """
    mask = _as_mask(t, s)
    avail = t.available
    per_dest: dict[int, tuple[int | None, float]] = {}
    unreachable = []
    delays = []
    for d in range(t.n):
        if mask[d] or t.degree[d] == 0:
            continue
        best, best_bw = None, -math.inf
        for w in t.neighbors[d]:
            if mask[w]:
                bw = avail[t.edge_id(d, w)]
                if bw > best_bw:
                    best, best_bw = w, bw
        if best is None or best_bw <= 0:
            per_dest[d] = (best, math.inf)
            unreachable.append(d)
            delays.append(math.inf)
        else:
            delay = image_size / float(best_bw)
            per_dest[d] = (best, delay)
            delays.append(delay)
    transfer = 0.0
    for x in delays:
        transfer += x
    replicas = int(mask.sum())
    return CostBreakdown(replicas, transfer, replicas + transfer, per_dest, unreachable)


class CostModel:
    """Vectorised cf evaluation for one topology, for search loops.

    Agrees with :func:`cost_function` up to floating-point summation order.
    """

    def __init__(self, t: Topology, image_size: float = DEFAULT_IMAGE_MB):
        self.t = t
        self.image_size = image_size
        # directed copies of every edge: (dest, provider, bandwidth)
        self.dst = np.concatenate([t.u, t.v])
        self.src = np.concatenate([t.v, t.u])
        self.bw = np.concatenate([t.available, t.available])
        self.has_edge = t.degree > 0

    def transfer_term(self, mask: np.ndarray) -> float:
        sel = mask[self.src] & ~mask[self.dst]
        best = np.full(self.t.n, -np.inf)
        np.maximum.at(best, self.dst[sel], self.bw[sel])
        dest = ~mask & self.has_edge
        bw = best[dest]
        if np.any(bw <= 0):
            return math.inf
        return float(np.sum(self.image_size / bw))

    def cf(self, mask: np.ndarray) -> float:
        return float(mask.sum()) + self.transfer_term(mask)

    def cf_batch(self, masks: np.ndarray) -> np.ndarray:
        """cf for each row of a ``(P, n)`` boolean array."""
        out = masks.sum(axis=1).astype(float)
        if self.dst.size == 0:
            return out
        order = np.argsort(self.dst, kind="stable")
        dst, src, bw = self.dst[order], self.src[order], self.bw[order]
        # best provider bandwidth per destination: max over each vertex's incoming links
        starts = np.flatnonzero(np.r_[True, dst[1:] != dst[:-1]])
        vals = np.where(masks[:, src] & ~masks[:, dst], bw, -np.inf)
        best = np.maximum.reduceat(vals, starts, axis=1)
        is_dest = ~masks[:, dst[starts]]
        unreachable = np.any(is_dest & (best <= 0), axis=1)
        out += np.where(is_dest, self.image_size / np.where(best > 0, best, 1.0), 0.0).sum(axis=1)
        out[unreachable] = np.inf
        return out


def set_cover_cost(t: Topology, s, image_size: float = DEFAULT_IMAGE_MB) -> SetCoverCost:
    """Storage cost of the replica set: sum of ``image_size * storage_cost[v]``."""
    mask = _as_mask(t, s)
    total = 0.0
    for v in np.flatnonzero(mask):
        total += image_size * float(t.storage_cost[v])
    return SetCoverCost(total)


def brute_force_mvc(t: Topology) -> CoverSolution:
    """Smallest vertex cover by exhaustive search (lexicographically first among ties)."""
    if t.n > ORACLE_MAX_N:
        raise ValueError("instance too large for oracle")
    edge_bits = [(1 << a) | (1 << b) for a, b in t.edges]
    for size in range(t.n + 1):
        for combo in itertools.combinations(range(t.n), size):
            bits = 0
            for x in combo:
                bits |= 1 << x
            if all(bits & e for e in edge_bits):
                return CoverSolution(combo, "brute_force", 0)
    raise AssertionError("unreachable: the full vertex set is always a cover")
