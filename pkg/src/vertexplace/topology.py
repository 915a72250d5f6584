"""Random network topologies annotated with edge-network attributes.

Three families are supported: Erdos-Renyi G(n, p), small-world ring lattices
with random shortcuts (Newman-Watts, or Watts-Strogatz rewiring on request),
and Barabasi-Albert preferential attachment.

All randomness flows through ``numpy.random.Generator`` backed by PCG64
(``numpy.random.default_rng``), so a given seed yields the same edge list on
every platform numpy supports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

ETHERNET = "Ethernet"
WIFI = "WiFi"
ADAPTER_CAPACITY = {ETHERNET: 100.0, WIFI: 25.0}  # MB/s

FAMILIES = ("er", "sw", "ba")


class TopologyError(ValueError):
    pass


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Topology:
    """Immutable undirected graph with per-edge bandwidth and per-node attributes.

    Edges are stored once with ``u < v``. ``capacity`` and ``usage`` are in
    MB/s; the bandwidth a transfer can use is ``capacity - usage``.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    capacity: np.ndarray
    usage: np.ndarray
    adapter: tuple[str, ...]
    holds_replica: np.ndarray
    storage_cost: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise TopologyError("vertex count must be non-negative")
        u = np.asarray(self.u, dtype=np.int64).reshape(-1)
        v = np.asarray(self.v, dtype=np.int64).reshape(-1)
        m = u.size
        if v.size != m:
            raise TopologyError("edge endpoint arrays differ in length")
        capacity = np.asarray(self.capacity, dtype=float).reshape(-1)
        usage = np.asarray(self.usage, dtype=float).reshape(-1)
        if capacity.size != m or usage.size != m:
            raise TopologyError("edge attribute arrays differ in length")
        if m and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise TopologyError("dangling vertex id")
        if np.any(u == v):
            raise TopologyError("self-loop")
        if np.any(u > v):
            raise TopologyError("edges must be stored with u < v")
        if m and np.unique(u * max(n, 1) + v).size != m:
            raise TopologyError("duplicate edge")
        if np.any(usage < 0) or np.any(usage > capacity):
            raise TopologyError("edge usage must lie in [0, capacity]")
        adapter = tuple(self.adapter)
        if len(adapter) != n or any(a not in ADAPTER_CAPACITY for a in adapter):
            raise TopologyError("adapter must be Ethernet or WiFi for every node")
        holds = np.asarray(self.holds_replica, dtype=bool).reshape(-1)
        cost = np.asarray(self.storage_cost, dtype=float).reshape(-1)
        if holds.size != n or cost.size != n:
            raise TopologyError("node attribute arrays must have length n")
        for name, val in (
            ("n", n), ("u", _readonly(u.copy())), ("v", _readonly(v.copy())),
            ("capacity", _readonly(capacity.copy())), ("usage", _readonly(usage.copy())),
            ("adapter", adapter), ("holds_replica", _readonly(holds.copy())),
            ("storage_cost", _readonly(cost.copy())),
        ):
            object.__setattr__(self, name, val)

    @classmethod
    def from_edges(cls, n, edges, capacity=100.0, usage=0.0, adapter=ETHERNET,
                   storage_cost=1.0) -> "Topology":
        """Build a topology from ``(u, v)`` pairs in any orientation.

        Scalar attributes broadcast to every edge or node.
        """
        pairs = [(min(a, b), max(a, b)) for a, b in edges]
        m = len(pairs)
        # per-edge attributes follow their edge through the sort
        order = sorted(range(m), key=pairs.__getitem__)
        u = np.array([pairs[i][0] for i in order], dtype=np.int64)
        v = np.array([pairs[i][1] for i in order], dtype=np.int64)
        cap = np.broadcast_to(np.asarray(capacity, dtype=float), (m,))[order].copy()
        use = np.broadcast_to(np.asarray(usage, dtype=float), (m,))[order].copy()
        if isinstance(adapter, str):
            adapter = (adapter,) * n
        return cls(
            n=n, u=u, v=v, capacity=cap, usage=use, adapter=tuple(adapter),
            holds_replica=np.zeros(n, dtype=bool),
            storage_cost=np.broadcast_to(np.asarray(storage_cost, dtype=float), (n,)).copy(),
        )

    @property
    def num_edges(self) -> int:
        return int(self.u.size)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.u.tolist(), self.v.tolist()))

    @property
    def available(self) -> np.ndarray:
        """Bandwidth left on each edge once current usage is subtracted."""
        return self.capacity - self.usage

    @cached_property
    def degree(self) -> np.ndarray:
        return _readonly(np.bincount(np.concatenate([self.u, self.v]), minlength=self.n))

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in zip(self.u.tolist(), self.v.tolist()):
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_id(self, a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        try:
            return self.edge_index[key]
        except KeyError:
            raise TopologyError(f"no edge between {a} and {b}") from None

    def __eq__(self, other):
        if not isinstance(other, Topology):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.capacity, other.capacity)
            and np.array_equal(self.usage, other.usage)
            and self.adapter == other.adapter
            and np.array_equal(self.holds_replica, other.holds_replica)
            and np.array_equal(self.storage_cost, other.storage_cost)
        )

    __hash__ = None

    def with_replicas(self, members) -> "Topology":
        """Copy with ``holds_replica`` set exactly for ``members``."""
        holds = np.zeros(self.n, dtype=bool)
        holds[list(members)] = True
        return Topology(self.n, self.u, self.v, self.capacity, self.usage,
                        self.adapter, holds, self.storage_cost)

    def __repr__(self):
        return f"Topology(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True)
class TopologySpec:
    """Recipe for one random topology: family, size, family parameters, seed."""

    family: str
    n: int
    p: float | None = None
    k: int | None = None
    m: int | None = None
    seed: int = 0
    wifi_ratio: float = 0.75

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise TopologyError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise TopologyError("n must be >= 1")
        if self.family in ("er", "sw"):
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise TopologyError("p must lie in [0, 1]")
        if self.family == "sw" and (self.k is None or not 1 <= self.k < self.n / 2):
            raise TopologyError("small-world needs 1 <= k < n/2")
        if self.family == "ba" and (self.m is None or not 1 <= self.m < self.n):
            raise TopologyError("Barabasi-Albert needs 1 <= m < n")
        if not 0.0 <= self.wifi_ratio <= 1.0:
            raise TopologyError("wifi_ratio must lie in [0, 1]")
        if self.seed < 0 or self.seed >= 2**64:
            raise TopologyError("seed must be an unsigned 64-bit integer")

    @property
    def param_label(self) -> str:
        if self.family == "er":
            return f"p={self.p:g}"
        if self.family == "sw":
            return f"k={self.k} p={self.p:g}"
        return f"m={self.m}"

    def with_seed(self, seed: int) -> "TopologySpec":
        return TopologySpec(self.family, self.n, self.p, self.k, self.m, seed, self.wifi_ratio)

    def with_n(self, n: int) -> "TopologySpec":
        return TopologySpec(self.family, n, self.p, self.k, self.m, self.seed, self.wifi_ratio)


def parse_param_label(family: str, label: str) -> dict:
    """Inverse of :attr:`TopologySpec.param_label`."""
    out = {}
    for tok in label.split():
        key, _, val = tok.partition("=")
        out[key] = float(val) if key == "p" else int(val)
    return out


def _bare(n: int, pairs) -> Topology:
    return Topology.from_edges(n, pairs)


def generate_erdos_renyi(n: int, p: float, seed: int) -> Topology:
    """G(n, p): every unordered pair present independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise TopologyError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return _bare(n, zip(iu[keep].tolist(), iv[keep].tolist()))


def _ring_lattice(n: int, k: int) -> list[tuple[int, int]]:
    half = k // 2
    return [(i, (i + j) % n) for j in range(1, half + 1) for i in range(n)]


def generate_small_world(n: int, k: int, p: float, seed: int, rewire: bool = False) -> Topology:
    """Ring lattice with ``k // 2`` neighbours per side plus random shortcuts.

    By default each lattice edge spawns, with probability ``p``, an extra edge
    from its first endpoint to a uniformly chosen non-adjacent vertex
    (Newman-Watts). With ``rewire=True`` the lattice edge is instead moved to
    that vertex (Watts-Strogatz), which keeps the edge count fixed.
    """
    if not 1 <= k < n / 2:
        raise TopologyError("small-world needs 1 <= k < n/2")
    if not 0.0 <= p <= 1.0:
        raise TopologyError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    lattice = _ring_lattice(n, k)
    adj = [set() for _ in range(n)]
    for a, b in lattice:
        adj[a].add(b)
        adj[b].add(a)
    for a, b in lattice:
        if rng.random() >= p:
            continue
        if len(adj[a]) >= n - 1:
            continue
        w = int(rng.integers(n))
        while w == a or w in adj[a]:
            w = int(rng.integers(n))
        if rewire:
            if b not in adj[a]:
                continue
            adj[a].discard(b)
            adj[b].discard(a)
        adj[a].add(w)
        adj[w].add(a)
    pairs = {(min(a, b), max(a, b)) for a in range(n) for b in adj[a]}
    return _bare(n, pairs)


def generate_barabasi_albert(n: int, m: int, seed: int) -> Topology:
    """Preferential attachment growth from ``m`` seed vertices; ``m * (n - m)`` edges."""
    if not 1 <= m < n:
        raise TopologyError("Barabasi-Albert needs 1 <= m < n")
    rng = np.random.default_rng(seed)
    pairs = []
    targets = list(range(m))
    # every endpoint occurrence is one entry, so uniform draws are degree-proportional
    pool: list[int] = []
    for src in range(m, n):
        pairs.extend((t, src) for t in targets)
        pool.extend(targets)
        pool.extend([src] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(pool[int(rng.integers(len(pool)))])
        targets = sorted(chosen)
    return _bare(n, pairs)


def assign_adapters(t: Topology, wifi_ratio: float, seed: int) -> Topology:
    """Mark ``floor(wifi_ratio * n)`` uniformly chosen nodes WiFi, the rest Ethernet.

    Edge capacity becomes the smaller of the two endpoint adapter capacities.
    Usage is clipped so it never exceeds the new capacity.
    """
    if not 0.0 <= wifi_ratio <= 1.0:
        raise TopologyError("wifi_ratio must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    n_wifi = int(np.floor(wifi_ratio * t.n + 1e-9))
    wifi = np.zeros(t.n, dtype=bool)
    wifi[rng.permutation(t.n)[:n_wifi]] = True
    adapter = tuple(WIFI if w else ETHERNET for w in wifi)
    node_cap = np.where(wifi, ADAPTER_CAPACITY[WIFI], ADAPTER_CAPACITY[ETHERNET])
    cap = np.minimum(node_cap[t.u], node_cap[t.v]) if t.num_edges else np.zeros(0)
    usage = np.minimum(t.usage, cap)
    return Topology(t.n, t.u, t.v, cap, usage, adapter, t.holds_replica, t.storage_cost)


def generate(spec: TopologySpec) -> Topology:
    """Generate the graph for ``spec`` and assign adapters.

    The adapter draw uses a stream derived from ``spec.seed`` so the graph
    structure does not depend on ``wifi_ratio``.
    """
    if spec.family == "er":
        t = generate_erdos_renyi(spec.n, spec.p, spec.seed)
    elif spec.family == "sw":
        t = generate_small_world(spec.n, spec.k, spec.p, spec.seed)
    else:
        t = generate_barabasi_albert(spec.n, spec.m, spec.seed)
    adapter_seed = np.random.SeedSequence([spec.seed, 0xAD]).generate_state(1, np.uint64)[0]
    return assign_adapters(t, spec.wifi_ratio, int(adapter_seed))


# -- serialization -----------------------------------------------------------

def to_dict(t: Topology) -> dict:
    return {
        "n": t.n,
        "nodes": [
            {"id": i, "adapter": t.adapter[i], "holds_replica": bool(t.holds_replica[i]),
             "storage_cost": float(t.storage_cost[i])}
            for i in range(t.n)
        ],
        "edges": [
            {"u": int(a), "v": int(b), "capacity_mbps": float(c), "usage_mbps": float(w)}
            for a, b, c, w in zip(t.u, t.v, t.capacity, t.usage)
        ],
    }


def from_dict(doc: dict) -> Topology:
    try:
        n = doc["n"]
        nodes = doc["nodes"]
        edges = doc["edges"]
    except (KeyError, TypeError) as exc:
        raise TopologyError(f"malformed graph document: missing {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise TopologyError("malformed graph document: n must be a non-negative integer")
    if len(nodes) != n:
        raise TopologyError("malformed graph document: node list length differs from n")
    by_id = {}
    for nd in nodes:
        i = nd.get("id")
        if not isinstance(i, int) or not 0 <= i < n:
            raise TopologyError("dangling vertex id")
        if i in by_id:
            raise TopologyError(f"duplicate node id {i}")
        by_id[i] = nd
    try:
        adapter = tuple(by_id[i].get("adapter", ETHERNET) for i in range(n))
        holds = [bool(by_id[i].get("holds_replica", False)) for i in range(n)]
        cost = [float(by_id[i].get("storage_cost", 1.0)) for i in range(n)]
        rows = sorted(
            (min(e["u"], e["v"]), max(e["u"], e["v"]),
             float(e["capacity_mbps"]), float(e.get("usage_mbps", 0.0)))
            for e in edges
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TopologyError(f"malformed graph document: {exc}") from None
    for a, b, _, _ in rows:
        if not (isinstance(a, int) and isinstance(b, int)) or a < 0 or b >= n:
            raise TopologyError("dangling vertex id")
    return Topology(
        n=n,
        u=np.array([r[0] for r in rows], dtype=np.int64),
        v=np.array([r[1] for r in rows], dtype=np.int64),
        capacity=np.array([r[2] for r in rows], dtype=float),
        usage=np.array([r[3] for r in rows], dtype=float),
        adapter=adapter, holds_replica=np.array(holds, dtype=bool),
        storage_cost=np.array(cost, dtype=float),
    )


def serialize(t: Topology) -> str:
    return json.dumps(to_dict(t), indent=1)


def deserialize(text: str) -> Topology:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TopologyError(f"malformed graph document: {exc}") from None
    if not isinstance(doc, dict):
        raise TopologyError("malformed graph document: expected a JSON object")
    return from_dict(doc)
