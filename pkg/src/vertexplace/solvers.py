"""Classical minimum-vertex-cover heuristics: 2-approximation, greedy, genetic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objective import DEFAULT_IMAGE_MB, CostModel, CoverSolution
from .topology import Topology

DEGREE = "degree"
EDGE_PAIR = "edge-pair"
GREEDY_VARIANTS = (DEGREE, EDGE_PAIR)


def approx_cover(t: Topology, seed: int = 0) -> CoverSolution:
    """Maximal-matching 2-approximation.

    Repeatedly take a uniformly random uncovered edge and add both endpoints.
    Scanning a random permutation of the edges and taking each edge that is
    still uncovered draws the same distribution in one pass.
    """
    rng = np.random.default_rng(seed)
    order = rng.permutation(t.num_edges)
    u = t.u[order].tolist()
    v = t.v[order].tolist()
    taken = bytearray(t.n)
    members = []
    for a, b in zip(u, v):
        if taken[a] or taken[b]:
            continue
        taken[a] = taken[b] = 1
        members += (a, b)
    return CoverSolution(tuple(members), "approx", seed)


def _greedy_degree(t: Topology) -> list[int]:
    deg = t.degree.astype(np.int64).copy()
    adj = t.neighbors
    in_cover = np.zeros(t.n, dtype=bool)
    remaining = t.num_edges
    members = []
    while remaining > 0:
        best = int(np.argmax(deg))
        members.append(best)
        in_cover[best] = True
        remaining -= int(deg[best])
        deg[best] = 0
        for w in adj[best]:
            if not in_cover[w]:
                deg[w] -= 1
    return members


def _greedy_edge_pair(t: Topology, seed: int) -> list[int]:
    rng = np.random.default_rng(seed)
    u, v = t.u, t.v
    in_cover = np.zeros(t.n, dtype=bool)
    members = []
    while True:
        open_edges = np.flatnonzero(~(in_cover[u] | in_cover[v]))
        if open_edges.size == 0:
            return members
        e = open_edges[rng.integers(open_edges.size)]
        a, b = int(u[e]), int(v[e])
        in_cover[a] = in_cover[b] = True
        members += (a, b)


def greedy_cover(t: Topology, variant: str = DEGREE, seed: int = 0) -> CoverSolution:
    """Greedy cover.

    ``"degree"`` adds the vertex touching the most uncovered edges (lowest id
    on ties) until none remain; it ignores ``seed``. ``"edge-pair"`` adds both
    endpoints of a seed-chosen uncovered edge per step.
    """
    if variant == DEGREE:
        members = _greedy_degree(t)
    elif variant == EDGE_PAIR:
        members = _greedy_edge_pair(t, seed)
    else:
        raise ValueError(f"unknown greedy variant {variant!r}")
    return CoverSolution(tuple(members), f"greedy-{variant}", seed)


@dataclass(frozen=True)
class GaConfig:
    population: int = 100
    generations: int = 150
    mutation_rate: float = 0.1
    selection: str = "roulette"
    crossover: str = "ox"
    elitism: int = 1

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.selection != "roulette" or self.crossover != "ox":
            raise ValueError("only roulette selection with order crossover is implemented")
        if not 0 <= self.elitism < self.population:
            raise ValueError("elitism must be smaller than the population")


def _positions(pop: np.ndarray) -> np.ndarray:
    pos = np.empty_like(pop)
    pos[np.arange(pop.shape[0])[:, None], pop] = np.arange(pop.shape[1])
    return pos


def decode_prefix_length(perm: np.ndarray, t: Topology) -> int:
    """Length of the shortest prefix of ``perm`` that covers every edge.

    An edge is covered by the prefix of length L exactly when its earlier
    endpoint sits at a position below L.
    """
    if t.num_edges == 0:
        return 0
    pos = _positions(perm[None, :])[0]
    return int(np.max(np.minimum(pos[t.u], pos[t.v]))) + 1


def _adjacency(t: Topology) -> np.ndarray:
    A = np.zeros((t.n, t.n), dtype=np.int32)
    A[t.u, t.v] = 1
    A[t.v, t.u] = 1
    return A


def decode_batch(pop: np.ndarray, t: Topology, adjacency: np.ndarray | None = None) -> np.ndarray:
    """Cover masks for a ``(P, n)`` array of chromosomes; see :func:`decode`."""
    P, n = pop.shape
    if t.num_edges == 0:
        return np.zeros((P, n), dtype=bool)
    A = _adjacency(t) if adjacency is None else adjacency
    pos = _positions(pop)
    size = np.max(np.minimum(pos[:, t.u], pos[:, t.v]), axis=1) + 1
    mask = pos < size[:, None]
    # outside[r, v]: neighbours of v not in cover r; v is redundant while it is 0.
    # Counts only grow as vertices are dropped, so one reverse sweep suffices.
    outside = (~mask).astype(np.int32) @ A
    for k in range(int(size.max()) - 1, -1, -1):
        v = pop[:, k]
        rows = np.flatnonzero((k < size) & (outside[np.arange(P), v] == 0))
        if rows.size:
            mask[rows, v[rows]] = False
            outside[rows] += A[v[rows]]
    return mask


def decode(perm: np.ndarray, t: Topology) -> np.ndarray:
    """Cover mask for a chromosome: shortest covering prefix, then redundancy pruning.

    Prefix vertices are revisited from last to first and dropped when every
    neighbour is already in the cover, so the result is a minimal cover.
    """
    return decode_batch(np.asarray(perm)[None, :], t)[0]


def order_crossover_batch(p1: np.ndarray, p2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """OX on rows: copy a random slice of each ``p1`` row, fill the rest in ``p2``'s cyclic order."""
    P, n = p1.shape
    if n < 2:
        return p1.copy()
    cuts = np.sort(rng.random((P, n + 1)).argsort(axis=1)[:, :2], axis=1)
    i, j = cuts[:, :1], cuts[:, 1:]
    rows = np.arange(P)[:, None]
    idx = np.arange(n)[None, :]
    in_slice = (idx >= i) & (idx < j)
    child = np.where(in_slice, p1, -1)
    taken = np.zeros((P, n), dtype=bool)
    taken[rows, p1] = in_slice
    # donor genes in p2 order starting after the slice, minus those already copied
    donor = p2[rows, (idx + j) % n]
    keep = ~taken[rows, donor]
    # free slots in the same cyclic order
    free = idx < (n - (j - i))
    slots = (idx + j) % n
    child[np.broadcast_to(rows, (P, n))[free], slots[free]] = donor[keep]
    return child


def order_crossover(p1: np.ndarray, p2: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """OX: copy a random slice of ``p1`` in place, fill the rest in ``p2``'s order."""
    return order_crossover_batch(p1[None, :], p2[None, :], rng)[0]


def swap_mutation_batch(pop: np.ndarray, rate: float, rng: np.random.Generator) -> None:
    """Each gene, with probability ``rate``, swaps places with a uniform random gene of its row."""
    P, n = pop.shape
    hits = rng.random((P, n)) < rate
    partners = rng.integers(n, size=(P, n))
    for k in np.flatnonzero(hits.any(axis=0)).tolist():
        rows = np.flatnonzero(hits[:, k])
        other = partners[rows, k]
        a = pop[rows, k].copy()
        pop[rows, k] = pop[rows, other]
        pop[rows, other] = a


def swap_mutation(perm: np.ndarray, rate: float, rng: np.random.Generator) -> None:
    """Each gene, with probability ``rate``, swaps places with a uniform random gene."""
    view = perm[None, :]
    swap_mutation_batch(view, rate, rng)


def genetic_cover(t: Topology, cfg: GaConfig | None = None,
                  image_size: float = DEFAULT_IMAGE_MB, seed: int = 0) -> CoverSolution:
    """Permutation-encoded genetic search over minimal covers.

    Each chromosome is a vertex permutation decoded by :func:`decode`.
    Fitness is ``1 / (1 + |S| + cf / (1 + cf))``: cover size decides, and the
    placement cost only breaks ties between covers of equal size.
    """
    cfg = cfg or GaConfig()
    rng = np.random.default_rng(seed)
    n = t.n
    if n == 0 or t.num_edges == 0:
        return CoverSolution((), "genetic", seed)
    model = CostModel(t, image_size)
    A = _adjacency(t)

    def fitness(pop):
        masks = decode_batch(pop, t, A)
        cf = model.cf_batch(masks)
        tie = np.where(np.isinf(cf), 1.0, cf / (1.0 + cf))
        return 1.0 / (1.0 + masks.sum(axis=1) + tie)

    pop = np.stack([rng.permutation(n) for _ in range(cfg.population)])
    fit = fitness(pop)
    n_children = cfg.population - cfg.elitism
    for _ in range(cfg.generations):
        elite = np.argsort(-fit, kind="stable")[: cfg.elitism]
        parents = rng.choice(cfg.population, size=(n_children, 2), p=fit / fit.sum())
        children = order_crossover_batch(pop[parents[:, 0]], pop[parents[:, 1]], rng)
        swap_mutation_batch(children, cfg.mutation_rate, rng)
        pop = np.concatenate([pop[elite], children])
        fit = np.concatenate([fit[elite], fitness(children)])
    best = pop[int(np.argmax(fit))]
    mask = decode(best, t)
    return CoverSolution(tuple(v for v in best.tolist() if mask[v]), "genetic", seed)
