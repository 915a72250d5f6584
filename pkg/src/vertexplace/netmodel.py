"""Transfer-time arithmetic and max-min fair bandwidth sharing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .topology import Topology, TopologyError


class NoUsableLink(ValueError):
    pass


def transfer_time(image_size: float, bandwidth: float) -> float:
    """Seconds to push ``image_size`` MB over a ``bandwidth`` MB/s link."""
    if not bandwidth > 0:
        raise NoUsableLink("no usable link")
    return image_size / bandwidth


def feasible_within(image_size: float, bandwidth: float, threshold: float) -> bool:
    """True when the transfer finishes strictly before ``threshold`` seconds."""
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if not bandwidth > 0:
        return False
    return image_size / bandwidth < threshold


@dataclass
class Flow:
    src: int
    dst: int
    path: list[tuple[int, int]]
    rate: float = 0.0


@dataclass
class Allocation:
    rates: list[float]
    residual: dict[tuple[int, int], float] = field(default_factory=dict)


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def maxmin_allocate(t: Topology, flows: list[Flow], tol: float = 1e-12) -> Allocation:
    """Progressive filling over the edges the flows traverse.

    All active flows rise at the same speed; whenever an edge runs out of
    room every flow crossing it is frozen. Rates are written back onto the
    ``Flow`` objects as well as returned.
    """
    avail = t.available
    cap: dict[tuple[int, int], float] = {}
    routes = []
    for f in flows:
        route = []
        for a, b in f.path:
            e = _key(a, b)
            cap.setdefault(e, float(avail[t.edge_id(*e)]))
            route.append(e)
        routes.append(route)

    edges = list(cap)
    col = {e: j for j, e in enumerate(edges)}
    inc = np.zeros((len(flows), len(edges)))
    for i, route in enumerate(routes):
        for e in route:
            inc[i, col[e]] += 1.0
    residual = np.array([cap[e] for e in edges])
    rate = np.zeros(len(flows))
    # flows with an empty path are unconstrained by the network; leave them at 0
    active = inc.sum(axis=1) > 0

    while active.any():
        load = inc[active].sum(axis=0)
        used = load > 0
        step = np.min(residual[used] / load[used])
        step = max(step, 0.0)
        rate[active] += step
        residual -= step * load
        saturated = used & (residual <= tol * np.maximum(1.0, np.array([cap[e] for e in edges])))
        residual[saturated] = 0.0
        frozen = (inc[:, saturated] > 0).any(axis=1)
        active &= ~frozen

    for f, r in zip(flows, rate):
        f.rate = float(r)
    return Allocation(rates=rate.tolist(), residual=dict(zip(edges, residual.tolist())))


def best_provider(t: Topology, d: int, in_cover) -> tuple[int, int] | None:
    """Cover neighbour of ``d`` with the most available bandwidth, lowest id on ties.

    Returns ``(provider, edge_id)`` or ``None`` when ``d`` has no cover neighbour.
    """
    avail = t.available
    best = None
    best_bw = -math.inf
    for w in t.neighbors[d]:
        if not in_cover[w]:
            continue
        eid = t.edge_id(d, w)
        bw = avail[eid]
        if bw > best_bw:
            best, best_bw = (w, eid), bw
    return best


def simulate_distribution(t: Topology, cover, image_size: float) -> dict[int, float]:
    """Per-destination delivery time when every destination fetches at once.

    Each vertex outside the cover pulls the image from its best cover
    neighbour over the direct link; rates come from :func:`maxmin_allocate`.
    Destinations without a cover neighbour, or whose link has no bandwidth
    left, map to ``inf``. Isolated vertices have no link to fetch over and are
    not destinations.
    """
    members = getattr(cover, "members", cover)
    in_cover = np.zeros(t.n, dtype=bool)
    in_cover[list(members)] = True
    flows, dests, out = [], [], {}
    for d in range(t.n):
        if in_cover[d] or t.degree[d] == 0:
            continue
        pick = best_provider(t, d, in_cover)
        if pick is None:
            out[d] = math.inf
            continue
        flows.append(Flow(src=pick[0], dst=d, path=[_key(pick[0], d)]))
        dests.append(d)
    if flows:
        maxmin_allocate(t, flows)
    for d, f in zip(dests, flows):
        out[d] = image_size / f.rate if f.rate > 0 else math.inf
    return dict(sorted(out.items()))


__all__ = [
    "Allocation", "Flow", "NoUsableLink", "TopologyError", "best_provider",
    "feasible_within", "maxmin_allocate", "simulate_distribution", "transfer_time",
]
