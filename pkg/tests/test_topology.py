import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vertexplace.topology import (
    ETHERNET, WIFI, Topology, TopologyError, TopologySpec, assign_adapters, deserialize,
    generate, generate_barabasi_albert, generate_erdos_renyi, generate_small_world,
    parse_param_label, serialize,
)


def test_er_edge_cases():
    assert generate_erdos_renyi(2, 0.0, 1).num_edges == 0
    assert generate_erdos_renyi(5, 1.0, 1).num_edges == 10
    assert generate_erdos_renyi(0, 0.5, 1).num_edges == 0


def test_er_rejects_bad_probability():
    with pytest.raises(TopologyError):
        generate_erdos_renyi(4, 1.5, 0)


def test_er_mean_edge_count_within_three_standard_errors():
    n, p = 32, 0.3
    pairs = n * (n - 1) // 2
    counts = np.array([generate_erdos_renyi(n, p, s).num_edges for s in range(1000)])
    se = np.sqrt(pairs * p * (1 - p)) / np.sqrt(counts.size)
    assert abs(counts.mean() - p * pairs) < 3 * se


def test_small_world_pure_ring():
    t = generate_small_world(64, 2, 0.0, 3)
    assert t.num_edges == 64
    assert set(t.degree.tolist()) == {2}


@pytest.mark.parametrize("k", [2, 3, 4, 6, 7])
def test_small_world_lattice_is_regular(k):
    t = generate_small_world(40, k, 0.0, 0)
    assert t.num_edges == 40 * (k // 2)
    assert set(t.degree.tolist()) == {2 * (k // 2)}


def test_small_world_shortcuts_only_add_edges():
    lattice = set(generate_small_world(64, 4, 0.0, 5).edges)
    shortcut = set(generate_small_world(64, 4, 0.5, 5).edges)
    assert lattice <= shortcut
    assert len(shortcut) > len(lattice)


def test_small_world_rewire_keeps_edge_count():
    t = generate_small_world(64, 4, 0.5, 9, rewire=True)
    assert t.num_edges == 128


def test_small_world_rejects_large_k():
    with pytest.raises(TopologyError):
        generate_small_world(10, 5, 0.5, 0)


@pytest.mark.parametrize("n,m,expected", [(64, 1, 63), (64, 3, 183), (2, 1, 1)])
def test_ba_edge_counts(n, m, expected):
    assert generate_barabasi_albert(n, m, 7).num_edges == expected


def test_ba_edge_count_identity_exhaustive():
    for n in range(2, 65):
        for m in range(1, n, max(1, n // 6)):
            assert generate_barabasi_albert(n, m, n * 31 + m).num_edges == m * (n - m)


def test_ba_rejects_m_ge_n():
    with pytest.raises(TopologyError):
        generate_barabasi_albert(4, 4, 0)


def test_ba_m1_is_a_tree():
    t = generate_barabasi_albert(64, 1, 2)
    # connected with n-1 edges
    seen, stack = {0}, [0]
    while stack:
        for w in t.neighbors[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    assert len(seen) == 64 and t.num_edges == 63


def test_adapter_split():
    t = assign_adapters(generate_erdos_renyi(64, 0.2, 1), 0.75, 4)
    assert t.adapter.count(WIFI) == 48
    assert t.adapter.count(ETHERNET) == 16


@pytest.mark.parametrize("ratio,cap", [(0.0, 100.0), (1.0, 25.0)])
def test_homogeneous_adapters(ratio, cap):
    t = assign_adapters(generate_erdos_renyi(30, 0.3, 1), ratio, 0)
    assert np.all(t.capacity == cap)


def test_edge_capacity_is_min_of_endpoints():
    t = assign_adapters(generate_erdos_renyi(40, 0.3, 2), 0.5, 3)
    node_cap = {ETHERNET: 100.0, WIFI: 25.0}
    for (a, b), c in zip(t.edges, t.capacity):
        assert c == min(node_cap[t.adapter[a]], node_cap[t.adapter[b]])


@given(st.integers(1, 30).map(lambda k: 4 * k), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_three_quarters_wifi_when_divisible_by_four(n, seed):
    t = assign_adapters(generate_erdos_renyi(n, 0.1, seed), 0.75, seed)
    assert t.adapter.count(WIFI) == 3 * n // 4


@given(st.sampled_from(["er", "sw", "ba"]), st.integers(8, 40), st.integers(0, 2**64 - 1))
@settings(max_examples=30, deadline=None)
def test_generation_is_deterministic(family, n, seed):
    kw = {"er": dict(p=0.3), "sw": dict(k=2, p=0.5), "ba": dict(m=2)}[family]
    spec = TopologySpec(family, n, seed=seed, **kw)
    a, b = generate(spec), generate(spec)
    assert a == b
    assert serialize(a) == serialize(b)


@given(st.sampled_from(["er", "sw", "ba"]), st.integers(6, 40), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_generated_topologies_satisfy_invariants(family, n, seed):
    kw = {"er": dict(p=0.4), "sw": dict(k=2, p=0.5), "ba": dict(m=2)}[family]
    t = generate(TopologySpec(family, n, seed=seed, **kw))
    assert np.all(t.u < t.v)
    assert len(set(t.edges)) == t.num_edges
    assert np.all((0 <= t.usage) & (t.usage <= t.capacity))
    assert set(t.capacity.tolist()) <= {25.0, 100.0}


def test_round_trip():
    t = Topology.from_edges(2, [(0, 1)], capacity=25.0)
    assert deserialize(serialize(t)) == t
    t = generate(TopologySpec("ba", 30, m=2, seed=11))
    assert deserialize(serialize(t)) == t


def test_empty_round_trip():
    t = Topology.from_edges(0, [])
    doc = json.loads(serialize(t))
    assert doc == {"n": 0, "nodes": [], "edges": []}
    assert deserialize(serialize(t)) == t


def _doc(n, edges):
    return json.dumps({
        "n": n,
        "nodes": [{"id": i, "adapter": "WiFi", "holds_replica": False, "storage_cost": 1.0}
                  for i in range(n)],
        "edges": [{"u": a, "v": b, "capacity_mbps": 25.0, "usage_mbps": 0.0} for a, b in edges],
    })


def test_dangling_vertex_rejected():
    with pytest.raises(TopologyError, match="dangling vertex id"):
        deserialize(_doc(3, [(0, 5)]))


def test_duplicate_edge_rejected():
    with pytest.raises(TopologyError, match="duplicate edge"):
        deserialize(_doc(3, [(0, 1), (1, 0)]))


@pytest.mark.parametrize("text", ["not json", "[]", '{"n": 2}', '{"n": -1, "nodes": [], "edges": []}'])
def test_malformed_documents_rejected(text):
    with pytest.raises(TopologyError):
        deserialize(text)


def test_topology_rejects_self_loop_and_bad_usage():
    with pytest.raises(TopologyError):
        Topology.from_edges(2, [(1, 1)])
    with pytest.raises(TopologyError):
        Topology.from_edges(2, [(0, 1)], capacity=25.0, usage=30.0)


def test_topology_is_immutable():
    t = Topology.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        t.capacity[0] = 1.0
    with pytest.raises(AttributeError):
        t.n = 4


@pytest.mark.parametrize("bad", [
    dict(family="xx", n=5), dict(family="er", n=0, p=0.1), dict(family="er", n=5, p=2.0),
    dict(family="sw", n=8, k=4, p=0.1), dict(family="ba", n=4, m=4),
])
def test_spec_validation(bad):
    with pytest.raises(TopologyError):
        TopologySpec(**bad)


@pytest.mark.parametrize("spec", [
    TopologySpec("er", 10, p=0.2), TopologySpec("sw", 10, k=4, p=0.5), TopologySpec("ba", 10, m=3),
])
def test_param_label_round_trip(spec):
    params = parse_param_label(spec.family, spec.param_label)
    assert TopologySpec(spec.family, spec.n, **params) == spec


def test_from_edges_keeps_per_edge_attributes_with_their_edge():
    t = Topology.from_edges(3, [(2, 1), (0, 1)], capacity=np.array([25.0, 100.0]))
    assert t.edges == [(0, 1), (1, 2)]
    assert t.capacity.tolist() == [100.0, 25.0]
