import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vertexplace.objective import CoverSolution, brute_force_mvc, is_valid_cover
from vertexplace.solvers import (
    GaConfig, approx_cover, decode, decode_batch, decode_prefix_length, genetic_cover, greedy_cover,
    order_crossover, swap_mutation,
)
from vertexplace.topology import Topology, TopologySpec, generate

SMALL_GA = GaConfig(population=30, generations=30)
FAMILY_KW = {"er": dict(p=0.2), "sw": dict(k=2, p=0.5), "ba": dict(m=1)}


def complete(n):
    return Topology.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def test_approx_single_edge():
    assert len(approx_cover(Topology.from_edges(2, [(0, 1)]), 0)) == 2


def test_approx_path_takes_both_endpoints_of_first_edge(path3):
    for seed in range(10):
        c = approx_cover(path3, seed)
        assert sorted(c.members) in ([0, 1], [1, 2])


def test_approx_empty_graph():
    assert approx_cover(Topology.from_edges(4, []), 0).members == ()


def test_greedy_examples(path3, star4):
    assert greedy_cover(path3).members == (1,)
    assert greedy_cover(star4).members == (0,)


def test_greedy_degree_ignores_seed():
    t = generate(TopologySpec("er", 40, p=0.2, seed=2))
    assert greedy_cover(t, seed=1) == greedy_cover(t, seed=1).__class__(
        greedy_cover(t, seed=99).members, "greedy-degree", 1)


def test_greedy_edge_pair_adds_pairs(path3):
    c = greedy_cover(path3, "edge-pair", 3)
    assert len(c) == 2 and is_valid_cover(path3, c)


def test_greedy_rejects_unknown_variant(path3):
    with pytest.raises(ValueError):
        greedy_cover(path3, "bogus")


def test_ga_path_finds_optimum_every_seed(path3):
    for seed in range(20):
        assert genetic_cover(path3, seed=seed).members == (1,)


def test_ga_complete_graph():
    assert len(genetic_cover(complete(4), seed=0)) == 3


def test_ga_defaults():
    cfg = GaConfig()
    assert (cfg.population, cfg.generations, cfg.mutation_rate) == (100, 150, 0.1)


@pytest.mark.parametrize("kw", [dict(population=1), dict(mutation_rate=1.5)])
def test_ga_config_validation(kw):
    with pytest.raises(ValueError):
        GaConfig(**kw)


@pytest.mark.parametrize("family", sorted(FAMILY_KW))
@pytest.mark.parametrize("n", [16, 64])
def test_all_solvers_valid(family, n):
    for seed in range(20):
        t = generate(TopologySpec(family, n, seed=seed, **FAMILY_KW[family]))
        for c in (approx_cover(t, seed), greedy_cover(t), greedy_cover(t, "edge-pair", seed)):
            assert is_valid_cover(t, c)
        if seed < 3:
            assert is_valid_cover(t, genetic_cover(t, SMALL_GA, seed=seed))


def _small_graphs(count):
    rng = np.random.default_rng(77)
    families = ["er", "sw", "ba"]
    for i in range(count):
        family = families[i % 3]
        n = int(rng.integers(5, 15))
        kw = {"er": dict(p=float(rng.uniform(0.1, 0.7))),
              "sw": dict(k=int(rng.integers(1, (n - 1) // 2 + 1)), p=0.5),
              "ba": dict(m=int(rng.integers(1, n)))}[family]
        yield generate(TopologySpec(family, n, seed=int(rng.integers(2**32)), **kw))


def test_two_approximation_bound():
    for i, t in enumerate(_small_graphs(200)):
        opt = len(brute_force_mvc(t))
        for seed in range(3):
            assert len(approx_cover(t, seed + i)) <= 2 * opt


def test_no_solver_beats_oracle():
    for i, t in enumerate(_small_graphs(30)):
        opt = len(brute_force_mvc(t))
        assert len(greedy_cover(t)) >= opt
        assert len(genetic_cover(t, SMALL_GA, seed=i)) >= opt


@given(st.sampled_from(sorted(FAMILY_KW)), st.integers(6, 60), st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_approx_size_is_even_and_disjoint_pairs(family, n, seed):
    t = generate(TopologySpec(family, n, seed=seed, **FAMILY_KW[family]))
    c = approx_cover(t, seed)
    assert len(c) % 2 == 0
    pairs = list(zip(c.members[0::2], c.members[1::2]))
    assert all(t.edge_id(a, b) is not None for a, b in pairs)


def _is_minimal(t, members):
    for v in members:
        rest = CoverSolution(tuple(x for x in members if x != v))
        if is_valid_cover(t, rest):
            return False
    return True


def test_decode_yields_minimal_cover():
    rng = np.random.default_rng(3)
    for seed in range(30):
        t = generate(TopologySpec("er", 20, p=0.3, seed=seed))
        perm = rng.permutation(t.n)
        mask = decode(perm, t)
        members = tuple(np.flatnonzero(mask))
        assert is_valid_cover(t, CoverSolution(members))
        assert _is_minimal(t, members)
        # everything kept comes from the covering prefix
        assert set(members) <= set(perm[:decode_prefix_length(perm, t)].tolist())


def test_decode_prefix_drops_last_vertex_breaks_cover():
    rng = np.random.default_rng(4)
    for seed in range(30):
        t = generate(TopologySpec("ba", 20, m=2, seed=seed))
        perm = rng.permutation(t.n)
        L = decode_prefix_length(perm, t)
        assert is_valid_cover(t, CoverSolution(perm[:L]))
        assert not is_valid_cover(t, CoverSolution(perm[:L - 1]))


def test_ga_result_is_minimal():
    for seed in range(3):
        t = generate(TopologySpec("sw", 30, k=4, p=0.5, seed=seed))
        c = genetic_cover(t, SMALL_GA, seed=seed)
        assert _is_minimal(t, c.members)


@given(st.integers(1, 40), st.integers(0, 2**32))
@settings(max_examples=100, deadline=None)
def test_order_crossover_yields_permutation(n, seed):
    rng = np.random.default_rng(seed)
    p1, p2 = rng.permutation(n), rng.permutation(n)
    child = order_crossover(p1, p2, rng)
    assert sorted(child.tolist()) == list(range(n))


def test_order_crossover_keeps_slice_and_donor_order():
    p1 = np.arange(8)
    p2 = np.arange(8)[::-1].copy()
    rng = np.random.default_rng(0)
    for _ in range(20):
        child = order_crossover(p1, p2, rng)
        # genes outside the copied slice appear in p2's cyclic order
        from_p1 = [i for i in range(8) if child[i] == p1[i]]
        rest = [g for i, g in enumerate(child.tolist()) if i not in from_p1]
        pos = {g: i for i, g in enumerate(p2.tolist())}
        ranks = [pos[g] for g in rest]
        breaks = sum(1 for a, b in zip(ranks, ranks[1:]) if b < a)
        assert breaks <= 1


def test_swap_mutation_preserves_genes():
    rng = np.random.default_rng(0)
    perm = np.arange(50)
    swap_mutation(perm, 0.5, rng)
    assert sorted(perm.tolist()) == list(range(50))
    fixed = np.arange(50)
    swap_mutation(fixed, 0.0, rng)
    assert fixed.tolist() == list(range(50))


def test_solvers_deterministic():
    t = generate(TopologySpec("ba", 40, m=3, seed=12))
    assert approx_cover(t, 5) == approx_cover(t, 5)
    assert greedy_cover(t, "edge-pair", 5) == greedy_cover(t, "edge-pair", 5)
    assert genetic_cover(t, SMALL_GA, seed=5) == genetic_cover(t, SMALL_GA, seed=5)


def reference_decode(perm, t):
    """Shortest covering prefix, then drop redundant prefix vertices from last to first."""
    chosen = []
    covered = set()
    for v in perm.tolist():
        if len(covered) == t.num_edges:
            break
        chosen.append(v)
        covered |= {e for e, (a, b) in enumerate(t.edges) if v in (a, b)}
    cover = set(chosen)
    for v in reversed(chosen):
        if all(w in cover for w in t.neighbors[v]):
            cover.discard(v)
    return cover


def test_batch_decode_matches_reference():
    rng = np.random.default_rng(11)
    for seed in range(10):
        t = generate(TopologySpec("ba", 25, m=2, seed=seed))
        pop = np.stack([rng.permutation(t.n) for _ in range(12)])
        for row, mask in zip(pop, decode_batch(pop, t)):
            assert set(np.flatnonzero(mask).tolist()) == reference_decode(row, t)
