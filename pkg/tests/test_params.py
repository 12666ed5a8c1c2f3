import random

import pytest

from conftest import (
    atlas_graphs,
    brute_bandwidth,
    brute_col,
    brute_pathwidth,
    brute_treewidth,
)
from twinreduce.errors import TooLargeError
from twinreduce.graph import (
    Graph,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
)
from twinreduce import params
from twinreduce.params import (
    bandwidth_exact,
    bandwidth_heuristic,
    check_col_witness,
    check_ordering_bandwidth,
    clique_counts,
    col_s_exact,
    col_s_greedy,
    degeneracy,
    max_component_size,
    max_degree,
    pathwidth_exact,
    treewidth_exact,
)


def random_graph(n, p, rng):
    g = Graph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


# ---------------------------------------------------------------- bandwidth

def test_bandwidth_paths_and_cliques():
    assert bandwidth_exact(path_graph(9)).value == 1
    assert bandwidth_exact(complete_graph(7)).value == 6
    assert bandwidth_exact(Graph(5)).value == 0


def test_bandwidth_c4_matches_brute_force():
    g = cycle_graph(4)
    assert brute_bandwidth(g) == 2
    res = bandwidth_exact(g)
    assert res.value == 2
    assert check_ordering_bandwidth(g, res.witness) == 2


def test_bandwidth_exact_matches_brute_on_atlas():
    for g in atlas_graphs(max_n=5):
        res = bandwidth_exact(g)
        assert res.value == brute_bandwidth(g), g.edges()
        assert check_ordering_bandwidth(g, res.witness) == res.value


def test_bandwidth_exact_matches_brute_on_6_vertex_sample():
    graphs = atlas_graphs(min_n=6, max_n=6)
    for g in graphs[::7]:
        assert bandwidth_exact(g).value == brute_bandwidth(g)


def test_bandwidth_cap_exceeded():
    res = bandwidth_exact(complete_graph(8), cap=3)
    assert res.exceeds_cap and not res.exact
    assert res.value == 4  # proven lower bound


def test_bandwidth_cap_not_binding():
    res = bandwidth_exact(cycle_graph(6), cap=5)
    assert not res.exceeds_cap and res.exact
    assert res.value == 2


def test_bandwidth_too_large():
    with pytest.raises(TooLargeError):
        bandwidth_exact(path_graph(40))


def test_bandwidth_heuristic():
    assert bandwidth_heuristic(path_graph(12)).value == 1
    assert bandwidth_heuristic(Graph(4)).value == 0
    # 4x4 grid by column levels stays within 4
    g = Graph(16)
    for i in range(4):
        for j in range(4):
            if i < 3:
                g.add_edge(4 * i + j, 4 * (i + 1) + j)
            if j < 3:
                g.add_edge(4 * i + j, 4 * i + j + 1)
    res = bandwidth_heuristic(g)
    assert res.value <= 4
    assert check_ordering_bandwidth(g, res.witness) == res.value


def test_heuristic_at_least_exact():
    rng = random.Random(7)
    for _ in range(25):
        g = random_graph(rng.randint(2, 9), rng.random(), rng)
        h = bandwidth_heuristic(g).value
        e = bandwidth_exact(g).value
        assert h >= e


def test_heuristic_uses_seed_witness():
    g = path_graph(6)
    seed = [0, 1, 2, 3, 4, 5]
    res = bandwidth_heuristic(g, seed_witness=seed)
    assert res.value == 1


# ------------------------------------------------------------- easy params

def test_star_degree_component_degeneracy():
    g = star_graph(5)
    assert max_degree(g) == 5
    assert max_component_size(g) == 6
    assert degeneracy(g).value == 1


def test_cycle_degeneracy():
    assert degeneracy(cycle_graph(8)).value == 2


def test_degeneracy_witness_is_peeling_order():
    rng = random.Random(3)
    g = random_graph(9, 0.4, rng)
    res = degeneracy(g)
    placed = 0
    worst = 0
    for v in res.witness:
        worst = max(worst, len([u for u in g.neighbors(v) if not placed >> u & 1]))
        placed |= 1 << v
    assert worst == res.value


# ---------------------------------------------------------- pw / tw exact

def test_tree_treewidth_one():
    g = Graph(7, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (4, 6)])
    assert treewidth_exact(g).value == 1


def test_k4_tw_pw():
    assert treewidth_exact(complete_graph(4)).value == 3
    assert pathwidth_exact(complete_graph(4)).value == 3


def test_pw_tw_match_brute_on_atlas():
    for g in atlas_graphs(max_n=5):
        assert pathwidth_exact(g).value == brute_pathwidth(g), g.edges()
        assert treewidth_exact(g).value == brute_treewidth(g), g.edges()


def test_pw_tw_match_brute_on_6_vertex_sample():
    graphs = atlas_graphs(min_n=6, max_n=6)
    for g in graphs[::9]:
        assert pathwidth_exact(g).value == brute_pathwidth(g)
        assert treewidth_exact(g).value == brute_treewidth(g)


def test_tw_witness_validates():
    rng = random.Random(11)
    for _ in range(10):
        g = random_graph(rng.randint(2, 10), 0.45, rng)
        res = treewidth_exact(g)
        res.witness.validate(g)
        assert res.witness.width == res.value


def test_pw_witness_validates():
    rng = random.Random(12)
    for _ in range(10):
        g = random_graph(rng.randint(2, 10), 0.45, rng)
        res = pathwidth_exact(g)
        res.witness.validate(g)
        assert res.witness.width == res.value


def test_tw_simplicial_reduction_handles_larger_chordal_graphs():
    # 3-tree on 30 vertices, far beyond the DP cap, solved by reductions
    g = Graph(30)
    for u in range(3):
        for v in range(u + 1, 3):
            g.add_edge(u, v)
    for v in range(3, 30):
        for u in (v - 1, v - 2, v - 3):
            g.add_edge(v, u)
    res = treewidth_exact(g)
    assert res.value == 3
    res.witness.validate(g)


# --------------------------------------------------------------------- col

def test_col1_is_degeneracy_plus_one_on_c5():
    assert col_s_exact(cycle_graph(5), 1).value == 3


def test_col1_matches_degeneracy_plus_one_on_atlas():
    for g in atlas_graphs(max_n=5):
        if g.n == 0:
            continue
        assert col_s_exact(g, 1).value == degeneracy(g).value + 1


def test_col_path_is_two_for_all_s():
    for s in (1, 2, 5):
        assert col_s_exact(path_graph(7), s).value == 2
        assert col_s_greedy(path_graph(7), s).value == 2


def test_col_matches_brute():
    rng = random.Random(5)
    for _ in range(12):
        g = random_graph(rng.randint(2, 6), 0.5, rng)
        for s in (1, 2, 3):
            assert col_s_exact(g, s).value == brute_col(g, s), (g.edges(), s)


def test_col_greedy_upper_bounds_exact():
    rng = random.Random(6)
    for _ in range(15):
        g = random_graph(rng.randint(2, 8), 0.4, rng)
        for s in (1, 2):
            assert col_s_greedy(g, s).value >= col_s_exact(g, s).value


def test_col_witness_reach_validates():
    g = cycle_graph(6)
    res = col_s_exact(g, 2)
    assert check_col_witness(g, res.witness, 2) == res.value


# ------------------------------------------------------------ clique counts

def test_clique_counts_triangle():
    assert clique_counts(complete_graph(3)) == [1, 3, 3, 1]


def test_clique_counts_basics():
    rng = random.Random(9)
    g = random_graph(8, 0.5, rng)
    counts = clique_counts(g)
    assert counts[0] == 1
    assert counts[1] == g.n
    assert counts[2] == g.m


def test_clique_counts_ktree_total():
    # a k-tree on n vertices has 2^k (n-k+1) cliques in total
    for k, n in ((2, 7), (3, 8)):
        g = Graph(n)
        for u in range(k):
            for v in range(u + 1, k):
                g.add_edge(u, v)
        for v in range(k, n):
            for u in range(v - k, v):
                g.add_edge(v, u)
        assert sum(clique_counts(g)) == 2 ** k * (n - k + 1)


def test_clique_counts_cocktail_party():
    # complete multipartite with p classes of size 2 has 3^p cliques
    p = 4
    g = Graph(2 * p)
    for u in range(2 * p):
        for v in range(u + 1, 2 * p):
            if u // 2 != v // 2:
                g.add_edge(u, v)
    assert sum(clique_counts(g)) == 3 ** p


# ------------------------------------------------------------- invariants

def test_parameter_chain_invariants():
    rng = random.Random(1)
    for _ in range(30):
        g = random_graph(rng.randint(1, 8), rng.random(), rng)
        tw = treewidth_exact(g).value
        pw = pathwidth_exact(g).value
        bw = bandwidth_exact(g).value
        assert tw <= pw <= bw
        assert max_degree(g) <= 2 * bw
        assert col_s_exact(g, 1).value == degeneracy(g).value + 1
        for s in (1, 2, 5):
            assert col_s_exact(g, s).value <= tw + 1


def test_connected_size_bw_diam_bound():
    rng = random.Random(2)
    for _ in range(20):
        g = random_graph(rng.randint(2, 8), 0.5, rng)
        if not g.is_connected():
            continue
        bw = bandwidth_exact(g).value
        assert g.n <= bw * g.diameter() + 1
