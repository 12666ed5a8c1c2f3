import math
import random

import pytest

from twinreduce.diversity import (
    check_bound,
    diversity,
    nu2_cells,
    profile,
    second_neighbourhood_sets,
    second_profile_partition,
    shallow_minor_witness,
)
from twinreduce.errors import InvalidAnchorError, TwinreduceError
from twinreduce.graph import Graph, complete_graph, cycle_graph, path_graph, star_graph
from twinreduce.params import treewidth_exact

INF = math.inf


def random_graph(n, p, rng):
    g = Graph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


def grid3() -> Graph:
    g = Graph(9)
    for i in range(3):
        for j in range(3):
            if i < 2:
                g.add_edge(3 * i + j, 3 * (i + 1) + j)
            if j < 2:
                g.add_edge(3 * i + j, 3 * i + j + 1)
    return g


# ------------------------------------------------------------------ profile

def test_profile_isolated_vertex_all_infinite():
    g = Graph(4, [(1, 2)])
    p = profile(g, 0, [1, 2, 3], 1)
    assert p.entries == (INF, INF, INF)


def test_profile_star_two_leaves():
    g = star_graph(3)  # centre 0, leaves 1..3
    p = profile(g, 3, [1, 2], 2)
    assert p.as_dict() == {1: 2.0, 2: 2.0}


def test_profile_grid_corner():
    # corner 0, anchors centre 4 and opposite corner 8, radius 2
    p = profile(grid3(), 0, [4, 8], 2)
    assert p.as_dict() == {4: 2.0, 8: INF}


def test_profile_rejects_anchor_probe():
    with pytest.raises(InvalidAnchorError):
        profile(path_graph(3), 1, [1, 2], 1)


def test_profile_key_deterministic():
    p = profile(path_graph(5), 0, [2, 4], 3)
    assert p.key() == "2,inf"


# ---------------------------------------------------------------- diversity

def brute_diversity(g, anchors, r):
    """Pairwise comparison, independent of the hashing route."""
    anchor = tuple(sorted(set(anchors)))
    outside = [v for v in range(g.n) if v not in anchor]
    reps = []
    for v in outside:
        pv = profile(g, v, anchor, r)
        if not any(pv.entries == q.entries for q in reps):
            reps.append(pv)
    return len(reps)


def test_star_single_class():
    g = star_graph(6)
    rep = diversity(g, [0], 1)
    assert rep.count == 1
    assert rep.members() == list(range(1, 7))


def test_diversity_matches_bruteforce():
    rng = random.Random(21)
    for _ in range(20):
        n = rng.randint(3, 12)
        g = random_graph(n, rng.random(), rng)
        size = rng.randint(1, min(4, n - 1))
        anchors = rng.sample(range(n), size)
        for r in (1, 2, 3):
            assert diversity(g, anchors, r).count == brute_diversity(g, anchors, r)


def test_diversity_trivial_cap():
    rng = random.Random(22)
    for _ in range(10):
        g = random_graph(8, 0.4, rng)
        anchors = rng.sample(range(8), 3)
        for r in (1, 2, 3):
            assert diversity(g, anchors, r).count <= (r + 1) ** 3


def test_pi1_equals_distinct_neighbourhoods():
    rng = random.Random(23)
    for _ in range(10):
        g = random_graph(9, 0.5, rng)
        anchors = rng.sample(range(9), 3)
        amask = sum(1 << a for a in anchors)
        nbhds = {g.adj[v] & amask for v in range(9) if v not in anchors}
        assert diversity(g, anchors, 1).count == len(nbhds)


def test_radius_refinement():
    # classes at radius r refine the classes at radius r-1
    rng = random.Random(24)
    for _ in range(10):
        g = random_graph(10, 0.3, rng)
        anchors = rng.sample(range(10), 3)
        coarse = {tuple(m): k for k, _, m in diversity(g, anchors, 2).classes}
        for key, _, members in diversity(g, anchors, 3).classes:
            holders = {k for m, k in coarse.items() if set(members) <= set(m)}
            assert len(holders) == 1


# --------------------------------------------------------------- partitions

def test_second_profile_p5():
    g = path_graph(5)
    rep = second_profile_partition(g, [0])
    assert rep.members() == [2, 3, 4]
    assert rep.count == 2


def test_second_profile_no_far_vertices():
    rep = second_profile_partition(complete_graph(4), [0])
    assert rep.count == 0


def test_nu2_cells_dominate_pi2():
    rng = random.Random(25)
    for _ in range(10):
        g = random_graph(10, 0.35, rng)
        anchors = rng.sample(range(10), 3)
        s, cells = nu2_cells(g, anchors)
        assert s == diversity(g, anchors, 1).count
        assert diversity(g, anchors, 2).count <= len(cells)


# ------------------------------------------------------------------- bounds

def test_surface_bound_on_triangulation():
    from twinreduce.gadgets import gen_stacked_triangulation

    g, _ = gen_stacked_triangulation(20)
    res = check_bound(g, [0, 3, 7, 11, 15], 1, "surface", {"gamma": 0})
    assert res.holds
    assert res.rhs == 6 * 5 - 9


def test_surface_bound_requires_planarity_for_gamma_zero():
    with pytest.raises(TwinreduceError):
        check_bound(complete_graph(6), [0, 1], 1, "surface", {"gamma": 0})


def test_surface_bound_rejects_tiny_anchor():
    with pytest.raises(TwinreduceError):
        check_bound(path_graph(5), [0], 1, "surface", {"gamma": 0})


def test_treewidth_bound_tree_case():
    g = Graph(9, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6), (5, 7), (7, 8)])
    assert treewidth_exact(g).value == 1
    res = check_bound(g, [0, 1, 5, 7], 1, "treewidth")
    assert res.holds and res.rhs == 8  # 2|A| when the treewidth is one


def test_ktree_bound_is_tight():
    from twinreduce.gadgets import gen_tight_ktree_pi1

    inst = gen_tight_ktree_pi1(2, 5)
    res = check_bound(inst.graph, inst.x_side, 1, "treewidth", {"k": 2})
    assert res.holds
    assert res.lhs == res.rhs == 13  # (2^2-1)(5-2)+2^2 = 2^2(5-2+1)-5+2


def test_colouring_and_degeneracy_bounds_random():
    rng = random.Random(26)
    for _ in range(15):
        n = rng.randint(4, 10)
        g = random_graph(n, 0.4, rng)
        anchors = rng.sample(range(n), rng.randint(2, 4))
        assert check_bound(g, anchors, 1, "colouring").holds
        d = max(0, *(g.degree(v) for v in range(n)))
        assert check_bound(g, anchors, 1, "degeneracy", {"d": d}).holds


def test_pi2_product_bound():
    from twinreduce.gadgets import gen_stacked_triangulation

    g, _ = gen_stacked_triangulation(16)
    res = check_bound(g, [0, 2, 4, 6], 2, "nu2", {"f": lambda s: max(1, 68 * s - 132)})
    assert res.holds


def test_surface_second_neighbourhood_bound():
    from twinreduce.gadgets import gen_stacked_triangulation

    g, _ = gen_stacked_triangulation(18)
    res = check_bound(g, [0, 1, 2, 5], 2, "surface-second", {"gamma": 0})
    assert res.holds
    assert res.rhs == 68 * 4 - 132


def test_unknown_bound_rejected():
    with pytest.raises(TwinreduceError):
        check_bound(path_graph(4), [0, 1], 1, "no-such-bound")


# ------------------------------------------------------- shallow minor

def bipartite_split(g, x_side):
    return sorted(x_side), [v for v in range(g.n) if v not in set(x_side)]


def test_shallow_minor_empty_y():
    g = Graph(3)
    w = shallow_minor_witness(g, [0, 1, 2], [], 3)
    assert w.minor.m == 0
    assert w.lhs == 0 and w.holds


def test_shallow_minor_single_pair():
    g = Graph(3, [(2, 0), (2, 1)])  # one y seeing both x's
    w = shallow_minor_witness(g, [0, 1], [2], 3)
    assert w.minor.m == 1
    assert w.lhs == 1 and w.holds


def test_shallow_minor_star_of_pairs():
    # each y vertex sees its own distinct pair: |E(H)| equals |Y|
    pairs = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]
    g = Graph(4 + len(pairs))
    for i, (a, b) in enumerate(pairs):
        g.add_edge(4 + i, a)
        g.add_edge(4 + i, b)
    w = shallow_minor_witness(g, [0, 1, 2, 3], list(range(4, 9)), 6)
    assert w.minor.m == len(pairs)
    assert set(w.contracted.values()) == set(pairs)
    assert w.holds


def test_shallow_minor_branch_sets():
    rng = random.Random(27)
    for _ in range(10):
        nx_, ny = rng.randint(2, 5), rng.randint(0, 6)
        g = Graph(nx_ + ny)
        for y in range(nx_, nx_ + ny):
            for x in rng.sample(range(nx_), rng.randint(0, nx_)):
                g.add_edge(y, x)
        w = shallow_minor_witness(g, list(range(nx_)), list(range(nx_, nx_ + ny)), 5)
        seen = set()
        for x, bset in w.branch_sets.items():
            assert x in bset
            assert not seen & bset
            seen |= bset
            for v in bset - {x}:
                assert g.has_edge(v, x)  # radius one, centred at x
        assert w.holds  # K_7-minor-free trivially at this scale


def test_shallow_minor_rejects_nonbipartite():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(TwinreduceError):
        shallow_minor_witness(g, [0, 1], [2], 3)
