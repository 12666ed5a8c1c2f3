"""Shared brute-force reference implementations.

Everything here is deliberately naive: permutation sweeps and full sequence
enumeration that the fast evaluators are checked against.
"""

from __future__ import annotations

from itertools import combinations, permutations

import networkx as nx
import pytest

from twinreduce.graph import Graph, from_networkx, iter_bits
from twinreduce.trigraph import Trigraph


def atlas_graphs(min_n=1, max_n=6, connected=False):
    """All graphs on min_n..max_n vertices up to isomorphism (atlas order)."""
    out = []
    for nxg in nx.graph_atlas_g()[1:]:
        n = nxg.number_of_nodes()
        if n < min_n or n > max_n:
            continue
        if connected and n > 0 and not nx.is_connected(nxg):
            continue
        out.append(from_networkx(nxg))
    return out


def brute_bandwidth(g: Graph) -> int:
    best = g.n
    edges = g.edges()
    if not edges:
        return 0
    for perm in permutations(range(g.n)):
        pos = {v: i for i, v in enumerate(perm)}
        width = max(abs(pos[u] - pos[v]) for u, v in edges)
        best = min(best, width)
    return best


def brute_pathwidth(g: Graph) -> int:
    best = g.n
    for perm in permutations(range(g.n)):
        placed = 0
        width = 0
        for v in perm:
            placed |= 1 << v
            boundary = sum(1 for u in iter_bits(placed) if g.adj[u] & ~placed)
            width = max(width, boundary)
        best = min(best, width)
    return best


def brute_treewidth(g: Graph) -> int:
    best = g.n
    for perm in permutations(range(g.n)):
        adj = {v: set(g.neighbors(v)) for v in range(g.n)}
        width = 0
        for v in perm:
            nb = adj[v]
            width = max(width, len(nb))
            for x in nb:
                for y in nb:
                    if x != y:
                        adj[x].add(y)
                adj[x].discard(v)
            del adj[v]
        best = min(best, width)
    return best


def brute_col(g: Graph, s: int) -> int:
    from twinreduce.params import check_col_witness

    best = g.n + 1
    for perm in permutations(range(g.n)):
        best = min(best, check_col_witness(g, list(perm), s))
    return best


def brute_reduced_f(g: Graph, f) -> int:
    """Min over all full identification sequences of the max f(red graph)."""
    tri = Trigraph.from_graph(g)
    red0, _ = tri.red_graph()
    floor = f(red0)

    def rec(t: Trigraph) -> int:
        if t.n == 1:
            return 0
        vs = t.vertices()
        best = None
        for a, b in combinations(vs, 2):
            nxt = t.contract(a, b)
            red, _ = nxt.red_graph()
            step = f(red)
            if best is not None and step >= best:
                continue
            cand = max(step, rec(nxt))
            if best is None or cand < best:
                best = cand
        return best

    if g.n == 0:
        return 0
    return max(floor, rec(tri))


def is_p4_free(g: Graph) -> bool:
    """Independent cograph test: no induced path on four vertices.

    Among 4-vertex graphs with 3 edges only the path has degree sequence
    (1, 1, 2, 2), so that pair of conditions identifies an induced P4.
    """
    for quad in combinations(range(g.n), 4):
        sub, _ = g.induced(quad)
        if sub.m == 3 and sorted(sub.degree(v) for v in range(4)) == [1, 1, 2, 2]:
            return False
    return True
