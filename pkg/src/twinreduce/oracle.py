"""Ground-truth computation of reduced-f by search over vertex partitions.

reduced-f of a graph is the least k admitting a full identification sequence
whose every red graph has f at most k. Sequences that reach the same vertex
partition continue identically, so the search is a minimax over the
partition lattice, memoised on the canonical partition encoding. Colours
between parts update incrementally: a merged pair of parts is black to a
third part iff both were black, absent iff both were absent, red otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import TooLargeError
from .graph import Graph
from .trigraph import Merge, Partition, ReductionSequence, Trigraph
from . import params

ABSENT, BLACK, RED = 0, 1, 2


@dataclass
class OracleConfig:
    f: Callable[[Graph], int]
    max_n: int = 12
    memo_budget: int = 2_000_000


@dataclass
class OracleResult:
    value: int
    optimal_sequence: ReductionSequence
    states_explored: int
    exact: bool = True


class _MemoBudgetExceeded(Exception):
    pass


def _initial_colours(g: Graph) -> list[list[int]]:
    n = g.n
    col = [[ABSENT] * n for _ in range(n)]
    for u, v in g.edges():
        col[u][v] = col[v][u] = BLACK
    return col


def _red_graph_of(colours: list[list[int]], k: int) -> Graph:
    red = Graph(k)
    for i in range(k):
        row = colours[i]
        for j in range(i + 1, k):
            if row[j] == RED:
                red.add_edge(i, j)
    return red


def memoized_param(f: Callable[[Graph], int]) -> Callable[[Graph], int]:
    """Cache f per labelled adjacency key; red graphs repeat heavily."""
    cache: dict[tuple, int] = {}

    def wrapped(g: Graph) -> int:
        key = g.key()
        got = cache.get(key)
        if got is None:
            got = cache[key] = f(g)
        return got

    return wrapped


def reduced_f_exact(g: Graph, cfg: OracleConfig) -> OracleResult:
    """Minimax over all identification sequences of g under cfg.f.

    The recursion value of a partition is 0 at the one-part partition and
    otherwise the minimum over part pairs of max(f of the red graph right
    after that merge, value of the coarsened partition). The overall value
    also includes f of the red-free base trigraph.
    """
    if g.n > cfg.max_n:
        raise TooLargeError(f"{g.n} vertices exceeds oracle cap {cfg.max_n}")
    f = memoized_param(cfg.f)
    if g.n == 0:
        return OracleResult(0, ReductionSequence(Trigraph(0)), 0)

    n = g.n
    parts0 = tuple(frozenset([v]) for v in range(n))
    colours0 = _initial_colours(g)
    memo: dict[tuple, int] = {}
    stats = {"states": 0}

    def key_of(parts: tuple[frozenset, ...]) -> tuple:
        return tuple(sorted(tuple(sorted(p)) for p in parts))

    def red_of(parts, colours) -> Graph:
        return _red_graph_of(colours, len(parts))

    def child(parts, colours, i, j):
        merged = parts[i] | parts[j]
        new_parts = tuple(p for t, p in enumerate(parts) if t not in (i, j)) + (merged,)
        keep = [t for t in range(len(parts)) if t not in (i, j)]
        m = len(keep)
        new_colours = [[ABSENT] * (m + 1) for _ in range(m + 1)]
        for a in range(m):
            for b in range(a + 1, m):
                c = colours[keep[a]][keep[b]]
                new_colours[a][b] = new_colours[b][a] = c
        for a in range(m):
            ci, cj = colours[i][keep[a]], colours[j][keep[a]]
            if ci == BLACK and cj == BLACK:
                c = BLACK
            elif ci == ABSENT and cj == ABSENT:
                c = ABSENT
            else:
                c = RED
            new_colours[a][m] = new_colours[m][a] = c
        return new_parts, new_colours

    def solve(parts, colours) -> int:
        k = len(parts)
        if k == 1:
            return 0
        key = key_of(parts)
        got = memo.get(key)
        if got is not None:
            return got
        if len(memo) >= cfg.memo_budget:
            raise _MemoBudgetExceeded
        stats["states"] += 1
        best = None
        for i in range(k):
            for j in range(i + 1, k):
                new_parts, new_colours = child(parts, colours, i, j)
                step = f(red_of(new_parts, new_colours))
                if best is not None and step >= best:
                    continue
                sub = solve(new_parts, new_colours)
                cand = max(step, sub)
                if best is None or cand < best:
                    best = cand
        memo[key] = best
        return best

    base_tri = Trigraph.from_graph(g)
    base_red, _ = base_tri.red_graph()
    floor = f(base_red)

    try:
        value = max(floor, solve(parts0, colours0))
        exact = True
    except _MemoBudgetExceeded:
        greedy = reduced_f_upper_greedy(g, cfg.f)
        greedy.states_explored = stats["states"]
        greedy.exact = False
        return greedy

    # reconstruct one optimal sequence by replaying argmin choices
    merges: list[Merge] = []
    part_vertex = {frozenset([v]): v for v in range(n)}
    next_id = n
    parts, colours = parts0, colours0
    while len(parts) > 1:
        k = len(parts)
        chosen = None
        for i in range(k):
            for j in range(i + 1, k):
                new_parts, new_colours = child(parts, colours, i, j)
                step = f(red_of(new_parts, new_colours))
                if step > value:
                    continue
                sub = solve(new_parts, new_colours) if len(new_parts) > 1 else 0
                if max(step, sub) <= value:
                    chosen = (i, j, new_parts, new_colours)
                    break
            if chosen:
                break
        assert chosen is not None, "memo inconsistent with optimal value"
        i, j, parts_next, colours_next = chosen
        u, v = part_vertex[parts[i]], part_vertex[parts[j]]
        merges.append(Merge(u, v, next_id))
        part_vertex[parts[i] | parts[j]] = next_id
        next_id += 1
        parts, colours = parts_next, colours_next

    seq = ReductionSequence(base_tri, merges)
    return OracleResult(value, seq, stats["states"], exact)


def leaf_merge_sequence(g: Graph) -> ReductionSequence:
    """Identify a least-id degree-one vertex with its unique neighbour until
    one vertex remains; isolated remnants are merged pairwise at the end.
    On a tree, every intermediate trigraph stays inside the shrinking tree."""
    tri = Trigraph.from_graph(g)
    cur = tri.copy()
    merges: list[Merge] = []
    while cur.n > 1:
        pick = None
        for v in cur.vertices():
            both = cur.black[v] | cur.red[v]
            if both and both.bit_count() == 1:
                pick = (v, both.bit_length() - 1)
                break
        if pick is None:
            # no leaf: merge the two least vertices (covers isolated parts)
            vs = cur.vertices()
            pick = (vs[0], vs[1])
        u, v = pick
        nxt, merge = cur.contract_merge(u, v)
        merges.append(merge)
        cur = nxt
    return ReductionSequence(tri, merges)


def greedy_min_f_sequence(g: Graph, f: Callable[[Graph], int]) -> ReductionSequence:
    """Always merge the pair minimising f of the resulting red graph,
    breaking ties towards the lexically least live pair."""
    tri = Trigraph.from_graph(g)
    cur = tri.copy()
    merges: list[Merge] = []
    while cur.n > 1:
        best = None
        vs = cur.vertices()
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                cand = cur.contract(vs[a], vs[b])
                red, _ = cand.red_graph()
                val = f(red)
                if best is None or val < best[0]:
                    best = (val, vs[a], vs[b])
        _, u, v = best
        nxt, merge = cur.contract_merge(u, v)
        merges.append(merge)
        cur = nxt
    return ReductionSequence(tri, merges)


def reduced_f_upper_greedy(
    g: Graph,
    f: Callable[[Graph], int],
    strategies: tuple[str, ...] = ("greedy", "leaf-merge"),
) -> OracleResult:
    """Upper bound on reduced-f with a witness sequence.

    Strategies: "greedy" merges the f-minimising pair at every step;
    "leaf-merge" folds degree-one vertices into their neighbours and is
    intended for forests. The best strategy wins.
    """
    from .trigraph import sequence_width

    fm = memoized_param(f)
    best: tuple[int, ReductionSequence] | None = None
    for name in strategies:
        if name == "greedy":
            seq = greedy_min_f_sequence(g, fm)
        elif name == "leaf-merge":
            seq = leaf_merge_sequence(g)
        else:
            raise ValueError(f"unknown strategy {name!r}")
        width = sequence_width(seq, fm)
        if best is None or width < best[0]:
            best = (width, seq)
    return OracleResult(best[0], best[1], 0, exact=False)


# named red-graph parameters accepted by the CLI and the verify suites
def _bw_eval(g: Graph) -> int:
    return params.bandwidth_exact(g).value


def _pw_eval(g: Graph) -> int:
    return params.pathwidth_exact(g).value


def _tw_eval(g: Graph) -> int:
    return params.treewidth_exact(g).value


PARAM_EVALUATORS: dict[str, Callable[[Graph], int]] = {
    "bw": _bw_eval,
    "maxdeg": params.max_degree,
    "pw": _pw_eval,
    "tw": _tw_eval,
    "star": params.max_component_size,
    "maxdeg+pw": lambda g: params.max_degree(g) + _pw_eval(g),
    "maxdeg+tw": lambda g: params.max_degree(g) + _tw_eval(g),
}
