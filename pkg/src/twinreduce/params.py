"""Exact (small n) and heuristic graph parameter evaluators.

Every exact evaluator returns a witness that re-validates in polynomial
time: an ordering for bandwidth and colouring numbers, a peeling order for
degeneracy, a decomposition for pathwidth and treewidth. Evaluators reject
graphs above their size caps with TooLargeError instead of silently
degrading; callers choose their own fallbacks.

Size caps can be overridden globally with the TWINREDUCE_MAX_N environment
variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any

from .errors import TooLargeError
from .graph import Graph, iter_bits, popcount

BW_EXACT_DEFAULT_CAP = 24
PW_TW_DEFAULT_CAP = 20
COL_EXACT_DEFAULT_CAP = 18
DP_STATE_CAP = 1 << 20


def size_cap(default: int) -> int:
    env = os.environ.get("TWINREDUCE_MAX_N")
    return int(env) if env else default


@dataclass
class ParamResult:
    value: int
    exact: bool
    witness: Any = None
    exceeds_cap: bool = False


@dataclass
class TreeDecomposition:
    """Bags indexed 0..b-1; parent[i] = -1 marks the root."""

    bags: list[frozenset[int]]
    parent: list[int]
    root: int

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def validate(self, g: Graph) -> None:
        b = len(self.bags)
        if not (0 <= self.root < b) or self.parent[self.root] != -1:
            raise ValueError("bad root")
        children: list[list[int]] = [[] for _ in range(b)]
        for i, p in enumerate(self.parent):
            if i != self.root:
                if not (0 <= p < b):
                    raise ValueError("bad parent pointer")
                children[p].append(i)
        # every edge in some bag
        for u, v in g.edges():
            if not any(u in bag and v in bag for bag in self.bags):
                raise ValueError(f"edge ({u},{v}) not covered by any bag")
        # bags containing v induce a nonempty subtree
        for v in range(g.n):
            holding = [i for i, bag in enumerate(self.bags) if v in bag]
            if not holding:
                raise ValueError(f"vertex {v} in no bag")
            hold = set(holding)
            seen = {holding[0]}
            stack = [holding[0]]
            while stack:
                x = stack.pop()
                for y in children[x] + ([self.parent[x]] if x != self.root else []):
                    if y in hold and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != hold:
                raise ValueError(f"bags of vertex {v} are disconnected")


# ---------------------------------------------------------------------------
# simple parameters

def max_degree(g: Graph) -> int:
    return max((popcount(a) for a in g.adj), default=0)


def max_component_size(g: Graph) -> int:
    return max((popcount(c) for c in g.components()), default=0)


def degeneracy(g: Graph) -> ParamResult:
    """Min-degree peeling; witness is the peeling order."""
    alive = (1 << g.n) - 1
    deg = [g.degree(v) for v in range(g.n)]
    order = []
    value = 0
    for _ in range(g.n):
        v = min(iter_bits(alive), key=lambda u: (deg[u], u))
        value = max(value, deg[v])
        order.append(v)
        alive &= ~(1 << v)
        for u in iter_bits(g.adj[v] & alive):
            deg[u] -= 1
    return ParamResult(value, True, order)


def max_clique_size(g: Graph) -> int:
    """Bron-Kerbosch with pivoting; exponential worst case, fine below ~30."""
    adj = g.adj
    best = 0

    def bk(size: int, p: int, x: int) -> None:
        nonlocal best
        if not p and not x:
            best = max(best, size)
            return
        if size + popcount(p) <= best:
            return
        pivot = max(iter_bits(p | x), key=lambda u: popcount(adj[u] & p))
        for v in iter_bits(p & ~adj[pivot]):
            bk(size + 1, p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    bk(0, (1 << g.n) - 1, 0)
    return best


def clique_counts(g: Graph, kmax: int | None = None) -> list[int]:
    """Number of cliques of each order 0..kmax.

    The empty set is the unique order-0 clique, so counts[0] = 1,
    counts[1] = n, counts[2] = m. Enumeration walks a degeneracy ordering
    so each clique is visited exactly once.
    """
    if kmax is None:
        kmax = g.n
    counts = [0] * (kmax + 1)
    counts[0] = 1
    order = degeneracy(g).witness
    rank = {v: i for i, v in enumerate(order)}
    later = [0] * g.n
    for v in range(g.n):
        for u in iter_bits(g.adj[v]):
            if rank[u] > rank[v]:
                later[v] |= 1 << u

    def rec(cand: int, size: int) -> None:
        if size >= kmax:
            return
        for u in iter_bits(cand):
            counts[size + 1] += 1
            rec(cand & later[u], size + 1)

    rec(sum(1 << v for v in range(g.n)), 0)
    return counts


# ---------------------------------------------------------------------------
# bandwidth

def check_ordering_bandwidth(g: Graph, order: list[int]) -> int:
    """Largest |i-j| over edges; raises if order is not a permutation."""
    if sorted(order) != list(range(g.n)):
        raise ValueError("ordering is not a permutation of the vertices")
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return max((abs(pos[u] - pos[v]) for u, v in g.edges()), default=0)


def _bw_level_order(g: Graph, start: int) -> list[int]:
    # Cuthill-McKee style: BFS levels, low degree first inside a level
    seen = {start}
    order = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for u in sorted(g.neighbors(v), key=lambda u: (g.degree(u), u)):
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        order.extend(nxt)
        frontier = nxt
    return order


def _bw_heuristic_component(g: Graph) -> tuple[int, list[int]]:
    if g.n == 0:
        return 0, []
    starts = sorted(range(g.n), key=lambda v: (g.degree(v), v))[:4]
    # add a pseudo-peripheral start: farthest vertex from the first start
    dist = g.bfs_distances(starts[0])
    far = max(dist, key=lambda v: (dist[v], -v))
    if far not in starts:
        starts.append(far)
    best_val, best_order = None, None
    for s in starts:
        order = _bw_level_order(g, s)
        val = check_ordering_bandwidth(g, order)
        if best_val is None or val < best_val:
            best_val, best_order = val, order
    return best_val, best_order


def bandwidth_heuristic(g: Graph, seed_witness: list[int] | None = None) -> ParamResult:
    """Upper bound with witness; never exact unless the graph is trivial."""
    comps = g.components()
    order: list[int] = []
    value = 0
    for comp in comps:
        sub, ids = g.induced(iter_bits(comp))
        val, sub_order = _bw_heuristic_component(sub)
        value = max(value, val)
        order.extend(ids[v] for v in sub_order)
    if seed_witness is not None:
        seed_val = check_ordering_bandwidth(g, seed_witness)
        if seed_val < value:
            value, order = seed_val, list(seed_witness)
    return ParamResult(value, exact=g.m == 0, witness=order)


def _bw_feasible(g: Graph, k: int, memo_cap: int = 3_000_000) -> list[int] | None:
    """Ordering of bandwidth <= k, or None. DFS over left-to-right placements.

    Prunes on per-vertex deadlines (a vertex must appear within k positions
    of its earliest placed neighbour), on the aggregate deadline schedule
    (the i-th tightest unplaced deadline must leave room for i placements),
    and on window capacity (a placed vertex must fit all its unplaced
    neighbours before its own deadline). Branching tries tight deadlines
    first, ids breaking ties. Failed states are memoised on (placed set,
    ordered last-k suffix); older placements cannot influence feasibility
    because their constraints are already settled.
    """
    n = g.n
    adj = g.adj
    INF = n + k + 1
    deadline = [INF] * n
    unplaced_nb = [g.degree(v) for v in range(n)]
    pos = [-1] * n
    order: list[int] = []
    placed_mask = 0
    failed: set[tuple[int, tuple[int, ...]]] = set()

    # swapping two unplaced twins (equal open or closed neighbourhoods) is an
    # automorphism fixing the placed vertices, so a candidate with a smaller
    # unplaced twin never needs trying: any completion from it maps to one
    # from the smaller twin
    twin_mask = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if adj[u] == adj[v] or (
                adj[u] >> v & 1
                and (adj[u] & ~(1 << v)) == (adj[v] & ~(1 << u))
            ):
                twin_mask[u] |= 1 << v
                twin_mask[v] |= 1 << u

    def dfs(p: int) -> bool:
        nonlocal placed_mask
        if p == n:
            return True
        key = (placed_mask, tuple(order[-k:]) if k else ())
        if key in failed:
            return False
        unplaced = sorted((deadline[v], v) for v in range(n) if pos[v] < 0)
        for i, (d, _) in enumerate(unplaced):
            if d < p + i:
                if len(failed) < memo_cap:
                    failed.add(key)
                return False
        full = (1 << n) - 1
        unplaced_mask = full & ~placed_mask
        if unplaced[0][0] == p:
            candidates = [unplaced[0][1]]
        else:
            candidates = [
                v for _, v in unplaced
                if not (twin_mask[v] & unplaced_mask & ((1 << v) - 1))
            ]
        for v in candidates:
            touched = []
            ok = True
            pos[v] = p
            order.append(v)
            placed_mask |= 1 << v
            for u in iter_bits(adj[v]):
                unplaced_nb[u] -= 1
                if pos[u] < 0 and deadline[u] > p + k:
                    touched.append((u, deadline[u]))
                    deadline[u] = p + k
            # window capacity: placed u must fit its unplaced nbrs by pos[u]+k
            for u in order[-k - 1:]:
                if unplaced_nb[u] > pos[u] + k - p:
                    ok = False
                    break
            if ok and dfs(p + 1):
                return True
            for u, d in touched:
                deadline[u] = d
            for u in iter_bits(adj[v]):
                unplaced_nb[u] += 1
            placed_mask &= ~(1 << v)
            order.pop()
            pos[v] = -1
        if len(failed) < memo_cap:
            failed.add(key)
        return False

    if dfs(0):
        return list(order)
    return None


def _bw_local_density_lb(g: Graph) -> int:
    """max over v, d of ceil((|N^d[v]| - 1) / 2d): a ball of radius d spans
    at most 2d*k+1 positions in a width-k ordering."""
    best = 0
    for v in range(g.n):
        counts: dict[int, int] = {}
        for d in g.bfs_distances(v).values():
            counts[d] = counts.get(d, 0) + 1
        acc = 0
        for d in sorted(counts):
            acc += counts[d]
            if d >= 1:
                best = max(best, -(-(acc - 1) // (2 * d)))
    return best


def bandwidth_exact(g: Graph, cap: int | None = None) -> ParamResult:
    """Optimal bandwidth with witness by iterative deepening branch and bound.

    With cap given, the search stops at cap: an exceeds_cap result proves
    bw > cap by exhaustion, with value = cap + 1 as the certified lower
    bound. Components are laid out independently.
    """
    limit = size_cap(BW_EXACT_DEFAULT_CAP)
    big = max((popcount(c) for c in g.components()), default=0)
    if big > limit:
        raise TooLargeError(f"component of {big} vertices exceeds exact bandwidth cap {limit}")
    value = 0
    order: list[int] = []
    for comp in g.components():
        sub, ids = g.induced(iter_bits(comp))
        ub_val, ub_order = _bw_heuristic_component(sub)
        lb = max(((sub.degree(v) + 1) // 2 for v in range(sub.n)), default=0)
        if sub.n > 1:
            lb = max(lb, _bw_local_density_lb(sub))
            lb = max(lb, max_clique_size(sub) - 1)
        got = None
        hi = ub_val if cap is None else min(ub_val, cap)
        for k in range(lb, hi + 1):
            if k >= ub_val:
                got = (ub_val, ub_order)
                break
            witness = _bw_feasible(sub, k)
            if witness is not None:
                got = (k, witness)
                break
        if got is None:
            # every k <= cap failed, so bw > cap on this component
            return ParamResult(cap + 1, exact=False, witness=None, exceeds_cap=True)
        value = max(value, got[0])
        order.extend(ids[v] for v in got[1])
    return ParamResult(value, True, order)


# ---------------------------------------------------------------------------
# pathwidth (vertex separation number) and treewidth

def _pw_component(g: Graph, state_cap: int) -> tuple[int, list[int]]:
    n = g.n
    if (1 << n) > state_cap:
        raise TooLargeError(f"pathwidth DP needs 2^{n} states, cap is {state_cap}")
    adj = g.adj
    full = (1 << n) - 1
    INF = n + 1
    dp = [INF] * (1 << n)
    choice = [-1] * (1 << n)
    dp[0] = 0
    for mask in range(1, 1 << n):
        boundary = 0
        for v in iter_bits(mask):
            if adj[v] & ~mask:
                boundary += 1
        best, arg = INF, -1
        for v in iter_bits(mask):
            cand = dp[mask & ~(1 << v)]
            if cand < best:
                best, arg = cand, v
        dp[mask] = max(best, boundary)
        choice[mask] = arg
    order: list[int] = []
    mask = full
    while mask:
        v = choice[mask]
        order.append(v)
        mask &= ~(1 << v)
    order.reverse()
    return dp[full], order


def _order_to_path_decomposition(g: Graph, order: list[int]) -> TreeDecomposition:
    bags = []
    placed = 0
    for v in order:
        boundary = frozenset(
            u for u in iter_bits(placed) if g.adj[u] & ~placed
        )
        bags.append(boundary | {v})
        placed |= 1 << v
    parent = [-1] + list(range(len(bags) - 1))
    return TreeDecomposition(bags, parent, 0)


def pathwidth_exact(g: Graph, state_cap: int = DP_STATE_CAP) -> ParamResult:
    """Exact pathwidth via the vertex separation subset DP, per component.

    Witness is a path-decomposition assembled from the separation order;
    validated before returning.
    """
    if g.n == 0:
        return ParamResult(0, True, TreeDecomposition([frozenset()], [-1], 0))
    limit = size_cap(PW_TW_DEFAULT_CAP)
    value = 0
    order: list[int] = []
    for comp in g.components():
        if popcount(comp) > limit:
            raise TooLargeError(f"component of {popcount(comp)} vertices exceeds cap {limit}")
        sub, ids = g.induced(iter_bits(comp))
        val, sub_order = _pw_component(sub, state_cap)
        value = max(value, val)
        order.extend(ids[v] for v in sub_order)
    td = _order_to_path_decomposition(g, order)
    td.validate(g)
    if td.width != value:
        raise AssertionError(f"witness width {td.width} disagrees with value {value}")
    return ParamResult(value, True, td)


def _elim_degree(adj: list[int], eliminated: int, v: int) -> int:
    """Degree of v when eliminated after the ``eliminated`` set: vertices
    outside the set adjacent to v or connected to v through it."""
    inside = adj[v] & eliminated
    out = adj[v] & ~eliminated
    seen = inside
    frontier = inside
    while frontier:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= adj[u]
        frontier = nxt & eliminated & ~seen
        seen |= frontier
        out |= nxt & ~eliminated
    return popcount(out & ~(1 << v))


def _tw_dp(g: Graph, state_cap: int) -> tuple[int, list[int]]:
    n = g.n
    if (1 << n) > state_cap:
        raise TooLargeError(f"treewidth DP needs 2^{n} states, cap is {state_cap}")
    adj = g.adj
    full = (1 << n) - 1
    INF = n + 1
    dp = [INF] * (1 << n)
    choice = [-1] * (1 << n)
    dp[0] = 0
    for mask in range(1, 1 << n):
        best, arg = INF, -1
        for v in iter_bits(mask):
            prev = mask & ~(1 << v)
            cand = max(dp[prev], _elim_degree(adj, prev, v))
            if cand < best:
                best, arg = cand, v
        dp[mask] = best
        choice[mask] = arg
    order: list[int] = []
    mask = full
    while mask:
        v = choice[mask]
        order.append(v)
        mask &= ~(1 << v)
    order.reverse()
    return dp[full], order


def _tw_component(g: Graph, state_cap: int, limit: int) -> tuple[int, list[int]]:
    """Treewidth of a connected graph: safe reductions then subset DP.

    Simplicial elimination is always safe. Eliminating a degree-2 vertex
    with a fill edge (series rule) is safe once a lower bound of 2 is
    known, which any cyclic graph provides.
    """
    n = g.n
    adj = {v: set(g.neighbors(v)) for v in range(n)}
    lb = 2 if g.m >= n else 0
    order: list[int] = []

    def is_simplicial(v: int) -> bool:
        nb = adj[v]
        return all(y in adj[x] for x in nb for y in nb if x < y)

    while adj:
        progressed = False
        for v in sorted(adj):
            if is_simplicial(v):
                lb = max(lb, len(adj[v]))
                for x in adj[v]:
                    adj[x].discard(v)
                del adj[v]
                order.append(v)
                progressed = True
                break
        else:
            if lb >= 2:
                for v in sorted(adj):
                    if len(adj[v]) == 2:
                        a, b = sorted(adj[v])
                        adj[a].add(b)
                        adj[b].add(a)
                        adj[a].discard(v)
                        adj[b].discard(v)
                        del adj[v]
                        order.append(v)
                        progressed = True
                        break
        if not progressed:
            break
    if adj:
        remaining = sorted(adj)
        if len(remaining) > limit:
            raise TooLargeError(
                f"{len(remaining)} vertices remain after reductions, cap is {limit}")
        sub = Graph(len(remaining))
        index = {v: i for i, v in enumerate(remaining)}
        for v in remaining:
            for u in adj[v]:
                if index[u] > index[v]:
                    sub.add_edge(index[v], index[u])
        val, sub_order = _tw_dp(sub, state_cap)
        lb = max(lb, val)
        order.extend(remaining[i] for i in sub_order)
    return lb, order


def _elimination_to_decomposition(g: Graph, order: list[int]) -> TreeDecomposition:
    """Tree-decomposition from an elimination ordering with fill-in."""
    n = g.n
    adj = {v: set(g.neighbors(v)) for v in range(n)}
    rank = {v: i for i, v in enumerate(order)}
    bag_of: dict[int, frozenset[int]] = {}
    for v in order:
        nb = {u for u in adj[v] if rank[u] > rank[v]}
        bag_of[v] = frozenset(nb | {v})
        for x in nb:
            for y in nb:
                if x != y:
                    adj[x].add(y)
            adj[x].discard(v)
    bags = [bag_of[v] for v in order]
    parent = [-1] * n
    for i, v in enumerate(order):
        higher = [u for u in bag_of[v] if rank[u] > rank[v]]
        if higher:
            parent[i] = rank[min(higher, key=lambda u: rank[u])]
    # orphaned roots of other components chain onto the global root
    root = n - 1 if n else 0
    for i in range(n):
        if parent[i] == -1 and i != root:
            parent[i] = root
    return TreeDecomposition(bags, parent, root)


def treewidth_exact(g: Graph, state_cap: int = DP_STATE_CAP) -> ParamResult:
    """Exact treewidth; witness is a validated tree-decomposition."""
    if g.n == 0:
        return ParamResult(0, True, TreeDecomposition([frozenset()], [-1], 0))
    limit = size_cap(PW_TW_DEFAULT_CAP)
    value = 0
    order: list[int] = []
    for comp in g.components():
        sub, ids = g.induced(iter_bits(comp))
        val, sub_order = _tw_component(sub, state_cap, limit)
        value = max(value, val)
        order.extend(ids[v] for v in sub_order)
    td = _elimination_to_decomposition(g, order)
    td.validate(g)
    if td.width != value:
        raise AssertionError(f"witness width {td.width} disagrees with value {value}")
    return ParamResult(value, True, td)


# ---------------------------------------------------------------------------
# strong colouring numbers

def _reach_size(adj: list[int], v: int, after_mask: int, s: int) -> int:
    """|reach_s| of v when ``after_mask`` holds the vertices ordered after v.

    reach collects v itself plus every w ordered at or before v joined to v
    by a path of length <= s whose internal vertices all come after v. Only
    the set of later vertices matters, not their relative order.
    """
    collected = 0
    visited = 0
    frontier = 1 << v
    for _ in range(s):
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= adj[u]
        nxt &= ~visited & ~(1 << v)
        collected |= nxt & ~after_mask
        frontier = nxt & after_mask
        visited |= nxt
        if not frontier:
            break
    return popcount(collected) + 1


def check_col_witness(g: Graph, order: list[int], s: int) -> int:
    """Max reach size under the ordering: the witnessed colouring number."""
    if sorted(order) != list(range(g.n)):
        raise ValueError("ordering is not a permutation")
    after = 0
    best = 0
    for v in reversed(order):
        best = max(best, _reach_size(g.adj, v, after, s))
        after |= 1 << v
    return best


def _col_component(g: Graph, s: int, state_cap: int) -> tuple[int, list[int]]:
    n = g.n
    if (1 << n) > state_cap:
        raise TooLargeError(f"colouring DP needs 2^{n} states")
    adj = g.adj
    INF = n + 1
    dp = [INF] * (1 << n)
    choice = [-1] * (1 << n)
    dp[0] = 0
    for mask in range(1, 1 << n):
        best, arg = INF, -1
        for v in iter_bits(mask):
            prev = mask & ~(1 << v)
            base = dp[prev]
            if base >= best:
                continue
            cand = max(base, _reach_size(adj, v, prev, s))
            if cand < best:
                best, arg = cand, v
        dp[mask] = best
        choice[mask] = arg
    # choice[S] is the leftmost vertex when S fills the final positions, so
    # walking down from the full set yields the order left to right
    order: list[int] = []
    mask = (1 << n) - 1
    while mask:
        v = choice[mask]
        order.append(v)
        mask &= ~(1 << v)
    return dp[(1 << n) - 1], order


def col_s_exact(g: Graph, s: int, state_cap: int = DP_STATE_CAP) -> ParamResult:
    """Exact s-strong colouring number by right-to-left subset DP.

    Valid because reach of v depends only on the set of vertices ordered
    after v; components are ordered consecutively.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if g.n == 0:
        return ParamResult(0, True, [])
    limit = size_cap(COL_EXACT_DEFAULT_CAP)
    value = 0
    order: list[int] = []
    for comp in g.components():
        if popcount(comp) > limit:
            raise TooLargeError(f"component of {popcount(comp)} vertices exceeds cap {limit}")
        sub, ids = g.induced(iter_bits(comp))
        val, sub_order = _col_component(sub, s, state_cap)
        value = max(value, val)
        order.extend(ids[v] for v in sub_order)
    witnessed = check_col_witness(g, order, s)
    if witnessed != value:
        raise AssertionError("colouring witness disagrees with DP value")
    return ParamResult(value, True, order)


def col_s_greedy(g: Graph, s: int) -> ParamResult:
    """Upper bound: build the order right to left, always taking the vertex
    of smallest reach against the suffix chosen so far."""
    adj = g.adj
    remaining = set(range(g.n))
    after = 0
    rev: list[int] = []
    while remaining:
        v = min(remaining, key=lambda u: (_reach_size(adj, u, after, s), u))
        rev.append(v)
        remaining.discard(v)
        after |= 1 << v
    order = rev[::-1]
    value = check_col_witness(g, order, s) if g.n else 0
    return ParamResult(value, False, order)
