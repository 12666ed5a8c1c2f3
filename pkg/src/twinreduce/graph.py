"""Undirected graphs on vertex ids 0..n-1 with bitmask adjacency.

Neighbourhood comparisons and subset sweeps dominate everything downstream,
so adjacency rows are plain ints used as bitsets: row ``adj[v]`` has bit
``u`` set iff ``uv`` is an edge.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count() if hasattr(mask, "bit_count") else bin(mask).count("1")


class Graph:
    """Simple finite undirected graph, no loops, no multi-edges."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.adj = [0] * n
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        return iter_bits(self.adj[v])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            mask = self.adj[u] >> (u + 1) << (u + 1)
            for v in iter_bits(mask):
                out.append((u, v))
        return out

    @property
    def m(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def copy(self) -> "Graph":
        g = Graph(self.n)
        g.adj = list(self.adj)
        return g

    def key(self) -> tuple:
        """Hashable labelled identity, used for memo tables."""
        return (self.n, tuple(self.adj))

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        g = Graph(self.n)
        g.adj = [(full & ~a) & ~(1 << v) for v, a in enumerate(self.adj)]
        return g

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph compressed onto 0..k-1.

        Returns the subgraph and the list mapping new ids to old ids.
        """
        ids = sorted(set(vertices))
        index = {v: i for i, v in enumerate(ids)}
        g = Graph(len(ids))
        for i, v in enumerate(ids):
            mask = self.adj[v]
            for w in iter_bits(mask):
                if w > v and w in index:
                    g.add_edge(i, index[w])
        return g, ids

    def components(self) -> list[int]:
        """Connected components as vertex bitmasks, ordered by least vertex."""
        seen = 0
        comps = []
        for v in range(self.n):
            if seen >> v & 1:
                continue
            comp = 1 << v
            frontier = 1 << v
            while frontier:
                nxt = 0
                for u in iter_bits(frontier):
                    nxt |= self.adj[u]
                frontier = nxt & ~comp
                comp |= frontier
            comps.append(comp)
            seen |= comp
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def bfs_distances(self, source: int, limit: int | None = None) -> dict[int, int]:
        """Distances from ``source``; vertices beyond ``limit`` are omitted."""
        dist = {source: 0}
        frontier = 1 << source
        seen = frontier
        d = 0
        while frontier:
            if limit is not None and d >= limit:
                break
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= self.adj[u]
            frontier = nxt & ~seen
            seen |= frontier
            d += 1
            for u in iter_bits(frontier):
                dist[u] = d
        return dist

    def power(self, r: int) -> "Graph":
        """Graph with edges between distinct vertices at distance <= r."""
        if r < 1:
            raise ValueError("power radius must be >= 1")
        g = Graph(self.n)
        for v in range(self.n):
            for u, d in self.bfs_distances(v, limit=r).items():
                if u > v and d >= 1:
                    g.add_edge(v, u)
        return g

    def diameter(self) -> int:
        """Diameter of a connected graph (0 for n <= 1)."""
        if self.n <= 1:
            return 0
        best = 0
        for v in range(self.n):
            dist = self.bfs_distances(v)
            if len(dist) != self.n:
                raise ValueError("diameter of a disconnected graph")
            best = max(best, max(dist.values()))
        return best

    def disjoint_union(self, other: "Graph") -> "Graph":
        g = Graph(self.n + other.n)
        g.adj[: self.n] = list(self.adj)
        for v, a in enumerate(other.adj):
            g.adj[self.n + v] = a << self.n
        return g

    def relabel(self, perm: list[int]) -> "Graph":
        """Image under the permutation new_id = perm[old_id]."""
        g = Graph(self.n)
        for u, v in self.edges():
            g.add_edge(perm[u], perm[v])
        return g

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs >= 3 vertices")
    g = path_graph(n)
    g.add_edge(n - 1, 0)
    return g


def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def star_graph(leaves: int) -> Graph:
    """Star K_{1,leaves} with centre 0."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def from_networkx(nxg) -> Graph:
    """Compress a networkx graph onto 0..n-1 in sorted node order."""
    nodes = sorted(nxg.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    g = Graph(len(nodes))
    for u, v in nxg.edges():
        if u != v:
            g.add_edge(index[u], index[v])
    return g
