"""Trigraphs, vertex identification, and reduction sequences.

A trigraph splits its edge set into black (definite) edges and red (error)
edges. Identifying u and v keeps common black neighbours black, keeps common
non-neighbours absent, and turns everything else red. A reduction sequence
records the identifications down to a single vertex; its width under a red
graph parameter f is the maximum of f over all intermediate red graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

from .errors import InvalidMergeError, InvalidPartitionError
from .graph import Graph, iter_bits, popcount


class Merge(NamedTuple):
    u: int
    v: int
    w: int


class Trigraph:
    """Mutable-by-private-methods trigraph; treat instances as values.

    Adjacency is stored as one bitmask per live vertex, over vertex ids.
    Fresh ids from identifications are allocated as next_id, next_id+1, ...
    so sequences replay bit-exactly.
    """

    __slots__ = ("black", "red", "labels", "next_id")

    def __init__(self, n: int = 0, black=(), red=(), labels=None):
        self.black: dict[int, int] = {v: 0 for v in range(n)}
        self.red: dict[int, int] = {v: 0 for v in range(n)}
        self.next_id = n
        for u, v in black:
            self.add_edge(u, v, "black")
        for u, v in red:
            self.add_edge(u, v, "red")
        if labels is None:
            labels = {v: frozenset([v]) for v in range(n)}
        self.labels: dict[int, frozenset[int]] = dict(labels)
        self._check_labels()

    def _check_labels(self):
        seen: set[int] = set()
        for v, lab in self.labels.items():
            if v not in self.black:
                raise ValueError(f"label for unknown vertex {v}")
            if not lab:
                raise ValueError(f"empty label at vertex {v}")
            if seen & lab:
                raise ValueError("labels are not pairwise disjoint")
            seen |= set(lab)

    @classmethod
    def from_graph(cls, g: Graph) -> "Trigraph":
        t = cls(g.n)
        for v in range(g.n):
            t.black[v] = g.adj[v]
        return t

    @property
    def n(self) -> int:
        return len(self.black)

    def vertices(self) -> list[int]:
        return sorted(self.black)

    def is_live(self, v: int) -> bool:
        return v in self.black

    def add_edge(self, u: int, v: int, colour: str) -> None:
        if u == v:
            raise ValueError(f"loop at {u}")
        if u not in self.black or v not in self.black:
            raise ValueError(f"edge ({u},{v}) references a dead vertex")
        if (self.black[u] | self.red[u]) >> v & 1:
            raise ValueError(f"duplicate edge ({u},{v})")
        side = self.black if colour == "black" else self.red
        side[u] |= 1 << v
        side[v] |= 1 << u

    def edge_colour(self, u: int, v: int) -> str | None:
        if self.black[u] >> v & 1:
            return "black"
        if self.red[u] >> v & 1:
            return "red"
        return None

    def black_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in sorted(self.black) for v in iter_bits(self.black[u]) if v > u]

    def red_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in sorted(self.red) for v in iter_bits(self.red[u]) if v > u]

    def red_degree(self, v: int) -> int:
        return popcount(self.red[v])

    def max_red_degree(self) -> int:
        return max((popcount(m) for m in self.red.values()), default=0)

    def copy(self) -> "Trigraph":
        t = Trigraph.__new__(Trigraph)
        t.black = dict(self.black)
        t.red = dict(self.red)
        t.labels = dict(self.labels)
        t.next_id = self.next_id
        return t

    def _compress(self, masks: dict[int, int]) -> tuple[Graph, list[int]]:
        ids = sorted(masks)
        index = {v: i for i, v in enumerate(ids)}
        g = Graph(len(ids))
        for v in ids:
            for u in iter_bits(masks[v]):
                if u > v:
                    g.add_edge(index[v], index[u])
        return g, ids

    def red_graph(self) -> tuple[Graph, list[int]]:
        """Spanning red subgraph compressed onto 0..n-1 plus the id map."""
        return self._compress(self.red)

    def underlying_graph(self) -> tuple[Graph, list[int]]:
        both = {v: self.black[v] | self.red[v] for v in self.black}
        return self._compress(both)

    def _contract_inplace(self, u: int, v: int, w: int) -> None:
        if u == v:
            raise InvalidMergeError(f"cannot identify {u} with itself")
        for x in (u, v):
            if x not in self.black:
                raise InvalidMergeError(f"vertex {x} is not live")
        if w in self.black or w < 0:
            raise InvalidMergeError(f"fresh id {w} already used")
        ubit, vbit, uvbits = 1 << u, 1 << v, (1 << u) | (1 << v)
        both_black = self.black[u] & self.black[v] & ~uvbits
        touched = (self.black[u] | self.red[u] | self.black[v] | self.red[v]) & ~uvbits
        new_red = touched & ~both_black
        wbit = 1 << w
        for x in iter_bits(touched):
            self.black[x] &= ~uvbits
            self.red[x] &= ~uvbits
            if both_black >> x & 1:
                self.black[x] |= wbit
            else:
                self.red[x] |= wbit
        lab_u = self.labels.pop(u, None)
        lab_v = self.labels.pop(v, None)
        if lab_u is not None and lab_v is not None:
            self.labels[w] = lab_u | lab_v
        del self.black[u], self.black[v], self.red[u], self.red[v]
        self.black[w] = both_black
        self.red[w] = new_red
        if w >= self.next_id:
            self.next_id = w + 1

    def contract(self, u: int, v: int, w: int | None = None) -> "Trigraph":
        """Return the trigraph with u and v identified into the fresh vertex w.

        w defaults to next_id. The input trigraph is left untouched.
        """
        t = self.copy()
        t._contract_inplace(u, v, self.next_id if w is None else w)
        return t

    def contract_merge(self, u: int, v: int) -> tuple["Trigraph", Merge]:
        w = self.next_id
        return self.contract(u, v, w), Merge(u, v, w)

    def label_view(self) -> tuple[frozenset, frozenset, frozenset]:
        """Identity of the trigraph keyed by labels instead of vertex ids.

        Lets two trigraphs built along different routes be compared without
        caring about fresh-id allocation.
        """
        lab = self.labels
        verts = frozenset(lab[v] for v in self.black)
        blacks = frozenset(frozenset((lab[u], lab[v])) for u, v in self.black_edges())
        reds = frozenset(frozenset((lab[u], lab[v])) for u, v in self.red_edges())
        return verts, blacks, reds

    def __repr__(self) -> str:
        return f"Trigraph(n={self.n}, black={len(self.black_edges())}, red={len(self.red_edges())})"


class Partition:
    """Disjoint nonempty subsets covering a ground set, canonically encoded:
    parts sorted by least element, elements sorted inside each part."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        norm = sorted((tuple(sorted(p)) for p in parts), key=lambda p: p[0] if p else -1)
        self.parts: tuple[tuple[int, ...], ...] = tuple(norm)

    def validate(self, ground: set[int]) -> None:
        seen: set[int] = set()
        for p in self.parts:
            if not p:
                raise InvalidPartitionError("empty part")
            sp = set(p)
            if seen & sp:
                raise InvalidPartitionError("parts are not disjoint")
            seen |= sp
        if seen != set(ground):
            raise InvalidPartitionError("parts do not cover the ground set")

    def key(self) -> tuple:
        return self.parts

    def merge(self, i: int, j: int) -> "Partition":
        parts = list(self.parts)
        a, b = sorted((i, j))
        merged = tuple(sorted(parts[a] + parts[b]))
        rest = [p for k, p in enumerate(parts) if k not in (a, b)]
        return Partition(rest + [merged])

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition({list(map(list, self.parts))})"


def trigraph_of_partition(g0: Trigraph, partition: Partition) -> Trigraph:
    """Quotient trigraph of a red-free trigraph by a vertex partition.

    A part pair is black iff complete in g0, absent iff edgeless between the
    parts, and red otherwise. Labels carry the parts.
    """
    if any(m for m in g0.red.values()):
        raise InvalidPartitionError("base trigraph must have no red edges")
    partition.validate(set(g0.black))
    parts = partition.parts
    k = len(parts)
    masks = [sum(1 << v for v in p) for p in parts]
    base_labels = g0.labels
    out = Trigraph(k, labels={
        i: frozenset().union(*(base_labels[v] for v in p)) for i, p in enumerate(parts)
    })
    for i in range(k):
        for j in range(i + 1, k):
            cross = sum(popcount(g0.black[v] & masks[j]) for v in parts[i])
            if cross == len(parts[i]) * len(parts[j]):
                out.add_edge(i, j, "black")
            elif cross > 0:
                out.add_edge(i, j, "red")
    return out


@dataclass
class ReductionSequence:
    """A base trigraph plus an ordered list of identifications.

    witnesses, when present, holds one vertex ordering of the live vertices
    per merge (a bandwidth witness for that step's red graph).
    """

    base: Trigraph
    merges: list[Merge] = field(default_factory=list)
    witnesses: list[list[int]] | None = None

    @property
    def partial(self) -> bool:
        return len(self.merges) < self.base.n - 1

    def validate(self) -> None:
        if self.witnesses is not None and len(self.witnesses) != len(self.merges):
            raise InvalidMergeError("witness list length differs from merge count")
        for _ in self.replay():
            pass

    def replay(self, snapshots: bool = True) -> Iterator[Trigraph]:
        """Yield the trigraphs of the sequence, base first.

        With snapshots=True every yielded trigraph is an independent copy;
        otherwise one trigraph is mutated in place and yielded repeatedly.
        """
        cur = self.base.copy()
        yield cur.copy() if snapshots else cur
        for u, v, w in self.merges:
            cur._contract_inplace(u, v, w)
            yield cur.copy() if snapshots else cur

    def final(self) -> Trigraph:
        last = None
        for last in self.replay(snapshots=False):
            pass
        return last.copy()

    def induced_partitions(self) -> Iterator[Partition]:
        """Partition of the base vertex set accumulated after each prefix."""
        part_of: dict[int, tuple[int, ...]] = {v: (v,) for v in self.base.black}
        yield Partition(part_of.values())
        for u, v, w in self.merges:
            if u not in part_of or v not in part_of:
                raise InvalidMergeError(f"merge ({u},{v}) references a dead vertex")
            merged = tuple(sorted(part_of.pop(u) + part_of.pop(v)))
            part_of[w] = merged
            yield Partition(part_of.values())

    def project(self, keep: set[int]) -> "ReductionSequence":
        """Sequence induced on a subset of base vertices.

        Merges whose parts contain no kept vertex are dropped; merges with a
        single kept side become no-ops (the fresh part inherits the kept
        representative). Fresh ids are re-allocated from len(keep) upward.
        """
        base_g, ids = self.base.underlying_graph()
        kept_sorted = [v for v in sorted(self.base.black) if v in keep]
        index = {v: i for i, v in enumerate(kept_sorted)}
        new_base = Trigraph(len(kept_sorted), labels={
            index[v]: self.base.labels[v] for v in kept_sorted
        })
        for u, v in self.base.black_edges():
            if u in keep and v in keep:
                new_base.add_edge(index[u], index[v], "black")
        for u, v in self.base.red_edges():
            if u in keep and v in keep:
                new_base.add_edge(index[u], index[v], "red")
        rep: dict[int, int | None] = {v: index.get(v) for v in self.base.black}
        merges = []
        fresh = len(kept_sorted)
        for u, v, w in self.merges:
            ru, rv = rep.pop(u), rep.pop(v)
            if ru is None:
                rep[w] = rv
            elif rv is None:
                rep[w] = ru
            else:
                merges.append(Merge(ru, rv, fresh))
                rep[w] = fresh
                fresh += 1
        return ReductionSequence(new_base, merges)


def replay(sequence: ReductionSequence, snapshots: bool = True) -> Iterator[Trigraph]:
    return sequence.replay(snapshots=snapshots)


def sequence_width(sequence: ReductionSequence, f: Callable[[Graph], int]) -> int:
    """max_i f(red graph of step i), the base trigraph included."""
    best = 0
    for tg in sequence.replay(snapshots=False):
        red, _ = tg.red_graph()
        best = max(best, f(red))
    return best


def ordering_stretch(tg: Trigraph, order: list[int]) -> int:
    """Largest red-edge index distance under the given ordering of live ids."""
    pos = {v: i for i, v in enumerate(order)}
    live = set(tg.black)
    if live - pos.keys():
        raise InvalidMergeError("witness ordering misses live vertices")
    return max((abs(pos[u] - pos[v]) for u, v in tg.red_edges()), default=0)


def sequence_witness_width(sequence: ReductionSequence) -> int:
    """Bandwidth upper bound certified by the per-step witness orderings."""
    if sequence.witnesses is None:
        raise InvalidMergeError("sequence carries no witnesses")
    best = 0
    it = sequence.replay(snapshots=False)
    next(it)  # base has no red edges
    for tg, order in zip(it, sequence.witnesses):
        best = max(best, ordering_stretch(tg, order))
    return best
