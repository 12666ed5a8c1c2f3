"""Deterministic generators for the named constructions.

Every generator is a pure function of its parameters; regenerating yields
identical structures byte for byte. Vertex group names ("Q.0", "A1.2", ...)
are kept so checkers can verify group-structural claims.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import GadgetParameterError
from .graph import Graph, complete_graph, iter_bits, path_graph
from .params import max_degree
from .product import ProductCertificate, RootedTreeDecomposition, chain_path_decomposition
from .trigraph import Merge, ReductionSequence, Trigraph


# ---------------------------------------------------------------------------
# the three-armed blob gadget

@dataclass
class BlobGadget:
    graph: Graph
    x: int
    q: int
    r: int
    groups: dict[str, list[int]]      # "Q", "A1".."Ax", "B1".., "C1"..
    names: dict[int, str]             # vertex -> "Q.0", "A1.2", ...

    def layer_of(self, v: int) -> tuple[str, int]:
        name = self.names[v].split(".")[0]
        if name == "Q":
            return ("Q", 0)
        return (name[0], int(name[1:]))

    def arm_ordering(self) -> list[int]:
        """A_x,...,A_1, Q, B_1, C_1, B_2, C_2, ...: the stretch witness."""
        out = []
        for i in range(self.x, 0, -1):
            out.extend(self.groups[f"A{i}"])
        out.extend(self.groups["Q"])
        for i in range(1, self.x + 1):
            out.extend(self.groups[f"B{i}"])
            out.extend(self.groups[f"C{i}"])
        return out


def gen_s_star(x: int, q: int) -> BlobGadget:
    """Centre clique of 2q-1 vertices and three arms of x layers of q
    vertices, consecutive layers (and the centre with each first layer)
    completely joined."""
    if q < 2 or x < 1:
        raise GadgetParameterError("need q >= 2 and x >= 1")
    groups: dict[str, list[int]] = {}
    names: dict[int, str] = {}
    nxt = 0

    def block(name: str, size: int) -> list[int]:
        nonlocal nxt
        ids = list(range(nxt, nxt + size))
        nxt += size
        groups[name] = ids
        for j, v in enumerate(ids):
            names[v] = f"{name}.{j}"
        return ids

    block("Q", 2 * q - 1)
    for arm in "ABC":
        for i in range(1, x + 1):
            block(f"{arm}{i}", q)
    g = Graph(nxt)

    def join_clique(vs):
        for i, u in enumerate(vs):
            for v in vs[i + 1:]:
                g.add_edge(u, v)

    for arm in "ABC":
        join_clique(groups["Q"] + groups[f"{arm}1"])
        for i in range(1, x):
            join_clique(groups[f"{arm}{i}"] + groups[f"{arm}{i + 1}"])
    return BlobGadget(g, x, q, 1, groups, names)


def gen_s(x: int, q: int, r: int) -> BlobGadget:
    """r-th power of the starred gadget with every edge between the two
    forward arms removed."""
    if r < 1:
        raise GadgetParameterError("need r >= 1")
    star = gen_s_star(x, q)
    g = star.graph.power(r)
    bmask = 0
    cmask = 0
    for i in range(1, x + 1):
        for v in star.groups[f"B{i}"]:
            bmask |= 1 << v
        for v in star.groups[f"C{i}"]:
            cmask |= 1 << v
    for v in iter_bits(bmask):
        g.adj[v] &= ~cmask
    for v in iter_bits(cmask):
        g.adj[v] &= ~bmask
    return BlobGadget(g, x, q, r, star.groups, star.names)


# ---------------------------------------------------------------------------
# trees and grids

def gen_q_tree(n: int) -> Graph:
    """n disjoint n-vertex paths whose first vertices are joined in a rail:
    max degree 3, n^2 vertices, pathwidth 2, but large bandwidth."""
    if n < 1:
        raise GadgetParameterError("need n >= 1")
    g = Graph(n * n)
    for i in range(n):
        for j in range(n - 1):
            g.add_edge(i * n + j, i * n + j + 1)
    for i in range(n - 1):
        g.add_edge(i * n, (i + 1) * n)
    return g


def gen_binary_tree(height: int) -> Graph:
    """Complete binary tree with edge-height ``height``: 2^(h+1)-1 vertices."""
    if height < 0:
        raise GadgetParameterError("need height >= 0")
    n = 2 ** (height + 1) - 1
    g = Graph(n)
    for v in range(n):
        for c in (2 * v + 1, 2 * v + 2):
            if c < n:
                g.add_edge(v, c)
    return g


def gen_grid(m: int, n: int) -> tuple[Graph, ProductCertificate]:
    """m x n grid, vertex (i, j) at id i*n+j, plus its product certificate:
    host path on the m rows with the chain decomposition, path of length n,
    cell (i, j) embedded at (row i, position j)."""
    if m < 1 or n < 1:
        raise GadgetParameterError("need m, n >= 1")
    g = Graph(m * n)
    for i in range(m):
        for j in range(n):
            if i + 1 < m:
                g.add_edge(i * n + j, (i + 1) * n + j)
            if j + 1 < n:
                g.add_edge(i * n + j, i * n + j + 1)
    host = path_graph(m)
    decomp = chain_path_decomposition(m)
    embed = {i * n + j: (i, j) for i in range(m) for j in range(n)}
    cert = ProductCertificate(host, decomp, n, embed, (), 1)
    return g, cert


# ---------------------------------------------------------------------------
# blowups and red trigraphs

def blowup2(g: Graph) -> tuple[Graph, dict[int, tuple[int, int]]]:
    """Two non-adjacent copies per vertex, each edge replaced by all four
    cross pairs. Returns the blowup and copy labels (source, copy index)."""
    out = Graph(2 * g.n)
    labels = {}
    for v in range(g.n):
        labels[2 * v] = (v, 1)
        labels[2 * v + 1] = (v, 2)
    for u, v in g.edges():
        for a in (2 * u, 2 * u + 1):
            for b in (2 * v, 2 * v + 1):
                out.add_edge(a, b)
    return out, labels


def red_of(g: Graph) -> Trigraph:
    """Trigraph with exactly g's edges, all red."""
    return Trigraph(g.n, red=g.edges())


# ---------------------------------------------------------------------------
# cliques-joined-by-matchings construction

@dataclass
class MatchedCliques:
    graph: Graph
    source: Graph
    t: int
    group_of: dict[int, int]                     # vertex of G -> source vertex
    canonical: ReductionSequence
    blowup_maps: list[dict[int, tuple[int, int]]]  # per step, live -> (source, copy)


def gen_t_of(h: Graph, t_override: int | None = None) -> MatchedCliques:
    """One t-clique per source vertex, matchings along source edges, and the
    canonical partial sequence folding each clique to a point.

    The canonical sequence runs in rounds: round k identifies every clique's
    accumulated vertex with its (k+1)-th member, in source-vertex order. It
    ends at the all-red copy of the source graph, never merges across
    cliques, keeps every red degree at most twice the source degree, and
    every red component maps edge-preservingly into the 2-blowup of the
    source; the per-step maps are emitted and checked by the caller.

    The published construction needs t around |V|^|V|, far past desk scale;
    any t >= 2 preserves the constructive properties, so a small default is
    used.
    """
    if h.n < 1 or not h.is_connected():
        raise GadgetParameterError("source graph must be connected")
    t = t_override if t_override is not None else max(3, 2 * max_degree(h) + 2)
    if t < 2:
        raise GadgetParameterError("need t >= 2")
    g = Graph(h.n * t)

    def vid(v: int, i: int) -> int:
        return v * t + i

    for v in range(h.n):
        for i in range(t):
            for j in range(i + 1, t):
                g.add_edge(vid(v, i), vid(v, j))
    for u, v in h.edges():
        for i in range(t):
            g.add_edge(vid(u, i), vid(v, i))

    base = Trigraph.from_graph(g)
    group_of = {vid(v, i): v for v in range(h.n) for i in range(t)}
    cur = base.copy()
    merges: list[Merge] = []
    maps: list[dict[int, tuple[int, int]]] = []
    acc = {v: vid(v, 0) for v in range(h.n)}

    for k in range(1, t):
        for v in range(h.n):
            nxt, m = cur.contract_merge(acc[v], vid(v, k))
            merges.append(m)
            group_of[m.w] = v
            acc[v] = m.w
            cur = nxt
            maps.append(_blowup_map_of(cur, group_of))
    seq = ReductionSequence(base, merges)
    return MatchedCliques(g, h, t, group_of, seq, maps)


def _blowup_map_of(tri: Trigraph, group_of: dict[int, int]) -> dict[int, tuple[int, int]]:
    """Assign each red-incident live vertex a copy slot of its source vertex.

    At most two live vertices per source group ever touch red edges, so the
    two blowup copies suffice; violations raise immediately.
    """
    touched: dict[int, list[int]] = {}
    for fid in sorted(tri.black):
        if tri.red[fid]:
            touched.setdefault(group_of[fid], []).append(fid)
    out: dict[int, tuple[int, int]] = {}
    for grp, fids in touched.items():
        if len(fids) > 2:
            raise AssertionError(
                f"{len(fids)} red-incident vertices in group {grp}, blowup map impossible")
        for copy, fid in enumerate(sorted(fids), start=1):
            out[fid] = (grp, copy)
    return out


# ---------------------------------------------------------------------------
# tightness instances

def gen_stacked_triangulation(n: int, seed: int = 0xC0FFEE) -> tuple[Graph, list[tuple[int, int, int]]]:
    """Planar triangulation grown by repeatedly placing a vertex inside a
    face chosen by the seeded generator. Returns the graph and its faces."""
    if n < 4:
        raise GadgetParameterError("need n >= 4")
    rng = random.Random(seed)
    g = complete_graph(4)
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    for v in range(4, n):
        idx = rng.randrange(len(faces))
        a, b, c = faces.pop(idx)
        g2 = Graph(v + 1)
        g2.adj[:v] = list(g.adj)
        g = g2
        for u in (a, b, c):
            g.add_edge(v, u)
        faces.extend([(a, b, v), (a, c, v), (b, c, v)])
    return g, faces


def _planar_faces(g: Graph) -> list[tuple[int, ...]]:
    import networkx as nx

    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    ok, emb = nx.check_planarity(nxg)
    if not ok:
        raise GadgetParameterError("graph is not planar")
    seen = set()
    faces = []
    for u in range(g.n):
        for v in emb[u]:
            if (u, v) in seen:
                continue
            face = emb.traverse_face(u, v, mark_half_edges=seen)
            faces.append(tuple(face))
    return faces


@dataclass
class SurfaceTightInstance:
    graph: Graph
    x_side: list[int]
    y_side: list[int]
    degree_classes: dict[int, list[int]]  # y-degree -> vertices


def gen_tight_surface_pi1(g0: Graph, faces: list[tuple[int, ...]] | None = None) -> SurfaceTightInstance:
    """Bipartite instance meeting the planar diversity bound 6|X|-9 exactly.

    From a planar triangulation: one vertex per face joined to its three
    corners, one vertex per edge joined to its ends (the subdivision
    points), one pendant per corner, one isolated vertex. The corners form
    X; every Y vertex has a distinct neighbourhood, and counting by degree
    gives 1 + |X| + 3(|X|-2) + 2(|X|-2) = 6|X|-9 classes.
    """
    if g0.n < 4:
        raise GadgetParameterError("triangulation needs >= 4 vertices")
    if faces is None:
        faces = _planar_faces(g0)
    if g0.m != 3 * g0.n - 6:
        raise GadgetParameterError("edge count does not match a triangulation")
    if any(len(f) != 3 for f in faces) or len(faces) != 2 * g0.n - 4:
        raise GadgetParameterError("face list does not describe a triangulation")
    x = g0.n
    edges0 = g0.edges()
    total = x + len(faces) + len(edges0) + x + 1
    g = Graph(total)
    classes: dict[int, list[int]] = {0: [], 1: [], 2: [], 3: []}
    nxt = x
    for f in faces:
        for u in f:
            g.add_edge(nxt, u)
        classes[3].append(nxt)
        nxt += 1
    for u, v in edges0:
        g.add_edge(nxt, u)
        g.add_edge(nxt, v)
        classes[2].append(nxt)
        nxt += 1
    for u in range(x):
        g.add_edge(nxt, u)
        classes[1].append(nxt)
        nxt += 1
    classes[0].append(nxt)
    return SurfaceTightInstance(g, list(range(x)), list(range(x, total)), classes)


@dataclass
class KTreeTightInstance:
    graph: Graph
    ktree: Graph
    x_side: list[int]
    y_side: list[int]
    decomposition: "object"


def gen_tight_ktree_pi1(k: int, n: int) -> KTreeTightInstance:
    """Bipartite instance meeting the treewidth diversity bound exactly.

    X carries a k-tree on n vertices (its edges are not part of the
    instance); Y holds one vertex per clique of order at most k in the
    k-tree, joined to that clique, so |Y| = 2^k (n-k+1) - n + k. A width-k
    tree-decomposition is emitted: the k-tree's bags plus one bag per
    clique extended by its Y vertex.
    """
    from .params import TreeDecomposition

    if k < 1 or n < k:
        raise GadgetParameterError("need n >= k >= 1")
    h = Graph(n)
    for u in range(min(k, n)):
        for v in range(u + 1, min(k, n)):
            h.add_edge(u, v)
    for v in range(k, n):
        for u in range(v - k, v):
            h.add_edge(v, u)

    cliques: list[tuple[int, ...]] = []

    def enum(cand: list[int], cur: tuple[int, ...]) -> None:
        cliques.append(cur)
        if len(cur) == k:
            return
        for i, u in enumerate(cand):
            enum([w for w in cand[i + 1:] if h.has_edge(u, w)], cur + (u,))

    enum(list(range(n)), ())

    g = Graph(n + len(cliques))
    y_side = []
    hbags = []
    if n == k:
        hbags.append(frozenset(range(n)))
    else:
        for v in range(k, n):
            hbags.append(frozenset(range(v - k, v + 1)))
    bag_sets = list(hbags)
    parent = [-1] + list(range(len(hbags) - 1))
    for idx, c in enumerate(cliques):
        y = n + idx
        y_side.append(y)
        for u in c:
            g.add_edge(y, u)
        holder = next(i for i, b in enumerate(hbags) if set(c) <= b)
        bag_sets.append(frozenset(c) | {y})
        parent.append(holder)
    td = TreeDecomposition(bag_sets, parent, 0)
    return KTreeTightInstance(g, h, list(range(n)), y_side, td)
