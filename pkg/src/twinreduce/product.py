"""Strong products, rooted tree-decompositions, and sequence builders.

The builders turn a product certificate (graph embedded in the strong
product of a host graph H and a path, optionally joined to an apex clique)
into a full identification sequence whose red graphs all fit inside the
three-armed blob template S(x, q, r): a centre of 2q-1 vertices, chains of
q-vertex layers on three arms, consecutive layers completely joined, all
raised to the r-th power, with every edge between the two forward arms
removed. The centre has the largest degree, (3r+2)q-2, and laying out the
template arm by arm gives a vertex ordering of stretch (2r+2)q-2.

The construction walks the decomposition from the deepest bags upward,
shrinking rows of the product by identifying vertices with equal
neighbourhoods on the far side of a rooted separation, which never creates
a red edge towards that side. Every intermediate red graph is certified on
the spot: the builder emits a template injection (zone, arm, layer) per
live vertex plus the arm-by-arm ordering, and the step is checked against
the template adjacency rule, the layer capacities, and the stretch bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CertificateError, PigeonholeError, TwinreduceError
from .graph import Graph, iter_bits, popcount
from .trigraph import Merge, ReductionSequence, Trigraph


# ---------------------------------------------------------------------------
# strong product

def strong_product(a: Graph, b: Graph) -> Graph:
    """Graph on pairs (u, v), linearised as u * b.n + v: pairs are adjacent
    when each coordinate is equal or adjacent, and not both equal."""
    g = Graph(a.n * b.n)
    for u in range(a.n):
        for v in range(b.n):
            base = u * b.n + v
            for w in iter_bits(b.adj[v]):
                if w > v:
                    g.add_edge(base, u * b.n + w)
            for x in iter_bits(a.adj[u]):
                if x > u:
                    g.add_edge(base, x * b.n + v)
                    for w in iter_bits(b.adj[v]):
                        g.add_edge(base, x * b.n + w)
    return g


def product_index(h: int, p: int, path_len: int) -> int:
    return h * path_len + p


# ---------------------------------------------------------------------------
# rooted tree-decompositions

@dataclass
class RootedTreeDecomposition:
    """Bags indexed by node id with parent pointers; parent[root] is None."""

    bags: dict[int, frozenset[int]]
    parent: dict[int, int | None]
    root: int

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {n: [] for n in self.bags}
        for n, p in self.parent.items():
            if p is not None:
                ch[p].append(n)
        for lst in ch.values():
            lst.sort()
        return ch

    def leaves(self) -> list[int]:
        ch = self.children()
        return sorted(n for n in self.bags if n != self.root and not ch[n])

    def is_internal(self, node: int) -> bool:
        return node == self.root or bool(self.children()[node])

    def validate(self, h: Graph) -> None:
        if self.root not in self.bags or self.parent[self.root] is not None:
            raise CertificateError("bad root")
        ch = self.children()
        seen = set()
        stack = [self.root]
        while stack:
            n = stack.pop()
            seen.add(n)
            stack.extend(ch[n])
        if seen != set(self.bags):
            raise CertificateError("decomposition tree is not connected")
        for u, v in h.edges():
            if not any(u in bag and v in bag for bag in self.bags.values()):
                raise CertificateError(f"host edge ({u},{v}) not covered by a bag")
        for v in range(h.n):
            holding = {n for n, bag in self.bags.items() if v in bag}
            if not holding:
                raise CertificateError(f"host vertex {v} in no bag")
            start = next(iter(holding))
            comp = {start}
            stack = [start]
            while stack:
                n = stack.pop()
                for m in ch[n] + ([self.parent[n]] if self.parent[n] is not None else []):
                    if m in holding and m not in comp:
                        comp.add(m)
                        stack.append(m)
            if comp != holding:
                raise CertificateError(f"bags holding host vertex {v} are disconnected")

    def rooted_parameters(self) -> tuple[int, int]:
        """(k, q_min): k from the largest internal bag, q_min from the
        largest leaf-over-parent difference. Root bag must be empty."""
        if self.bags[self.root]:
            raise CertificateError("root bag is not empty")
        ch = self.children()
        k = 0
        q_min = 1
        for n, bag in self.bags.items():
            if n == self.root or ch[n]:
                k = max(k, len(bag) - 1)
            else:
                q_min = max(q_min, len(bag - self.bags[self.parent[n]]))
        return max(k, 0), q_min


def chain_path_decomposition(m: int) -> RootedTreeDecomposition:
    """(1, q)-rooted decomposition of the m-vertex path: empty root bag then
    the edge bags {i, i+1} in a chain."""
    bags = {0: frozenset()}
    parent: dict[int, int | None] = {0: None}
    if m == 1:
        bags[1] = frozenset({0})
        parent[1] = 0
    else:
        for i in range(m - 1):
            bags[i + 1] = frozenset({i, i + 1})
            parent[i + 1] = i
    return RootedTreeDecomposition(bags, parent, 0)


# ---------------------------------------------------------------------------
# certificates

@dataclass
class ProductCertificate:
    """Embedding of a subject trigraph into (H x P) + K_a.

    embed maps subject vertex ids to (host vertex, path position); apex
    lists subject ids living on the clique side; r is the power radius the
    row-distance conditions are checked against.
    """

    host: Graph
    decomp: RootedTreeDecomposition
    path_len: int
    embed: dict[int, tuple[int, int]]
    apex: tuple[int, ...] = ()
    r: int = 1


@dataclass
class CertificateReport:
    ok: bool
    k: int
    q_min: int
    conditions: dict[str, str]
    violations: list[str] = field(default_factory=list)


def validate_certificate(cert: ProductCertificate, f: Trigraph,
                         apex_mode: bool | None = None) -> CertificateReport:
    """Static check of a certificate against a subject trigraph.

    Verifies the decomposition, the (k, q)-rooted shape, embedding
    consistency, the red edge condition (red edges confined to a single
    leaf zone, and within r path positions when apex vertices are present),
    and the row-span condition on all edges in the apex-free case. The
    separation condition cannot be enumerated cheaply, so it is reported as
    deferred: the builders enforce it constructively and fail with a named
    pigeonhole violation if it does not hold.
    """
    if apex_mode is None:
        apex_mode = bool(cert.apex)
    violations: list[str] = []
    conditions: dict[str, str] = {}
    cert.decomp.validate(cert.host)
    k, q_min = cert.decomp.rooted_parameters()
    if cert.path_len < 1:
        raise CertificateError("path must have at least one vertex")
    if cert.r < 1:
        raise CertificateError("power radius must be at least 1")

    live = set(f.black)
    apex = set(cert.apex)
    if apex & set(cert.embed):
        violations.append("apex vertices also appear in the embedding")
    if set(cert.embed) | apex != live:
        violations.append("embedding plus apex does not cover the subject vertices")
    spots = set()
    for v, (h, p) in cert.embed.items():
        if not (0 <= h < cert.host.n) or not (0 <= p < cert.path_len):
            violations.append(f"vertex {v} embedded outside the product at ({h},{p})")
        if (h, p) in spots:
            violations.append(f"embedding is not injective at ({h},{p})")
        spots.add((h, p))
    conditions["embedding"] = "ok" if not violations else "violated"

    ch = cert.decomp.children()
    zones = []
    for leaf in cert.decomp.leaves():
        zone = cert.decomp.bags[leaf] - cert.decomp.bags[cert.decomp.parent[leaf]]
        zones.append(zone)

    bad_red = None
    for u, v in f.red_edges():
        if u in apex or v in apex:
            bad_red = f"red edge ({u},{v}) touches the apex set"
            break
        hu, pu = cert.embed[u]
        hv, pv = cert.embed[v]
        if not any(hu in z and hv in z for z in zones):
            bad_red = f"red edge ({u},{v}) is not inside a single leaf zone"
            break
        if apex_mode and abs(pu - pv) > cert.r:
            bad_red = f"red edge ({u},{v}) spans {abs(pu - pv)} path positions"
            break
    if bad_red:
        violations.append(bad_red)
        conditions["red-edge"] = "violated: " + bad_red
    else:
        conditions["red-edge"] = "ok"

    if not apex_mode:
        bad_span = None
        for u, v in f.black_edges() + f.red_edges():
            pu, pv = cert.embed[u][1], cert.embed[v][1]
            if abs(pu - pv) > cert.r:
                bad_span = f"edge ({u},{v}) spans {abs(pu - pv)} path positions, limit {cert.r}"
                break
        if bad_span:
            violations.append(bad_span)
            conditions["neighbourhood"] = "violated: " + bad_span
        else:
            conditions["neighbourhood"] = "ok"
    else:
        conditions["neighbourhood"] = "not required with apex vertices"

    conditions["separation"] = "deferred: checked constructively during building"
    return CertificateReport(not violations, k, q_min, conditions, violations)


# ---------------------------------------------------------------------------
# template rule

def template_adjacent(layer_a: tuple[str, int], layer_b: tuple[str, int], r: int) -> bool:
    """Adjacency rule of the blob template between (arm, index) layers.

    The centre Q is index 0; arm layers count outward from 1. Distances in
    the unpowered template are index differences along an arm and index
    sums across arms through the centre, so the r-th power joins layers at
    rule distance at most r. Edges between the two forward arms B and C are
    removed outright.
    """
    (a1, i1), (a2, i2) = layer_a, layer_b
    if a1 == "Q" and a2 == "Q":
        return True
    if a1 == "Q":
        return i2 <= r
    if a2 == "Q":
        return i1 <= r
    if a1 == a2:
        return abs(i1 - i2) <= r
    pair = {a1, a2}
    if pair == {"B", "C"}:
        return False
    return i1 + i2 <= r


# ---------------------------------------------------------------------------
# step records and results

@dataclass
class StepRecord:
    merge: Merge
    phase: int
    layers: dict[int, tuple[int, str, int]]  # live vertex -> (zone, arm, index)
    order: list[int]
    red_delta: int
    stretch: int
    centre_load: int
    arm_load: int


@dataclass
class ProductSequenceResult:
    padded: ReductionSequence
    projected: ReductionSequence
    steps: list[StepRecord]
    q: int
    r: int
    apex_count: int
    auto_q: bool

    @property
    def stretch_bound(self) -> int:
        return (2 * self.r + 2) * (self.q + self.apex_count) - 2

    @property
    def red_degree_bound(self) -> int:
        return (3 * self.r + 2) * (self.q + self.apex_count) - 2

    @property
    def phase1_stretch_bound(self) -> int:
        return (2 * self.r + 2) * self.q - 2

    @property
    def phase1_red_degree_bound(self) -> int:
        return (3 * self.r + 2) * self.q - 2

    @property
    def max_red_delta(self) -> int:
        return max((s.red_delta for s in self.steps), default=0)

    @property
    def max_stretch(self) -> int:
        return max((s.stretch for s in self.steps), default=0)


_APEX_LAYER = (-9, "X", 0)
_PLAIN_LAYER = (-8, "X", 0)


class _SequenceBuilder:
    """Shared engine behind the plain and apex builders.

    Walks the decomposition bottom-up. Each round picks the deepest
    internal bag; pairs of its leaf children (or the bag with its only
    child) define the row sets to shrink, merging same-signature vertices
    row by row, left to right along the path. Rows that survive become a
    fresh clique of column slots forming one new leaf bag. The base case
    sweeps the final zone along the path. Apex mode signs rows against the
    far side extended by out-of-window columns and the apex clique, and
    finishes by folding the surviving vertices and the apex set together.
    """

    def __init__(self, f: Trigraph, cert: ProductCertificate,
                 q: int | None, apex_mode: bool):
        self.cert = cert
        self.r = cert.r
        self.apex_mode = apex_mode
        self.q_input = q
        self.k, q_min = cert.decomp.rooted_parameters()
        if q is not None and q < self.k + 1:
            raise CertificateError(f"q={q} is below k+1={self.k + 1}")
        if q is not None and q_min > q:
            raise CertificateError(
                f"a leaf bag adds {q_min} vertices over its parent, above q={q}")
        self.q_seen = self.k + 1 if q is None else q
        self.ell = cert.path_len

        self.real_ids = sorted(f.black)
        next_fid = max(self.real_ids, default=-1) + 1
        self.spot_to_fid: dict[tuple[int, int], int] = {}
        self.unit_of: dict[int, int] = {}
        self.row_of: dict[int, int] = {}
        self.apex_fids = set(cert.apex)
        labels = {}
        for v in self.real_ids:
            labels[v] = frozenset([v])
        base = Trigraph(0)
        base.black = {v: 0 for v in self.real_ids}
        base.red = {v: 0 for v in self.real_ids}
        base.labels = labels
        base.next_id = next_fid
        for v, (h, p) in cert.embed.items():
            self.spot_to_fid[(h, p)] = v
            self.unit_of[v] = h
            self.row_of[v] = p
        self.virtual_ids = []
        for h in range(cert.host.n):
            for p in range(self.ell):
                if (h, p) not in self.spot_to_fid:
                    fid = base.next_id
                    base.black[fid] = 0
                    base.red[fid] = 0
                    base.labels[fid] = frozenset([fid])
                    base.next_id = fid + 1
                    self.spot_to_fid[(h, p)] = fid
                    self.unit_of[fid] = h
                    self.row_of[fid] = p
                    self.virtual_ids.append(fid)
        for u, v in f.black_edges():
            base.add_edge(u, v, "black")
        for u, v in f.red_edges():
            base.add_edge(u, v, "red")

        self.base = base
        self.tri = base.copy()
        self.lab = {v: v for v in self.tri.black}
        self.members: dict[int, set[int]] = {h: set() for h in range(cert.host.n)}
        for fid, unit in self.unit_of.items():
            self.members[unit].add(fid)

        d = cert.decomp
        self.bags: dict[int, frozenset[int]] = dict(d.bags)
        self.parent: dict[int, int | None] = dict(d.parent)
        self.root = d.root
        self.next_node = max(self.bags) + 1
        self.next_unit = cert.host.n
        self.zone_of_unit: dict[int, int] = {}
        self.next_zone = 0
        for leaf in d.leaves():
            zone = d.bags[leaf] - d.bags[d.parent[leaf]]
            zid = self.next_zone
            self.next_zone += 1
            for u in zone:
                self.zone_of_unit[u] = zid
            self.q_seen = max(self.q_seen, len(zone))

        self.merges: list[Merge] = []
        self.steps: list[StepRecord] = []
        self.phase = 1
        self.context: dict | None = None

    # ------------------------------------------------------------- helpers

    def _children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {n: [] for n in self.bags}
        for n, p in self.parent.items():
            if p is not None:
                ch[p].append(n)
        for lst in ch.values():
            lst.sort()
        return ch

    def _deepest_internal(self) -> tuple[int, dict[int, list[int]]]:
        ch = self._children()
        depth = {self.root: 0}
        preorder = {}
        stack = [self.root]
        count = 0
        while stack:
            n = stack.pop()
            preorder[n] = count
            count += 1
            for c in reversed(ch[n]):
                depth[c] = depth[n] + 1
                stack.append(c)
        internal = [n for n in self.bags if n == self.root or ch[n]]
        best = max(internal, key=lambda n: (depth[n], -preorder[n]))
        return best, ch

    def _mask_of_units(self, units) -> int:
        mask = 0
        for u in units:
            for fid in self.members.get(u, ()):  # live members only
                mask |= 1 << fid
        return mask

    def _signature(self, fid: int, side_mask: int) -> int:
        return (self.tri.black[fid] | self.tri.red[fid]) & side_mask

    def _merge_pair(self, u: int, v: int) -> int:
        w = self.tri.next_id
        self.tri._contract_inplace(u, v, w)
        self.merges.append(Merge(u, v, w))
        self.lab[w] = min(self.lab.pop(u), self.lab.pop(v))
        return w

    # ------------------------------------------------------------ snapshots

    def _layer_of(self, fid: int) -> tuple[int, str, int]:
        ctx = self.context
        if fid in self.apex_fids:
            return _APEX_LAYER
        if ctx is not None and fid in ctx["active"]:
            row = self.row_of[fid]
            i = ctx["row"]
            if ctx["kind"] == "base":
                if row >= i + 1:
                    return (-1, "B", row - i)
                return (-1, "Q", 0)
            if row == i:
                return (-1, "Q", 0)
            if row < i:
                return (-1, "A", i - row)
            side = ctx["side"].get(self.unit_of.get(fid), "B")
            return (-1, side, row - i)
        if ctx is not None and ctx["kind"] == "part2":
            return (-2, "Q", 0)
        unit = self.unit_of.get(fid)
        zid = self.zone_of_unit.get(unit)
        if zid is None:
            return _PLAIN_LAYER
        return (zid, "A", self.row_of[fid] + 1)

    def _snapshot(self, merge: Merge) -> None:
        tri = self.tri
        layers = {fid: self._layer_of(fid) for fid in tri.black}
        # arm-by-arm ordering: per zone ascending, A arms outside-in, centre,
        # then forward arms interleaved by layer index
        def sort_key(fid: int):
            z, arm, idx = layers[fid]
            if arm == "X":
                return (10 ** 9, 0, 0, self.lab[fid])
            if arm == "Q":
                block = 0.0
            elif arm == "A":
                block = -idx
            elif arm == "B":
                block = idx - 0.25
            else:
                block = idx + 0.25
            return (z, 0, block, self.lab[fid])

        order = sorted(tri.black, key=sort_key)
        pos = {fid: i for i, fid in enumerate(order)}

        stretch = 0
        red_delta = tri.max_red_degree()
        loads: dict[tuple[int, str, int], int] = {}
        for fid in tri.black:
            key = layers[fid]
            loads[key] = loads.get(key, 0) + 1
        centre_load = max((c for k, c in loads.items() if k[1] == "Q"), default=0)
        arm_load = max((c for k, c in loads.items() if k[1] in "ABC" and k[0] >= -1), default=0)

        for u, v in tri.red_edges():
            stretch = max(stretch, abs(pos[u] - pos[v]))
            la, lb = layers[u], layers[v]
            if self.phase == 1:
                if la[1] == "X" or lb[1] == "X":
                    raise AssertionError(
                        f"red edge ({u},{v}) touches a column outside every zone")
                if la[0] != lb[0]:
                    raise AssertionError(f"red edge ({u},{v}) crosses zones {la[0]}/{lb[0]}")
                if not template_adjacent((la[1], la[2]), (lb[1], lb[2]), self.r):
                    raise AssertionError(
                        f"red edge ({u},{v}) violates the template rule: {la} vs {lb}")
        self.steps.append(StepRecord(
            merge, self.phase, layers, order, red_delta, stretch, centre_load, arm_load))

    # ------------------------------------------------------------ reduction

    def _reduce_rows(self, reduce_units: frozenset[int], side: dict[int, str],
                     d_units: set[int], sep_name: str) -> list[list[int]]:
        """Shrink every row of the reduce columns by same-signature merging.

        Returns survivors per row. With a fixed q each row stops at q
        vertices and raises a pigeonhole failure when the signature classes
        are too many; in auto mode every class folds to one vertex.
        """
        cert_r = self.r
        d_mask_static = self._mask_of_units(d_units)
        apex_mask = sum(1 << a for a in self.apex_fids)
        survivors: list[list[int]] = []
        active = set()
        for u in reduce_units:
            active |= self.members.get(u, set())
        row_fids: dict[int, list[int]] = {}
        for fid in active:
            row_fids.setdefault(self.row_of[fid], []).append(fid)
        self.context = {
            "kind": "reduction", "active": set(active), "row": -1, "side": side,
        }
        for z in range(self.ell):
            fids = sorted(row_fids.get(z, []), key=lambda f: self.lab[f])
            if not fids:
                survivors.append([])
                continue
            self.context["row"] = z
            side_mask = d_mask_static
            if self.apex_mode:
                side_mask |= apex_mask
                far = 0
                for fid in active:
                    if fid in self.tri.black and abs(self.row_of[fid] - z) > cert_r:
                        far |= 1 << fid
                side_mask |= far
            groups: dict[int, list[int]] = {}
            for fid in fids:
                groups.setdefault(self._signature(fid, side_mask), []).append(fid)
            classes = sorted(groups.values(), key=lambda c: (-len(c), self.lab[c[0]]))
            total = len(fids)
            target = self.q_input if self.q_input is not None else len(classes)
            if total > target and all(len(c) == 1 for c in classes):
                raise PigeonholeError(
                    f"row {z} of separation {sep_name} holds {len(classes)} distinct "
                    f"signatures on the protected side, above the target {target}",
                    separation=sep_name, row=z, signatures=len(classes), side="M1")
            row_live: list[int] = []
            for cls in classes:
                cls = sorted(cls, key=lambda f: self.lab[f])
                cur = cls[0]
                for nxt in cls[1:]:
                    if total <= target:
                        row_live.append(cur)
                        cur = nxt
                        continue
                    w = self._merge_pair(cur, nxt)
                    self.row_of[w] = z
                    self.context["active"].add(w)
                    active.add(w)
                    total -= 1
                    self._snapshot(self.merges[-1])
                    cur = w
                row_live.append(cur)
            if total > target:
                raise PigeonholeError(
                    f"row {z} of separation {sep_name} cannot reach {target} vertices: "
                    f"{len(classes)} signature classes remain",
                    separation=sep_name, row=z, signatures=len(classes), side="M1")
            survivors.append(sorted(row_live, key=lambda f: self.lab[f]))
        self.context = None
        return survivors

    def _install_zone(self, survivors: list[list[int]], reduce_units: frozenset[int],
                      keep: frozenset[int], attach_to: int, removed: list[int]) -> None:
        width = max((len(row) for row in survivors), default=0)
        slots = list(range(self.next_unit, self.next_unit + width))
        self.next_unit += width
        zid = self.next_zone
        self.next_zone += 1
        for u in reduce_units:
            self.members.pop(u, None)
            self.zone_of_unit.pop(u, None)
        for s in slots:
            self.members[s] = set()
            self.zone_of_unit[s] = zid
        for row in survivors:
            for j, fid in enumerate(row):
                self.unit_of[fid] = slots[j]
                self.members[slots[j]].add(fid)
        self.q_seen = max(self.q_seen, width)
        for node in removed:
            del self.bags[node], self.parent[node]
        node = self.next_node
        self.next_node += 1
        self.bags[node] = frozenset(slots) | keep
        self.parent[node] = attach_to

    # ------------------------------------------------------------ base case

    def _base_sweep(self, leaf: int) -> None:
        """Left-to-right fold of the final zone.

        The running group absorbs one row at a time. Without apex vertices
        every pair in the group has the same (empty) protected
        neighbourhood, so the group folds to a single vertex, mirroring the
        two-bag case. With apex vertices the group splits by neighbourhood
        on the rows at least r+1 positions ahead plus the apex clique, and
        each class folds to one vertex.
        """
        apex_mask = sum(1 << a for a in self.apex_fids)
        alive_products = [f for f in self.tri.black if f not in self.apex_fids]
        self.context = {"kind": "base", "active": set(alive_products), "row": 0}
        group: list[int] = []
        for p in range(self.ell):
            self.context["row"] = p
            row = sorted(
                (f for f in alive_products
                 if f in self.tri.black and self.row_of[f] == p),
                key=lambda f: self.lab[f])
            group = sorted(group + row, key=lambda f: self.lab[f])
            if not group:
                continue
            if self.apex_mode:
                side_mask = apex_mask
                for f in alive_products:
                    if f in self.tri.black and self.row_of[f] >= p + self.r + 1:
                        side_mask |= 1 << f
            else:
                side_mask = 0
            classes: dict[int, list[int]] = {}
            for f in group:
                classes.setdefault(self._signature(f, side_mask), []).append(f)
            if self.q_input is not None and len(classes) > self.q_input:
                raise PigeonholeError(
                    f"base sweep at position {p} holds {len(classes)} signature "
                    f"classes on the forward side, above q={self.q_input}",
                    row=p, signatures=len(classes), side="M2")
            folded: list[int] = []
            for cls in sorted(classes.values(), key=lambda c: (-len(c), self.lab[c[0]])):
                cls = sorted(cls, key=lambda f: self.lab[f])
                cur = cls[0]
                for nxt in cls[1:]:
                    w = self._merge_pair(cur, nxt)
                    self.row_of[w] = p
                    self.unit_of[w] = self.unit_of.get(cls[0], -1)
                    self.context["active"].add(w)
                    alive_products.append(w)
                    self._snapshot(self.merges[-1])
                    cur = w
                folded.append(cur)
            group = folded
            for f in group:
                self.row_of[f] = p
            self.q_seen = max(self.q_seen, len(group))
        self.context = None

    def _final_fold(self) -> None:
        """Fold the surviving vertices, apex included, into one vertex."""
        self.phase = 2
        self.context = {"kind": "part2", "active": set()}
        live = sorted(self.tri.black, key=lambda f: self.lab[f])
        cur = live[0]
        for nxt in live[1:]:
            w = self._merge_pair(cur, nxt)
            self._snapshot(self.merges[-1])
            cur = w
        self.context = None

    # ----------------------------------------------------------------- run

    def run(self) -> ProductSequenceResult:
        if self.tri.n > 1:
            while len(self.bags) > 2:
                bag_node, ch = self._deepest_internal()
                kids = ch[bag_node]
                bag = self.bags[bag_node]
                if len(kids) >= 2:
                    q1, q2 = kids[0], kids[1]
                    reduce_units = frozenset((self.bags[q1] | self.bags[q2]) - bag)
                    if self.q_input is not None and len(reduce_units) <= self.q_input:
                        # fold the two leaves into one leaf bag, no merging
                        node = self.next_node
                        self.next_node += 1
                        self.bags[node] = self.bags[q1] | self.bags[q2]
                        self.parent[node] = bag_node
                        zid = self.next_zone
                        self.next_zone += 1
                        for u in reduce_units:
                            self.zone_of_unit[u] = zid
                        for n in (q1, q2):
                            del self.bags[n], self.parent[n]
                        continue
                    side = {}
                    for u in self.bags[q1] - bag:
                        side[u] = "B"
                    for u in self.bags[q2] - bag:
                        side[u] = "C"
                    d_units = set(self.members) - set(reduce_units)
                    name = f"children {sorted(self.bags[q1] - bag)}+{sorted(self.bags[q2] - bag)} of bag {sorted(bag)}"
                    survivors = self._reduce_rows(reduce_units, side, d_units, name)
                    self._install_zone(survivors, reduce_units, bag, bag_node, [q1, q2])
                else:
                    q_node = kids[0]
                    parent = self.parent[bag_node]
                    y = bag & self.bags[parent]
                    reduce_units = frozenset((bag | self.bags[q_node]) - y)
                    side = {}
                    for u in bag - y:
                        side[u] = "B"
                    for u in self.bags[q_node] - bag:
                        side[u] = "C"
                    d_units = set(self.members) - set(reduce_units)
                    name = f"bag {sorted(bag)} with child {sorted(self.bags[q_node] - bag)} over {sorted(y)}"
                    survivors = self._reduce_rows(reduce_units, side, d_units, name)
                    self._install_zone(survivors, reduce_units, y, parent, [q_node, bag_node])
            leaf = next(n for n in self.bags if n != self.root)
            self._base_sweep(leaf)
            if self.tri.n > 1:
                self._final_fold()

        q_final = self.q_input if self.q_input is not None else self.q_seen
        witnesses = [list(s.order) for s in self.steps]
        padded = ReductionSequence(self.base, list(self.merges), witnesses)
        projected = _project_with_witnesses(padded, set(self.real_ids))
        result = ProductSequenceResult(
            padded, projected, self.steps, q_final, self.r,
            len(self.apex_fids), self.q_input is None)
        _validate_result(result)
        return result


def _project_with_witnesses(padded: ReductionSequence, keep: set[int]) -> ReductionSequence:
    proj = padded.project(keep)
    if padded.witnesses is None:
        return proj
    kept_sorted = [v for v in sorted(padded.base.black) if v in keep]
    index = {v: i for i, v in enumerate(kept_sorted)}
    rep: dict[int, int | None] = {v: index.get(v) for v in padded.base.black}
    fresh = len(kept_sorted)
    witnesses = []
    for (u, v, w), order in zip(padded.merges, padded.witnesses):
        ru, rv = rep.pop(u), rep.pop(v)
        if ru is None:
            rep[w] = rv
        elif rv is None:
            rep[w] = ru
        else:
            rep[w] = fresh
            fresh += 1
            witnesses.append([rep[f] for f in order if rep.get(f) is not None])
    proj.witnesses = witnesses
    return proj


def _validate_result(result: ProductSequenceResult) -> None:
    for step in result.steps:
        if step.phase == 1:
            if step.stretch > result.phase1_stretch_bound:
                raise AssertionError(
                    f"step stretch {step.stretch} above {result.phase1_stretch_bound}")
            if step.red_delta > result.phase1_red_degree_bound:
                raise AssertionError(
                    f"red degree {step.red_delta} above {result.phase1_red_degree_bound}")
            if step.arm_load > result.q:
                raise AssertionError(f"arm layer load {step.arm_load} above q={result.q}")
            if step.centre_load > 2 * result.q - 1:
                raise AssertionError(
                    f"centre load {step.centre_load} above 2q-1={2 * result.q - 1}")
        else:
            if step.stretch > result.stretch_bound:
                raise AssertionError("final fold stretch above (2r+2)(a+q)-2")
            if step.red_delta > result.red_degree_bound:
                raise AssertionError("final fold red degree above (3r+2)(a+q)-2")


# ---------------------------------------------------------------------------
# public builders

def product_path_sequence(f: Trigraph, cert: ProductCertificate,
                          q: int | None = None, r: int | None = None,
                          validate: bool = True) -> ProductSequenceResult:
    """Full identification sequence for a trigraph embedded in H x P.

    q = None lets the builder fold every signature class completely and
    certify the largest class count it encountered; a fixed q reproduces
    the row-to-q behaviour and raises PigeonholeError on a violated
    separation condition. The emitted result carries both the padded
    sequence over the whole product and its projection onto the real
    vertices, with per-step layer witnesses and orderings.
    """
    if r is not None and r != cert.r:
        cert = ProductCertificate(cert.host, cert.decomp, cert.path_len,
                                  cert.embed, cert.apex, r)
    if cert.apex:
        raise CertificateError("certificate has apex vertices, use apex_product_sequence")
    if validate:
        report = validate_certificate(cert, f, apex_mode=False)
        if not report.ok:
            raise CertificateError("; ".join(report.violations))
    return _SequenceBuilder(f, cert, q, apex_mode=False).run()


def apex_product_sequence(f: Trigraph, cert: ProductCertificate,
                          q: int | None = None,
                          validate: bool = True) -> ProductSequenceResult:
    """Sequence for a trigraph embedded in (H x P) + K_a.

    Phase 1 folds the product part into at most q vertices without ever
    creating a red edge at the apex clique (asserted on every step); phase
    2 folds the rest, and the certified bounds use a + q.
    """
    if validate:
        report = validate_certificate(cert, f, apex_mode=True)
        if not report.ok:
            raise CertificateError("; ".join(report.violations))
    return _SequenceBuilder(f, cert, q, apex_mode=True).run()


def power_sequence(g: Graph, cert: ProductCertificate, r: int | None = None,
                   q: int | None = None) -> ProductSequenceResult:
    """Sequence for the r-th power of a graph embedded in H x P.

    The certificate embeds g itself; the builder forms the power, checks
    that g respects the product adjacency, and runs the plain builder. In
    auto mode the certified q is the largest realized signature class
    count, clamped to k+1.
    """
    rr = cert.r if r is None else r
    if rr < 1:
        raise CertificateError("power radius must be at least 1")
    missing = set(range(g.n)) - set(cert.embed)
    if missing or cert.apex:
        raise CertificateError("certificate must embed exactly the graph, no apex")
    for u, v in g.edges():
        hu, pu = cert.embed[u]
        hv, pv = cert.embed[v]
        if abs(pu - pv) > 1 or (hu != hv and not cert.host.has_edge(hu, hv)) \
                or (hu == hv and pu == pv):
            raise CertificateError(
                f"edge ({u},{v}) does not respect the product adjacency")
    cert_r = ProductCertificate(cert.host, cert.decomp, cert.path_len,
                                cert.embed, (), rr)
    f = Trigraph.from_graph(g.power(rr))
    return product_path_sequence(f, cert_r, q=q, r=rr, validate=True)
