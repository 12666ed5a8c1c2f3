"""Reproducible verification suites tying the whole toolkit together.

Each suite runs one block of acceptance checks and returns a machine
readable report; randomised instances always start from the fixed seed
0xC0FFEE, printed in the report. A report is green only if every check
holds, and the command line maps that to the exit code.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import __version__
from .diversity import check_bound, diversity, second_neighbourhood_sets
from .errors import TwinreduceError
from .gadgets import (
    gen_grid,
    gen_q_tree,
    gen_s,
    gen_stacked_triangulation,
    gen_t_of,
    gen_tight_ktree_pi1,
    gen_tight_surface_pi1,
)
from .graph import Graph, iter_bits, path_graph
from .oracle import OracleConfig, leaf_merge_sequence, memoized_param, reduced_f_exact
from .params import (
    bandwidth_exact,
    check_ordering_bandwidth,
    col_s_exact,
    degeneracy,
    max_degree,
    pathwidth_exact,
    treewidth_exact,
)
from .product import (
    ProductCertificate,
    chain_path_decomposition,
    power_sequence,
    product_path_sequence,
    template_adjacent,
)
from .trigraph import Trigraph

SEED = 0xC0FFEE


@dataclass
class CheckResult:
    name: str
    claim: str
    lhs: object
    rhs: object
    holds: bool
    runtime_ms: float


@dataclass
class VerifyReport:
    suite: str
    seed: int
    version: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "version": self.version,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "claim": c.claim,
                    "lhs": c.lhs,
                    "rhs": c.rhs,
                    "holds": c.holds,
                    "runtime_ms": round(c.runtime_ms, 2),
                }
                for c in self.checks
            ],
        }

    def to_table(self) -> str:
        rows = [("check", "lhs", "rhs", "holds", "ms")]
        for c in self.checks:
            rows.append((c.name, str(c.lhs), str(c.rhs),
                         "yes" if c.holds else "NO", f"{c.runtime_ms:.1f}"))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row))
                 for row in rows]
        status = "all checks hold" if self.ok else "FAILURES PRESENT"
        head = f"suite {self.suite} (seed {self.seed:#x}, version {self.version}): {status}"
        return "\n".join([head] + lines)


class _Collector:
    def __init__(self, suite: str):
        self.report = VerifyReport(suite, SEED, __version__)
        self._t0 = time.perf_counter()

    def _push(self, name, claim, lhs, rhs, holds):
        now = time.perf_counter()
        self.report.checks.append(
            CheckResult(name, claim, lhs, rhs, holds, (now - self._t0) * 1000))
        self._t0 = now

    def le(self, name, claim, lhs, rhs):
        self._push(name, claim, lhs, rhs, lhs <= rhs)

    def eq(self, name, claim, lhs, rhs):
        self._push(name, claim, lhs, rhs, lhs == rhs)

    def true(self, name, claim, ok):
        self._push(name, claim, ok, True, bool(ok))


def _random_graph(n, p, rng) -> Graph:
    g = Graph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


def _random_planar(rng) -> Graph:
    """Random subgraph of a seeded stacked triangulation; planar since
    planarity is closed under taking subgraphs."""
    n = rng.randint(8, 40)
    g, _ = gen_stacked_triangulation(n, seed=rng.randrange(2 ** 30))
    keep_p = 0.4 + 0.6 * rng.random()
    out = Graph(g.n)
    for u, v in g.edges():
        if rng.random() < keep_p:
            out.add_edge(u, v)
    return out


# ---------------------------------------------------------------- suite 1

def _suite_eq1eq2(c: _Collector) -> None:
    for x in (1, 2, 3, 4):
        for q in (2, 3):
            for r in (1, 2):
                s = gen_s(x, q, r)
                tag = f"S({x},{q},{r})"
                c.eq(f"{tag}-size", "vertex count is (2q-1)+3xq",
                     s.graph.n, (2 * q - 1) + 3 * x * q)
                c.le(f"{tag}-maxdeg", "max degree at most (3r+2)q-2",
                     max_degree(s.graph), (3 * r + 2) * q - 2)
                stretch = check_ordering_bandwidth(s.graph, s.arm_ordering())
                c.le(f"{tag}-arm-order", "arm-by-arm ordering has stretch at most (2r+2)q-2",
                     stretch, (2 * r + 2) * q - 2)
                if s.graph.n <= 24:
                    bw = bandwidth_exact(s.graph, cap=(2 * r + 2) * q - 2)
                    c.true(f"{tag}-bw-exact",
                           "exact bandwidth confirms the ordering bound",
                           not bw.exceeds_cap and bw.value <= (2 * r + 2) * q - 2)


# ---------------------------------------------------------------- suite 2

def _replay_template_check(result) -> bool:
    """Independent re-check of the stored per-step injections: replay the
    padded sequence and test every red edge against the template rule."""
    it = result.padded.replay(snapshots=False)
    next(it)
    for tri, step in zip(it, result.steps):
        layers = step.layers
        if set(layers) != set(tri.black):
            return False
        for u, v in tri.red_edges():
            zu, au, iu = layers[u]
            zv, av, iv = layers[v]
            if step.phase == 1:
                if au == "X" or av == "X" or zu != zv:
                    return False
                if not template_adjacent((au, iu), (av, iv), result.r):
                    return False
    return True


def _suite_productpath_grids(c: _Collector) -> None:
    for m in (3, 4, 5, 6):
        g, cert = gen_grid(m, m)
        res = product_path_sequence(Trigraph.from_graph(g), cert)
        tag = f"grid{m}x{m}"
        c.le(f"{tag}-stretch", "every step's layer ordering has stretch at most 4q-2",
             res.max_stretch, 4 * res.q - 2)
        c.le(f"{tag}-reddeg", "every step's red degree is at most 5q-2",
             res.max_red_delta, 5 * res.q - 2)
        c.true(f"{tag}-template", "every red component maps into the blob template",
               _replay_template_check(res))
        c.eq(f"{tag}-complete", "projected sequence reduces to one vertex",
             res.projected.final().n, 1)


# ---------------------------------------------------------------- suite 3

def _pi2_closed_form(size: int) -> int:
    return (6 * size - 9) * (68 * size - 132)


def _suite_power_squares(c: _Collector) -> None:
    for n in (10, 20, 30):
        g = path_graph(n)
        cert = ProductCertificate(
            Graph(1), chain_path_decomposition(1), n,
            {v: (0, v) for v in range(n)}, (), 2)
        res = power_sequence(g, cert, r=2)
        tag = f"path{n}-squared"
        c.le(f"{tag}-stretch", "per-step stretch at most (2*2+2)q-2",
             res.max_stretch, 6 * res.q - 2)
        c.le(f"{tag}-q", "certified q within the radius-2 planar diversity form",
             res.q, _pi2_closed_form(5))
        c.eq(f"{tag}-complete", "sequence reduces the square to one vertex",
             res.projected.final().n, 1)
    g, cert = gen_grid(4, 4)
    res = power_sequence(g, cert, r=2)
    c.le("grid4-squared-stretch", "per-step stretch at most (2*2+2)q-2",
         res.max_stretch, 6 * res.q - 2)
    c.le("grid4-squared-q", "certified q within the radius-2 planar diversity form",
         res.q, _pi2_closed_form(10))
    c.true("grid4-squared-template", "red components map into the blob template",
           _replay_template_check(res))


# ---------------------------------------------------------------- suite 4

def _atlas_graphs(max_n: int, connected: bool):
    import networkx as nx
    from .graph import from_networkx

    for nxg in nx.graph_atlas_g()[1:]:
        n = nxg.number_of_nodes()
        if n < 1 or n > max_n:
            continue
        if connected and not nx.is_connected(nxg):
            continue
        yield from_networkx(nxg)


def _is_p4_free(g: Graph) -> bool:
    from itertools import combinations

    for quad in combinations(range(g.n), 4):
        sub, _ = g.induced(quad)
        if sub.m == 3 and sorted(sub.degree(v) for v in range(4)) == [1, 1, 2, 2]:
            return False
    return True


def _suite_oracle_smallgraphs(c: _Collector) -> None:
    connected = list(_atlas_graphs(6, connected=True))
    c.eq("enumeration", "143 connected graphs on at most 6 vertices, 112 on exactly 6",
         (len(connected), sum(1 for g in connected if g.n == 6)), (143, 112))
    ok = all(
        (reduced_f_exact(g, OracleConfig(max_degree)).value == 0) == _is_p4_free(g)
        for g in connected
    )
    c.true("tww-zero-iff-cograph",
           "twin-width vanishes exactly on the P4-free graphs", ok)

    bw_eval = memoized_param(lambda g: bandwidth_exact(g).value)
    every = list(_atlas_graphs(6, connected=False))
    values = [reduced_f_exact(g, OracleConfig(bw_eval)).value for g in every]
    comp_ok = all(
        reduced_f_exact(g.complement(), OracleConfig(bw_eval)).value == v
        for g, v in zip(every, values)
    )
    c.true("reduced-bw-complement",
           "reduced bandwidth is invariant under complementation", comp_ok)
    hered_ok = True
    for g, v in zip(every, values):
        for drop in range(g.n):
            sub, _ = g.induced([u for u in range(g.n) if u != drop])
            if reduced_f_exact(sub, OracleConfig(bw_eval)).value > v:
                hered_ok = False
    c.true("reduced-bw-hereditary",
           "reduced bandwidth never grows under vertex deletion", hered_ok)


# ---------------------------------------------------------------- suite 5

def _suite_tightness(c: _Collector) -> None:
    for x in range(4, 11):
        g0, faces = gen_stacked_triangulation(x)
        inst = gen_tight_surface_pi1(g0, faces)
        got = diversity(inst.graph, inst.x_side, 1).count
        c.eq(f"surface-x{x}", "radius-1 diversity equals 6|X|-9 exactly",
             got, 6 * x - 9)
    for k, n in ((1, 4), (2, 5), (3, 6)):
        inst = gen_tight_ktree_pi1(k, n)
        got = diversity(inst.graph, inst.x_side, 1).count
        c.eq(f"ktree-k{k}-n{n}", "radius-1 diversity equals 2^k(n-k+1)-n+k exactly",
             got, 2 ** k * (n - k + 1) - n + k)


# ---------------------------------------------------------------- suite 6

def _suite_planar_pi1(c: _Collector) -> None:
    rng = random.Random(SEED)
    names = ("surface-pi1", "surface-second", "surface-pi2", "pi2-product")
    failures = {name: 0 for name in names}
    runs = 0
    for _ in range(50):
        g = _random_planar(rng)
        size = rng.randint(2, 6)
        anchors = rng.sample(range(g.n), size)
        for name in names:
            params = {"gamma": 0}
            if name == "pi2-product":
                params = {"f": lambda s: max(1, 68 * s - 132)}
            res = check_bound(g, anchors, 2, name, params)
            runs += 1
            if not res.holds:
                failures[name] += 1
    for name in names:
        c.eq(f"{name}-failures", "bound holds on every seeded planar instance",
             failures[name], 0)

    col_fail = 0
    trivial_fail = 0
    for _ in range(50):
        n = rng.randint(4, 14)
        g = _random_graph(n, 0.15 + 0.5 * rng.random(), rng)
        size = rng.randint(2, min(6, n - 1))
        anchors = rng.sample(range(n), size)
        if not check_bound(g, anchors, 1, "col5-pi1").holds:
            col_fail += 1
        for r in (1, 2, 3):
            if not check_bound(g, anchors, r, "trivial").holds:
                trivial_fail += 1
    c.eq("col5-pi1-failures",
         "diversity bound from the 5-strong colouring number always holds",
         col_fail, 0)
    c.eq("trivial-pi-failures",
         "diversity never exceeds (r+1)^|A|", trivial_fail, 0)


# ---------------------------------------------------------------- suite 7

def _suite_tof_sequence(c: _Collector) -> None:
    from .gadgets import blowup2, red_of

    sources = {
        "K2": Graph(2, [(0, 1)]),
        "P3": path_graph(3),
        "C4": Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    }
    for hname, h in sources.items():
        for t in (3, 4):
            inst = gen_t_of(h, t_override=t)
            tag = f"t({hname})-t{t}"
            final = inst.canonical.final()
            target = red_of(h)
            c.true(f"{tag}-endstate",
                   "canonical sequence ends at the all-red copy of the source",
                   _trigraph_isomorphic_by_groups(final, target, inst.group_of))
            worst = 0
            blow, _ = blowup2(h)
            inject_ok = True
            it = inst.canonical.replay(snapshots=False)
            next(it)
            for tri, bmap in zip(it, inst.blowup_maps):
                worst = max(worst, tri.max_red_degree())
                if not _blowup_map_valid(tri, bmap, h):
                    inject_ok = False
            c.le(f"{tag}-reddeg", "red degree stays within twice the source degree",
                 worst, 2 * max_degree(h))
            c.true(f"{tag}-blowup", "every red component maps into the 2-blowup",
                   inject_ok)


def _trigraph_isomorphic_by_groups(tri: Trigraph, target: Trigraph, group_of) -> bool:
    live = tri.vertices()
    if len(live) != target.n:
        return False
    mapping = {v: group_of[v] for v in live}
    if sorted(mapping.values()) != list(range(target.n)):
        return False
    if tri.black_edges():
        return False
    got = {frozenset((mapping[u], mapping[v])) for u, v in tri.red_edges()}
    want = {frozenset(e) for e in target.red_edges()}
    return got == want


def _blowup_map_valid(tri: Trigraph, bmap, h: Graph) -> bool:
    for u, v in tri.red_edges():
        if u not in bmap or v not in bmap:
            return False
        (gu, cu), (gv, cv) = bmap[u], bmap[v]
        if gu == gv:
            return False  # blowup copies of one vertex are non-adjacent
        if not h.has_edge(gu, gv):
            return False
    seen = {}
    for fid, spot in bmap.items():
        if spot in seen:
            return False
        seen[spot] = fid
    return True


# ---------------------------------------------------------------- suite 8

def _suite_qn_leafmerge(c: _Collector) -> None:
    for n in (3, 4, 5, 6):
        seq = leaf_merge_sequence(gen_q_tree(n))
        worst_deg = 0
        worst_pw = 0
        it = seq.replay(snapshots=False)
        for tri in it:
            red, _ = tri.red_graph()
            worst_deg = max(worst_deg, max_degree(red))
            worst_pw = max(worst_pw, pathwidth_exact(red).value)
        c.le(f"Q{n}-red-maxdeg", "leaf folding keeps red degree at most 3",
             worst_deg, 3)
        c.le(f"Q{n}-red-pw", "leaf folding keeps red pathwidth at most 2",
             worst_pw, 2)
        c.le(f"Q{n}-deg-plus-pw", "upper bound on reduced degree-plus-pathwidth",
             worst_deg + worst_pw, 5)


# ---------------------------------------------------------------- suite 9

def _suite_cross_params(c: _Collector) -> None:
    rng = random.Random(SEED)
    chain_bad = deg_bad = col1_bad = coltw_bad = 0
    for _ in range(500):
        n = rng.randint(1, 8)
        g = _random_graph(n, rng.random(), rng)
        tw = treewidth_exact(g).value
        pw = pathwidth_exact(g).value
        bw = bandwidth_exact(g).value
        if not tw <= pw <= bw:
            chain_bad += 1
        if max_degree(g) > 2 * bw:
            deg_bad += 1
        if col_s_exact(g, 1).value != degeneracy(g).value + 1:
            col1_bad += 1
        for s in (1, 2, 5):
            if col_s_exact(g, s).value > tw + 1:
                coltw_bad += 1
    c.eq("tw-pw-bw-chain", "treewidth <= pathwidth <= bandwidth on every sample",
         chain_bad, 0)
    c.eq("maxdeg-2bw", "max degree at most twice the bandwidth", deg_bad, 0)
    c.eq("col1-degeneracy", "1-strong colouring number is degeneracy plus one",
         col1_bad, 0)
    c.eq("cols-tw", "s-strong colouring numbers at most treewidth plus one",
         coltw_bad, 0)


SUITES = {
    "eq1eq2": _suite_eq1eq2,
    "productpath-grids": _suite_productpath_grids,
    "power-squares": _suite_power_squares,
    "oracle-smallgraphs": _suite_oracle_smallgraphs,
    "tightness": _suite_tightness,
    "planar-pi1": _suite_planar_pi1,
    "tof-sequence": _suite_tof_sequence,
    "qn-leafmerge": _suite_qn_leafmerge,
    "cross-params": _suite_cross_params,
}


def run_suite(name: str) -> VerifyReport:
    if name not in SUITES:
        raise TwinreduceError(
            f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    collector = _Collector(name)
    SUITES[name](collector)
    return collector.report


def run_all() -> list[VerifyReport]:
    return [run_suite(name) for name in SUITES]
