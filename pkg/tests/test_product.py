import pytest

from twinreduce.errors import CertificateError, PigeonholeError
from twinreduce.gadgets import gen_grid, gen_s
from twinreduce.graph import Graph, complete_graph, path_graph
from twinreduce.params import max_degree
from twinreduce.product import (
    ProductCertificate,
    RootedTreeDecomposition,
    apex_product_sequence,
    chain_path_decomposition,
    power_sequence,
    product_path_sequence,
    strong_product,
    template_adjacent,
    validate_certificate,
)
from twinreduce.trigraph import (
    Trigraph,
    sequence_width,
    sequence_witness_width,
)


def two_bag_cert(h_n: int, path_len: int, r: int = 1) -> ProductCertificate:
    host = complete_graph(h_n) if h_n > 1 else Graph(1)
    bags = {0: frozenset(), 1: frozenset(range(h_n))}
    decomp = RootedTreeDecomposition(bags, {0: None, 1: 0}, 0)
    embed = {h * path_len + p: (h, p) for h in range(h_n) for p in range(path_len)}
    return ProductCertificate(host, decomp, path_len, embed, (), r)


# ------------------------------------------------------------ strong product

def test_strong_product_with_k1():
    p = strong_product(Graph(1), path_graph(5))
    assert p.n == 5 and p.m == 4


def test_strong_product_p2_p2_is_k4():
    p = strong_product(path_graph(2), path_graph(2))
    assert p.n == 4 and p.m == 6


def test_strong_product_p3_p3_centre_degree():
    p = strong_product(path_graph(3), path_graph(3))
    centre = 1 * 3 + 1
    assert p.degree(centre) == 8
    # contains the grid
    grid, _ = gen_grid(3, 3)
    for u, v in grid.edges():
        assert p.has_edge(u, v)


# -------------------------------------------------------------- certificates

def test_validate_grid_certificate():
    g, cert = gen_grid(4, 4)
    rep = validate_certificate(cert, Trigraph.from_graph(g))
    assert rep.ok
    assert rep.k == 1 and rep.q_min == 1
    assert rep.conditions["red-edge"] == "ok"
    assert rep.conditions["neighbourhood"] == "ok"
    assert rep.conditions["separation"].startswith("deferred")


def test_validate_flags_far_edge():
    g, cert = gen_grid(3, 3)
    bad = Graph(9, g.edges() + [(0, 2)])  # rows 0 and 2, distance two
    rep = validate_certificate(cert, Trigraph.from_graph(bad))
    assert not rep.ok
    assert any("spans 2 path positions" in v for v in rep.violations)


def test_validate_red_edges_vacuous_and_zoned():
    g, cert = gen_grid(3, 3)
    t = Trigraph.from_graph(g)
    assert validate_certificate(cert, t).ok
    # recolour an edge inside the leaf zone (host row 2): still fine
    zone_edge = (2 * 3 + 0, 2 * 3 + 1)
    rest = [e for e in g.edges() if tuple(sorted(e)) != zone_edge]
    t2 = Trigraph(9, black=rest, red=[zone_edge])
    assert validate_certificate(cert, t2).ok
    # a red edge between host rows 0 and 1 is in no single leaf zone
    cross = (0, 3)
    rest = [e for e in g.edges() if tuple(sorted(e)) != cross]
    t3 = Trigraph(9, black=rest, red=[cross])
    rep = validate_certificate(cert, t3)
    assert not rep.ok


def test_validate_embedding_errors():
    g, cert = gen_grid(3, 3)
    bad_embed = dict(cert.embed)
    bad_embed[0] = (0, 7)
    cert2 = ProductCertificate(cert.host, cert.decomp, cert.path_len, bad_embed, (), 1)
    rep = validate_certificate(cert2, Trigraph.from_graph(g))
    assert not rep.ok


# ------------------------------------------------------------- template rule

def test_template_rule_matches_generated_gadget():
    for (x, q, r) in ((1, 2, 1), (2, 2, 1), (2, 2, 2), (2, 3, 1), (1, 3, 2)):
        s = gen_s(x, q, r)
        for u in range(s.graph.n):
            for v in range(u + 1, s.graph.n):
                want = s.graph.has_edge(u, v)
                got = template_adjacent(s.layer_of(u), s.layer_of(v), r)
                assert got == want, (x, q, r, s.names[u], s.names[v])


# ----------------------------------------------------------------- sequences

def test_single_vertex_trivial():
    cert = two_bag_cert(1, 1)
    res = product_path_sequence(Trigraph.from_graph(Graph(1)), cert)
    assert res.padded.merges == []
    assert res.projected.final().n == 1


def test_two_bag_base_case_p3_times_p4():
    host = path_graph(3)
    bags = {0: frozenset(), 1: frozenset({0, 1, 2})}
    decomp = RootedTreeDecomposition(bags, {0: None, 1: 0}, 0)
    prod = strong_product(host, path_graph(4))
    embed = {h * 4 + p: (h, p) for h in range(3) for p in range(4)}
    cert = ProductCertificate(host, decomp, 4, embed, (), 1)
    res = product_path_sequence(Trigraph.from_graph(prod), cert, q=3)
    assert res.q == 3
    assert res.max_stretch <= 4 * 3 - 2
    assert res.max_red_delta <= 5 * 3 - 2
    assert res.projected.final().n == 1


def test_grid_sequences_all_checks():
    for m in (3, 4, 5):
        g, cert = gen_grid(m, m)
        res = product_path_sequence(Trigraph.from_graph(g), cert)
        assert res.max_stretch <= 4 * res.q - 2
        assert res.max_red_delta <= 5 * res.q - 2
        # stored witnesses certify the same stretch on the projected replay
        assert sequence_witness_width(res.projected) <= 4 * res.q - 2
        assert sequence_width(res.projected, max_degree) <= 5 * res.q - 2
        assert res.projected.final().n == 1
        assert not res.padded.partial


def test_fixed_q_matches_auto_on_grid():
    g, cert = gen_grid(4, 4)
    auto = product_path_sequence(Trigraph.from_graph(g), cert)
    fixed = product_path_sequence(Trigraph.from_graph(g), cert, q=2)
    assert fixed.q == 2
    assert fixed.max_stretch <= 4 * 2 - 2
    assert fixed.projected.final().n == 1
    assert auto.q == 2


def test_pigeonhole_failure_is_reported():
    # two leaves {0,1,2} and {0,3,4} under an internal bag {0}: columns 1..4
    # get pairwise distinct neighbourhoods on column 0 in the middle row
    host = Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    bags = {0: frozenset(), 1: frozenset({0}), 2: frozenset({0, 1, 2}),
            3: frozenset({0, 3, 4})}
    parent = {0: None, 1: 0, 2: 1, 3: 1}
    decomp = RootedTreeDecomposition(bags, parent, 0)
    ell = 3
    f = Graph(5 * ell)
    patterns = [(0,), (1,), (2,), (0, 1)]
    for col, pat in zip((1, 2, 3, 4), patterns):
        for p in pat:
            f.add_edge(col * ell + 1, 0 * ell + p)
    embed = {h * ell + p: (h, p) for h in range(5) for p in range(ell)}
    cert = ProductCertificate(host, decomp, ell, embed, (), 1)
    with pytest.raises(PigeonholeError) as err:
        product_path_sequence(Trigraph.from_graph(f), cert, q=2)
    assert err.value.row == 1
    assert err.value.signatures == 4
    # auto mode absorbs the same instance by certifying a larger q
    res = product_path_sequence(Trigraph.from_graph(f), cert)
    assert res.q == 4
    assert res.projected.final().n == 1


def test_rejects_q_below_k_plus_one():
    g, cert = gen_grid(3, 3)
    with pytest.raises(CertificateError):
        product_path_sequence(Trigraph.from_graph(g), cert, q=1)


def test_padding_projection_consistency():
    # embed a 5-vertex path zigzag into a 3x3 product: padding fills the rest
    host = path_graph(3)
    decomp = chain_path_decomposition(3)
    g = path_graph(5)
    embed = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (2, 1), 4: (2, 2)}
    cert = ProductCertificate(host, decomp, 3, embed, (), 1)
    res = product_path_sequence(Trigraph.from_graph(g), cert)
    assert res.padded.base.n == 9
    assert res.projected.base.n == 5
    assert res.projected.final().n == 1
    assert len(res.projected.witnesses) == len(res.projected.merges)
    assert sequence_width(res.projected, max_degree) <= res.phase1_red_degree_bound


# -------------------------------------------------------------------- powers

def test_power_sequence_path_squared():
    n = 12
    g = path_graph(n)
    cert = ProductCertificate(Graph(1), chain_path_decomposition(1), n,
                              {v: (0, v) for v in range(n)}, (), 2)
    res = power_sequence(g, cert, r=2)
    assert res.q == 1
    assert res.max_stretch <= 6 * res.q - 2
    assert res.projected.final().n == 1
    # the projected base really is the square of the path
    assert res.projected.base.black_edges() == g.power(2).edges()


def test_power_sequence_grid():
    g, cert = gen_grid(4, 4)
    res = power_sequence(g, cert, r=2)
    assert res.max_stretch <= 6 * res.q - 2
    assert res.max_red_delta <= 8 * res.q - 2
    assert res.projected.final().n == 1


def test_power_rejects_bad_embedding():
    g = Graph(2, [(0, 1)])
    cert = ProductCertificate(Graph(1), chain_path_decomposition(1), 4,
                              {0: (0, 0), 1: (0, 3)}, (), 1)
    with pytest.raises(CertificateError):
        power_sequence(g, cert, r=1)


# ---------------------------------------------------------------------- apex

def apex_wheel(m: int, ell: int) -> tuple[Trigraph, ProductCertificate]:
    host = path_graph(m)
    prod = strong_product(host, path_graph(ell))
    g = Graph(prod.n + 1)
    for u, v in prod.edges():
        g.add_edge(u, v)
    for v in range(prod.n):
        g.add_edge(prod.n, v)
    embed = {h * ell + p: (h, p) for h in range(m) for p in range(ell)}
    cert = ProductCertificate(host, chain_path_decomposition(m), ell, embed,
                              (prod.n,), 1)
    return Trigraph.from_graph(g), cert


def test_apex_zero_equals_plain():
    g, cert = gen_grid(4, 4)
    plain = product_path_sequence(Trigraph.from_graph(g), cert)
    apex = apex_product_sequence(Trigraph.from_graph(g), cert)
    assert plain.padded.merges == apex.padded.merges
    assert plain.q == apex.q


def test_apex_wheel_no_red_at_apex_in_phase_one():
    f, cert = apex_wheel(3, 4)
    apex_id = 3 * 4
    res = apex_product_sequence(f, cert)
    assert res.apex_count == 1
    it = res.padded.replay(snapshots=False)
    next(it)
    for tri, step in zip(it, res.steps):
        if step.phase == 1 and apex_id in tri.red:
            assert tri.red[apex_id] == 0
    assert res.max_stretch <= res.stretch_bound
    assert res.projected.final().n == 1


def test_apex_base_case_row_sweep():
    # two-bag certificate with an apex joined to everything
    ell = 3
    host = complete_graph(3)
    bags = {0: frozenset(), 1: frozenset(range(3))}
    decomp = RootedTreeDecomposition(bags, {0: None, 1: 0}, 0)
    prod = strong_product(host, path_graph(ell))
    g = Graph(prod.n + 1)
    for u, v in prod.edges():
        g.add_edge(u, v)
    for v in range(prod.n):
        g.add_edge(prod.n, v)
    embed = {h * ell + p: (h, p) for h in range(3) for p in range(ell)}
    cert = ProductCertificate(host, decomp, ell, embed, (prod.n,), 1)
    res = apex_product_sequence(Trigraph.from_graph(g), cert, q=3)
    assert res.projected.final().n == 1
    assert res.max_red_delta <= res.red_degree_bound
