"""Command line frontend.

Subcommands: gen, param, oracle, seq, diversity, verify, convert. All
outputs are UTF-8 JSON except the verify table; the TWINREDUCE_MAX_N
environment variable overrides the exact evaluators' size caps.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__, io
from .diversity import check_bound, diversity
from .errors import TwinreduceError
from .gadgets import (
    blowup2,
    gen_binary_tree,
    gen_grid,
    gen_q_tree,
    gen_s,
    gen_s_star,
    gen_stacked_triangulation,
    gen_t_of,
    gen_tight_ktree_pi1,
    gen_tight_surface_pi1,
    red_of,
)
from .graph import Graph
from .oracle import OracleConfig, PARAM_EVALUATORS, reduced_f_exact, reduced_f_upper_greedy
from . import params as _params
from .product import apex_product_sequence, power_sequence, product_path_sequence, validate_certificate
from .trigraph import Trigraph


def _emit(data, path=None):
    text = json.dumps(data, indent=1, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _file_hash(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _load_graph(path: str) -> Graph:
    return io.graph_from_json(io.load_json(path))


def _witness_json(witness):
    if witness is None:
        return None
    if isinstance(witness, _params.TreeDecomposition):
        return {
            "bags": [sorted(b) for b in witness.bags],
            "parent": list(witness.parent),
            "root": witness.root,
        }
    return list(witness)


# ---------------------------------------------------------------------- gen

def _parse_params(spec: str) -> dict[str, int]:
    out = {}
    if spec:
        for item in spec.split(","):
            key, _, value = item.partition("=")
            if not _ or not key:
                raise TwinreduceError(f"bad parameter {item!r}, expected k=v")
            out[key.strip()] = int(value)
    return out


def _cmd_gen(args) -> int:
    p = _parse_params(args.params)
    kind = args.kind
    cert = None
    seq = None
    extra = {}
    if kind == "s_star":
        g = gen_s_star(p["x"], p["q"]).graph
    elif kind == "s_xqr":
        g = gen_s(p["x"], p["q"], p["r"]).graph
    elif kind == "q_tree":
        g = gen_q_tree(p["n"])
    elif kind == "grid":
        g, cert = gen_grid(p["m"], p["n"])
    elif kind == "binary_tree":
        g = gen_binary_tree(p["h"])
    elif kind == "blowup2":
        g, _labels = blowup2(_load_graph(args.input))
    elif kind == "red_of":
        t = red_of(_load_graph(args.input))
        _emit(io.trigraph_to_json(t), args.out)
        return 0
    elif kind == "t_of":
        inst = gen_t_of(_load_graph(args.input), p.get("t"))
        g = inst.graph
        seq = io.sequence_to_json(inst.canonical)
    elif kind == "stacked_triangulation":
        g, faces = gen_stacked_triangulation(p["n"], p.get("seed", 0xC0FFEE))
        extra["faces"] = [list(f) for f in faces]
    elif kind == "tight_surface_pi1":
        g0, faces = gen_stacked_triangulation(p["x"], p.get("seed", 0xC0FFEE))
        inst = gen_tight_surface_pi1(g0, faces)
        g = inst.graph
        extra["x_side"] = inst.x_side
        extra["y_side"] = inst.y_side
    elif kind == "tight_ktree_pi1":
        inst = gen_tight_ktree_pi1(p["k"], p["n"])
        g = inst.graph
        extra["x_side"] = inst.x_side
        extra["y_side"] = inst.y_side
    else:
        raise TwinreduceError(f"unknown generator {kind!r}")
    data = io.graph_to_json(g)
    data.update(extra)
    _emit(data, args.out)
    if cert is not None and args.cert_out:
        _emit(io.certificate_to_json(cert), args.cert_out)
    if seq is not None and args.seq_out:
        _emit(seq, args.seq_out)
    return 0


# -------------------------------------------------------------------- param

def _cmd_param(args) -> int:
    g = _load_graph(args.input)
    name = args.name
    if name in ("bw", "bandwidth"):
        if args.heuristic:
            res = _params.bandwidth_heuristic(g)
        else:
            res = _params.bandwidth_exact(g, cap=args.cap)
    elif name == "maxdeg":
        res = _params.ParamResult(_params.max_degree(g), True)
    elif name == "star":
        res = _params.ParamResult(_params.max_component_size(g), True)
    elif name == "degeneracy":
        res = _params.degeneracy(g)
    elif name in ("pw", "pathwidth"):
        res = _params.pathwidth_exact(g)
    elif name in ("tw", "treewidth"):
        res = _params.treewidth_exact(g)
    elif name.startswith("col"):
        s = int(name[3:])
        res = _params.col_s_greedy(g, s) if args.heuristic else _params.col_s_exact(g, s)
    elif name == "cliques":
        counts = _params.clique_counts(g, args.cap)
        _emit({"value": counts, "exact": True, "witness": None})
        return 0
    else:
        raise TwinreduceError(f"unknown parameter {name!r}")
    _emit({
        "value": res.value,
        "exact": res.exact,
        "exceeds_cap": res.exceeds_cap,
        "witness": _witness_json(res.witness),
    })
    return 0


# ------------------------------------------------------------------- oracle

def _cmd_oracle(args) -> int:
    g = _load_graph(args.input)
    f = PARAM_EVALUATORS[args.param]
    if args.greedy:
        res = reduced_f_upper_greedy(g, f)
    else:
        res = reduced_f_exact(g, OracleConfig(f, max_n=args.max_n))
    _emit({
        "value": res.value,
        "exact": res.exact,
        "states_explored": res.states_explored,
        "sequence": io.sequence_to_json(res.optimal_sequence),
    })
    return 0


# ---------------------------------------------------------------------- seq

def _cmd_seq(args) -> int:
    cert = io.certificate_from_json(io.load_json(args.cert))
    g = _load_graph(args.graph)
    if args.power:
        result = power_sequence(g, cert, r=args.power, q=args.q)
    elif cert.apex:
        result = apex_product_sequence(Trigraph.from_graph(g), cert, q=args.q)
    else:
        result = product_path_sequence(Trigraph.from_graph(g), cert, q=args.q)
    report = {
        "q": result.q,
        "r": result.r,
        "apex": result.apex_count,
        "auto_q": result.auto_q,
        "bounds": {
            "stretch": result.stretch_bound,
            "red_degree": result.red_degree_bound,
        },
        "achieved": {
            "stretch": result.max_stretch,
            "red_degree": result.max_red_delta,
        },
        "steps": len(result.steps),
        "inputs": {"graph": _file_hash(args.graph), "cert": _file_hash(args.cert)},
        "version": __version__,
    }
    if args.out:
        _emit(io.sequence_to_json(result.projected), args.out)
        report["sequence_file"] = args.out
    if args.padded_out:
        _emit(io.sequence_to_json(result.padded), args.padded_out)
    _emit(report)
    return 0


def _cmd_validate(args) -> int:
    cert = io.certificate_from_json(io.load_json(args.cert))
    g = _load_graph(args.graph)
    rep = validate_certificate(cert, Trigraph.from_graph(g))
    _emit({
        "ok": rep.ok,
        "k": rep.k,
        "q_min": rep.q_min,
        "conditions": rep.conditions,
        "violations": rep.violations,
    })
    return 0 if rep.ok else 1


# ---------------------------------------------------------------- diversity

def _cmd_diversity(args) -> int:
    g = _load_graph(args.input)
    anchors = [int(a) for a in args.anchors.split(",") if a != ""]
    report = diversity(g, anchors, args.r)
    out = {
        "anchors": list(report.anchor),
        "r": report.r,
        "count": report.count,
        "classes": [
            {"profile": key, "members": members}
            for key, _, members in report.classes
        ],
    }
    if args.check:
        params = {}
        if args.gamma is not None:
            params["gamma"] = args.gamma
        if args.k is not None:
            params["k"] = args.k
        if args.c is not None:
            params["c"] = args.c
        if args.d is not None:
            params["d"] = args.d
        if args.f_value is not None:
            params["f_value"] = args.f_value
        res = check_bound(g, anchors, args.r, args.check, params)
        out["bound"] = {
            "name": res.name, "holds": res.holds,
            "lhs": res.lhs, "rhs": res.rhs, "params": res.params,
        }
    _emit(out)
    return 0


# ------------------------------------------------------------------- verify

def _cmd_verify(args) -> int:
    from .verify import SUITES, run_all, run_suite

    if args.suite == "all":
        reports = run_all()
    else:
        reports = [run_suite(args.suite)]
    ok = all(r.ok for r in reports)
    for rep in reports:
        print(rep.to_table())
        print()
    if args.json:
        _emit({"ok": ok, "suites": [r.to_json() for r in reports]}, args.json)
    return 0 if ok else 1


# ------------------------------------------------------------------ convert

def _cmd_convert(args) -> int:
    src, dst = args.source_format, args.target_format
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    if src == "json":
        data = json.loads(text)
        tri = io.trigraph_from_json(data)
    elif src == "edgelist":
        tri = Trigraph.from_graph(io.graph_from_edgelist(text))
    else:
        raise TwinreduceError("only json and edgelist inputs are supported")
    if dst == "json":
        out = json.dumps(io.trigraph_to_json(tri), indent=1, sort_keys=True) + "\n"
    elif dst == "edgelist":
        if tri.red_edges():
            raise TwinreduceError("edge lists cannot represent red edges")
        g = Graph(tri.n, tri.black_edges())
        out = io.edgelist_to_text(g)
    elif dst == "dot":
        out = io.trigraph_to_dot(tri)
    else:
        raise TwinreduceError(f"unknown target format {dst!r}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twinreduce",
        description="trigraph reduction sequences, reduced parameters, and verifiers",
    )
    ap.add_argument("--version", action="version", version=f"twinreduce {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="deterministic instance generators")
    g.add_argument("kind", choices=[
        "s_star", "s_xqr", "q_tree", "grid", "binary_tree", "blowup2",
        "red_of", "t_of", "stacked_triangulation", "tight_surface_pi1",
        "tight_ktree_pi1",
    ])
    g.add_argument("--params", default="", help="comma list like x=2,q=3,r=1")
    g.add_argument("--input", help="input graph JSON for blowup2/red_of/t_of")
    g.add_argument("-o", "--out")
    g.add_argument("--cert-out", help="write the product certificate (grid)")
    g.add_argument("--seq-out", help="write the canonical sequence (t_of)")
    g.set_defaults(func=_cmd_gen)

    p = sub.add_parser("param", help="graph parameter evaluators")
    p.add_argument("name")
    p.add_argument("--input", required=True)
    p.add_argument("--exact", action="store_true", default=True)
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=_cmd_param)

    o = sub.add_parser("oracle", help="exact reduced-f by exhaustive search")
    o.add_argument("--input", required=True)
    o.add_argument("--param", required=True, choices=sorted(PARAM_EVALUATORS))
    o.add_argument("--max-n", type=int, default=12)
    o.add_argument("--greedy", action="store_true", help="upper bound only")
    o.set_defaults(func=_cmd_oracle)

    s = sub.add_parser("seq", help="product-structure sequence builders")
    ssub = s.add_subparsers(dest="seq_command", required=True)
    sp = ssub.add_parser("product", help="build and verify a sequence from a certificate")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--cert", required=True)
    sp.add_argument("-q", type=int, default=None)
    sp.add_argument("--power", type=int, default=None, metavar="R")
    sp.add_argument("-o", "--out", help="write the projected sequence JSON")
    sp.add_argument("--padded-out", help="write the padded sequence JSON")
    sp.set_defaults(func=_cmd_seq)
    sv = ssub.add_parser("validate", help="static certificate checks")
    sv.add_argument("--graph", required=True)
    sv.add_argument("--cert", required=True)
    sv.set_defaults(func=_cmd_validate)

    d = sub.add_parser("diversity", help="distance profiles and bound checks")
    d.add_argument("--input", required=True)
    d.add_argument("--anchors", required=True, help="comma list of vertex ids")
    d.add_argument("-r", type=int, default=1)
    d.add_argument("--check", help="bound name, e.g. surface, treewidth, trivial")
    d.add_argument("--gamma", type=int)
    d.add_argument("--k", type=int)
    d.add_argument("--c", type=int)
    d.add_argument("--d", type=int)
    d.add_argument("--f-value", type=int)
    d.set_defaults(func=_cmd_diversity)

    v = sub.add_parser("verify", help="acceptance suites")
    from .verify import SUITES

    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--json", help="also write a JSON report")
    v.set_defaults(func=_cmd_verify)

    c = sub.add_parser("convert", help="format conversion")
    c.add_argument("--input", required=True)
    c.add_argument("--from", dest="source_format", required=True,
                   choices=["json", "edgelist"])
    c.add_argument("--to", dest="target_format", required=True,
                   choices=["json", "edgelist", "dot"])
    c.add_argument("-o", "--out")
    c.set_defaults(func=_cmd_convert)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TwinreduceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
