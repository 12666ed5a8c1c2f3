"""Serialisation: graph and sequence JSON, edge lists, DOT export.

Graph JSON: {"n": int, "black": [[u, v], ...], "red": [[u, v], ...]}; a
plain graph is the special case with no red pairs. Sequence JSON:
{"base": <graph>, "merges": [[u, v, w], ...], "witnesses": {"orderings":
[...]}} with the witness block optional. Certificate JSON: {"H": <graph>,
"decomp": {"parent": [...], "bags": [[...], ...], "root": i}, "path_len":
l, "embed": {"v": [h, p], ...}, "apex": [...], "r": r}.

Edge lists are lossless for graphs: one "u v" line per edge and one bare
"u" line per isolated vertex.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import TwinreduceError
from .graph import Graph
from .product import ProductCertificate, RootedTreeDecomposition
from .trigraph import Merge, ReductionSequence, Trigraph


class ParseError(TwinreduceError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


# ------------------------------------------------------------------- graphs

def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "black": [[u, v] for u, v in g.edges()], "red": []}


def trigraph_to_json(t: Trigraph) -> dict:
    ids = t.vertices()
    if ids != list(range(len(ids))):
        raise TwinreduceError("only trigraphs on contiguous ids 0..n-1 serialise to JSON")
    return {
        "n": len(ids),
        "black": [[u, v] for u, v in t.black_edges()],
        "red": [[u, v] for u, v in t.red_edges()],
    }


def graph_from_json(data: dict) -> Graph:
    if data.get("red"):
        raise ParseError("input has red edges; a plain graph was expected")
    g = Graph(int(data["n"]))
    for u, v in data.get("black", data.get("edges", [])):
        g.add_edge(int(u), int(v))
    return g


def trigraph_from_json(data: dict) -> Trigraph:
    return Trigraph(
        int(data["n"]),
        black=[(int(u), int(v)) for u, v in data.get("black", [])],
        red=[(int(u), int(v)) for u, v in data.get("red", [])],
    )


def edgelist_to_text(g: Graph) -> str:
    lines = [f"{u} {v}" for u, v in g.edges()]
    covered = set()
    for u, v in g.edges():
        covered.add(u)
        covered.add(v)
    lines.extend(str(v) for v in range(g.n) if v not in covered)
    return "\n".join(lines) + ("\n" if lines else "")


def graph_from_edgelist(text: str) -> Graph:
    edges = []
    singles = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"not an integer token: {raw!r}", lineno)
        if any(x < 0 for x in nums):
            raise ParseError("negative vertex id", lineno)
        if len(nums) == 1:
            singles.append(nums[0])
        elif len(nums) == 2:
            edges.append((nums[0], nums[1]))
        else:
            raise ParseError(f"expected 1 or 2 tokens, got {len(nums)}", lineno)
        top = max(top, *nums)
    g = Graph(top + 1)
    for u, v in edges:
        g.add_edge(u, v)
    return g


def trigraph_to_dot(t: Trigraph, name: str = "trigraph") -> str:
    lines = [f"graph {name} {{"]
    for v in t.vertices():
        lines.append(f"  {v};")
    for u, v in t.black_edges():
        lines.append(f"  {u} -- {v};")
    for u, v in t.red_edges():
        lines.append(f'  {u} -- {v} [color=red];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(g: Graph, name: str = "graph") -> str:
    return trigraph_to_dot(Trigraph.from_graph(g), name)


# ---------------------------------------------------------------- sequences

def sequence_to_json(seq: ReductionSequence) -> dict:
    out: dict[str, Any] = {
        "base": trigraph_to_json(seq.base),
        "merges": [[u, v, w] for u, v, w in seq.merges],
    }
    if seq.witnesses is not None:
        out["witnesses"] = {"orderings": [list(o) for o in seq.witnesses]}
    return out


def sequence_from_json(data: dict) -> ReductionSequence:
    base = trigraph_from_json(data["base"])
    merges = [Merge(int(u), int(v), int(w)) for u, v, w in data.get("merges", [])]
    witnesses = None
    if "witnesses" in data and data["witnesses"]:
        witnesses = [list(map(int, o)) for o in data["witnesses"]["orderings"]]
    return ReductionSequence(base, merges, witnesses)


# ------------------------------------------------------------- certificates

def certificate_to_json(cert: ProductCertificate) -> dict:
    nodes = sorted(cert.decomp.bags)
    index = {n: i for i, n in enumerate(nodes)}
    parent = [
        -1 if cert.decomp.parent[n] is None else index[cert.decomp.parent[n]]
        for n in nodes
    ]
    return {
        "H": graph_to_json(cert.host),
        "decomp": {
            "parent": parent,
            "bags": [sorted(cert.decomp.bags[n]) for n in nodes],
            "root": index[cert.decomp.root],
        },
        "path_len": cert.path_len,
        "embed": {str(v): [h, p] for v, (h, p) in sorted(cert.embed.items())},
        "apex": list(cert.apex),
        "r": cert.r,
    }


def certificate_from_json(data: dict) -> ProductCertificate:
    host = graph_from_json(data["H"])
    d = data["decomp"]
    bags = {i: frozenset(map(int, bag)) for i, bag in enumerate(d["bags"])}
    parent = {
        i: (None if p == -1 else int(p)) for i, p in enumerate(d["parent"])
    }
    decomp = RootedTreeDecomposition(bags, parent, int(d["root"]))
    embed = {int(v): (int(h), int(p)) for v, (h, p) in data["embed"].items()}
    return ProductCertificate(
        host, decomp, int(data["path_len"]), embed,
        tuple(int(a) for a in data.get("apex", [])), int(data.get("r", 1)),
    )


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(data: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
