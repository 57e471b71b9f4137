"""JSON documents for collections, witnesses and certificates.

A collection document is ``{"format_version": 1, "n": N, "graphs": [...]}``
where each graph is a list of ``[x_index, y_index]`` edges. Parsing is
strict: unknown fields, wrong versions, bad indices and duplicate edges are
all rejected with the location of the offending item.
"""
from __future__ import annotations

import json
import re
from typing import Any

from .core import (
    BipartiteGraph,
    ExtremalCertificate,
    FamilyKind,
    GraphCollection,
    Kind,
    Side,
    TransversalWitness,
    Vertex,
)

FORMAT_VERSION = 1
_FIELDS = ("format_version", "n", "graphs")


class FormatError(ValueError):
    def __init__(self, code: str, location: str, message: str):
        super().__init__(f"{code} at {location}: {message}")
        self.code = code
        self.location = location


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _load(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError("encoding", f"byte {exc.start}", "input is not UTF-8") from None
    else:
        text = data
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[:exc.pos].encode("utf-8"))
        raise FormatError("malformed_json", f"byte {offset} (line {exc.lineno}, column {exc.colno})",
                          exc.msg) from None


def doc_to_collection(doc: Any) -> GraphCollection:
    if not isinstance(doc, dict):
        raise FormatError("type", "$", "document must be a JSON object")
    unknown = sorted(set(doc) - set(_FIELDS))
    if unknown:
        raise FormatError("unknown_field", f"$.{unknown[0]}", "field is not part of the format")
    for name in _FIELDS:
        if name not in doc:
            raise FormatError("missing_field", f"$.{name}", "required field is absent")
    if not _is_int(doc["format_version"]):
        raise FormatError("type", "$.format_version", "must be an integer")
    if doc["format_version"] != FORMAT_VERSION:
        raise FormatError("version", "$.format_version", f"expected {FORMAT_VERSION}, got {doc['format_version']}")
    n = doc["n"]
    if not _is_int(n) or n < 1:
        raise FormatError("type", "$.n", "must be a positive integer")
    graphs = doc["graphs"]
    if not isinstance(graphs, list):
        raise FormatError("type", "$.graphs", "must be a list")
    if not graphs:
        raise FormatError("empty", "$.graphs", "at least one graph is required")
    out = []
    for k, edges in enumerate(graphs):
        where = f"$.graphs[{k}]"
        if not isinstance(edges, list):
            raise FormatError("type", where, "graph must be a list of edges")
        seen = set()
        for e, edge in enumerate(edges):
            loc = f"{where}[{e}]"
            if not (isinstance(edge, list) and len(edge) == 2 and all(_is_int(v) for v in edge)):
                raise FormatError("type", loc, "edge must be a pair of integers")
            i, j = edge
            if not (0 <= i < n and 0 <= j < n):
                raise FormatError("index_range", loc, f"indices must lie in [0, {n - 1}]")
            if (i, j) in seen:
                raise FormatError("duplicate_edge", loc, f"edge [{i}, {j}] listed twice")
            seen.add((i, j))
        out.append(BipartiteGraph.from_edges(n, seen))
    return GraphCollection(n, tuple(out))


def parse_collection(data: bytes | str) -> GraphCollection:
    return doc_to_collection(_load(data))


def collection_to_doc(c: GraphCollection) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "n": c.n,
        "graphs": [[list(e) for e in g.edges()] for g in c.graphs],
    }


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def serialize_collection(c: GraphCollection) -> str:
    return dumps(collection_to_doc(c))


# -- witnesses --------------------------------------------------------------------

_VERTEX = re.compile(r"^([XY])(\d+)$")


def vertex_name(v: Vertex) -> str:
    return str(v)


def parse_vertex(text: Any, location: str = "$") -> Vertex:
    m = _VERTEX.match(text) if isinstance(text, str) else None
    if m is None:
        raise FormatError("vertex", location, f"expected a name like 'X0' or 'Y3', got {text!r}")
    return Vertex(Side.X if m.group(1) == "X" else Side.Y, int(m.group(2)))


def witness_to_doc(w: TransversalWitness) -> dict:
    return {"kind": w.kind.value, "vertices": [vertex_name(v) for v in w.vertices],
            "colors": list(w.assignment)}


def doc_to_witness(doc: Any) -> TransversalWitness:
    """Accepts a witness document; extra keys (such as ``result``) are ignored."""
    if not isinstance(doc, dict):
        raise FormatError("type", "$", "witness must be a JSON object")
    for name in ("vertices", "colors"):
        if not isinstance(doc.get(name), list):
            raise FormatError("missing_field", f"$.{name}", "required list is absent")
    kind = doc.get("kind", Kind.PATH.value)
    try:
        kind = Kind(kind)
    except ValueError:
        raise FormatError("kind", "$.kind", f"unknown witness kind {kind!r}") from None
    vertices = [parse_vertex(v, f"$.vertices[{i}]") for i, v in enumerate(doc["vertices"])]
    colors = doc["colors"]
    for i, a in enumerate(colors):
        if not _is_int(a):
            raise FormatError("type", f"$.colors[{i}]", "color must be an integer")
    return TransversalWitness(kind, tuple(vertices), tuple(colors))


def parse_witness(data: bytes | str) -> TransversalWitness:
    return doc_to_witness(_load(data))


def certificate_to_doc(cert: ExtremalCertificate) -> dict:
    doc: dict[str, Any] = {"family": cert.family.value, "X1": sorted(cert.x1), "Y1": sorted(cert.y1)}
    if cert.family is FamilyKind.F_FAMILY:
        doc["x_star"] = cert.x_star
        doc["y_star"] = cert.y_star
        doc["variants"] = ["F'" if b else "F" for b in cert.variants]
    return doc
