"""Text formats for graphs, embedded graphs and move systems, plus JSON certificates.

Graph::

    graph <n>
    e <u> <v>
    label <v> <text>
    # comment

Embedded graphs add ``rot <v> <u1> <u2> ...`` lines. Move systems::

    system <n>
    m <v> <u1> <u2> ...
    state <u1> <u2> ...

Writers are canonical: equal values serialise to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import FormatError
from .graph import Graph, members, vset
from .legal import Certificate, MoveSystem, OrbitReport
from .planar import EmbeddedGraph

CERTIFICATE_VERSION = 1


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _ints(parts, no: int, source) -> list[int]:
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(parts)!r}", no, source) from None


def _header(lines, word: str, source) -> int:
    try:
        no, line = next(lines)
    except StopIteration:
        raise FormatError(f"empty file; expected '{word} <n>'", 1, source) from None
    parts = line.split()
    if len(parts) != 2 or parts[0] != word:
        raise FormatError(f"expected '{word} <n>'", no, source)
    (n,) = _ints(parts[1:], no, source)
    if n < 0:
        raise FormatError("vertex count must be non-negative", no, source)
    return n


def _vertex(v: int, n: int, no: int, source) -> int:
    if not 0 <= v < n:
        raise FormatError(f"vertex {v} out of range for n={n}", no, source)
    return v


# ------------------------------------------------------------------- graphs


def parse_graph_text(text: str, source: str | None = None) -> tuple[Graph, list[tuple[int, ...]] | None]:
    """Parse a graph file; the second value is the rotation if ``rot`` lines are present."""
    lines = _lines(text)
    n = _header(lines, "graph", source)
    edges: set[tuple[int, int]] = set()
    labels: list[str] | None = None
    rot: dict[int, tuple[int, ...]] = {}
    for no, line in lines:
        kind, _, rest = line.partition(" ")
        if kind == "e":
            u, v = (_vertex(x, n, no, source) for x in _ints(rest.split(), no, source))
            if u == v:
                raise FormatError(f"self-loop at vertex {u}", no, source)
            edges.add((min(u, v), max(u, v)))
        elif kind == "label":
            vs, _, lab = rest.strip().partition(" ")
            (v,) = _ints([vs], no, source)
            _vertex(v, n, no, source)
            if labels is None:
                labels = [str(i) for i in range(n)]
            labels[v] = lab.strip()
        elif kind == "rot":
            vals = _ints(rest.split(), no, source)
            if not vals:
                raise FormatError("rot line needs a vertex", no, source)
            v = _vertex(vals[0], n, no, source)
            if v in rot:
                raise FormatError(f"second rot line for vertex {v}", no, source)
            rot[v] = tuple(_vertex(u, n, no, source) for u in vals[1:])
        else:
            raise FormatError(f"unknown record {kind!r}", no, source)
    g = Graph(n, sorted(edges), labels)
    if not rot:
        return g, None
    rotation = []
    for v in range(n):
        r = rot.get(v, ())
        if vset(r) != g.adj[v] or len(r) != len(set(r)):
            raise FormatError(f"rotation at vertex {v} does not list its neighbours exactly once", None, source)
        rotation.append(r)
    return g, rotation


def _has_custom_labels(g: Graph) -> bool:
    return g.labels is not None and any(g.labels[v] != str(v) for v in range(g.n))


def format_graph(g: Graph, rotation=None) -> str:
    out = [f"graph {g.n}"]
    out += [f"e {u} {v}" for u, v in g.edges()]
    if _has_custom_labels(g):
        out += [f"label {v} {g.labels[v]}" for v in range(g.n)]
    if rotation is not None:
        out += ["rot " + " ".join(map(str, (v, *rotation[v]))) for v in range(g.n)]
    return "\n".join(out) + "\n"


def format_embedded(e: EmbeddedGraph) -> str:
    return format_graph(e.graph, e.rotation)


def parse_graph(text: str, source: str | None = None) -> Graph:
    return parse_graph_text(text, source)[0]


def parse_embedded(text: str, source: str | None = None) -> EmbeddedGraph:
    g, rot = parse_graph_text(text, source)
    if rot is None:
        raise FormatError("embedded graph needs rot lines", None, source)
    return EmbeddedGraph(g, rot)


# ------------------------------------------------------------------ systems


def parse_system(text: str, source: str | None = None) -> tuple[MoveSystem, int | None]:
    lines = _lines(text)
    n = _header(lines, "system", source)
    moves: list[int | None] = [None] * n
    state = None
    for no, line in lines:
        kind, _, rest = line.partition(" ")
        vals = _ints(rest.split(), no, source)
        if kind == "m":
            if not vals:
                raise FormatError("move line needs a vertex", no, source)
            v = _vertex(vals[0], n, no, source)
            mv = vset(_vertex(u, n, no, source) for u in vals[1:])
            if not (mv >> v) & 1:
                raise FormatError(f"move at {v} does not contain {v}", no, source)
            if moves[v] is not None:
                raise FormatError(f"second move for vertex {v}", no, source)
            moves[v] = mv
        elif kind == "state":
            if state is not None:
                raise FormatError("second state line", no, source)
            state = vset(_vertex(u, n, no, source) for u in vals)
        else:
            raise FormatError(f"unknown record {kind!r}", no, source)
    missing = [v for v in range(n) if moves[v] is None]
    if missing:
        raise FormatError(f"no move for vertex {missing[0]}", None, source)
    return MoveSystem(tuple(moves)), state


def format_system(m: MoveSystem, state: int | None = None) -> str:
    out = [f"system {m.n}"]
    out += ["m " + " ".join(map(str, (v, *members(mv)))) for v, mv in enumerate(m.moves)]
    if state is not None:
        out.append("state " + " ".join(map(str, members(state))) if state else "state")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- certificates


def certificate_dict(cert: Certificate) -> dict:
    rep = cert.report
    d = {
        "version": CERTIFICATE_VERSION,
        "graph": cert.graph_hash,
        "system": [members(mv) for mv in cert.system.moves],
        "state": members(cert.state),
        "rank": rep.rank,
        "orbit_size": rep.orbit_size,
        "verdict": rep.verdict,
    }
    if rep.witness is not None:
        d["witness"] = rep.witness.to_dict()
    return d


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def certificate_json(cert: Certificate) -> str:
    return dumps(certificate_dict(cert))


def parse_certificate(text: str, source: str | None = None) -> dict:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, source) from None
    for key in ("version", "graph", "system", "state", "rank", "orbit_size", "verdict"):
        if key not in d:
            raise FormatError(f"certificate lacks {key!r}", None, source)
    return d


VERDICT_FIELDS = ("graph", "rank", "orbit_size", "verdict", "witness")


def verdict_fields(d: dict) -> dict:
    return {k: d.get(k) for k in VERDICT_FIELDS}


def report_dict(rep: OrbitReport) -> dict:
    return rep.to_dict()


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
