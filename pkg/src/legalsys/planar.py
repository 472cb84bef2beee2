"""Rotation systems, face tracing, vertex-face incidence graphs and the
Hamilton cycle / strongly legal state correspondence, plus the reflection
group condition checkers that only need the combinatorics of an embedding.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Sequence
from dataclasses import dataclass, field

from .errors import UsageError
from .graph import (
    Graph,
    is_biconnected,
    is_connected,
    is_strongly_legal_state,
    kappa2,
    members,
    popcount,
    reach,
    vset,
)
from .legal import MoveSystem


class EmbeddedGraph:
    """A graph with a rotation system.

    ``rotation[v]`` lists the neighbours of ``v`` in cyclic order. The face to
    the left of the dart ``u -> v`` continues with ``v -> w`` where ``w``
    follows ``u`` in ``rotation[v]``.
    """

    __slots__ = ("graph", "rotation", "_succ", "_faces", "_dart_face")

    def __init__(self, graph: Graph, rotation: Sequence[Sequence[int]]):
        if len(rotation) != graph.n:
            raise UsageError(f"rotation has {len(rotation)} entries for {graph.n} vertices")
        rot = tuple(tuple(int(x) for x in r) for r in rotation)
        for v, r in enumerate(rot):
            if len(set(r)) != len(r) or vset(r) != graph.adj[v]:
                raise UsageError(f"rotation at vertex {v} does not list its neighbours exactly once")
        self.graph = graph
        self.rotation = rot
        self._succ = [{u: r[(i + 1) % len(r)] for i, u in enumerate(r)} for r in rot]
        self._faces = None
        self._dart_face = None

    @classmethod
    def from_rotation(cls, n: int, rotation: Sequence[Sequence[int]], labels=None) -> EmbeddedGraph:
        edges = {(min(u, v), max(u, v)) for u, r in enumerate(rotation) for v in r}
        return cls(Graph(n, sorted(edges), labels), rotation)

    @classmethod
    def from_faces(cls, graph: Graph, faces: Sequence[Sequence[int]]) -> EmbeddedGraph:
        """Rotation from consistently oriented face boundaries."""
        succ: list[dict[int, int]] = [{} for _ in range(graph.n)]
        for f in faces:
            k = len(f)
            for i in range(k):
                u, v, w = f[i - 1], f[i], f[(i + 1) % k]
                if u in succ[v]:
                    raise UsageError(f"faces are not consistently oriented at vertex {v}")
                succ[v][u] = w
        rotation = []
        for v in range(graph.n):
            nb = members(graph.adj[v])
            if not nb:
                rotation.append(())
                continue
            order = [nb[0]]
            while len(order) < len(nb):
                nxt = succ[v].get(order[-1])
                if nxt is None or nxt in order:
                    raise UsageError(f"faces do not close up around vertex {v}")
                order.append(nxt)
            rotation.append(tuple(order))
        return cls(graph, rotation)

    def succ(self, v: int, u: int) -> int:
        return self._succ[v][u]

    @property
    def n(self) -> int:
        return self.graph.n

    def faces(self) -> list[tuple[int, ...]]:
        if self._faces is None:
            self._faces, self._dart_face = _trace(self)
        return self._faces

    def dart_face(self, u: int, v: int) -> int:
        self.faces()
        return self._dart_face[(u, v)]

    def edge_faces(self, u: int, v: int) -> tuple[int, int]:
        return self.dart_face(u, v), self.dart_face(v, u)

    def euler_characteristic(self) -> int:
        return self.graph.n - self.graph.num_edges + len(self.faces())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddedGraph):
            return NotImplemented
        return self.graph == other.graph and self.rotation == other.rotation

    def __hash__(self) -> int:
        return hash((self.graph, self.rotation))


def _trace(e: EmbeddedGraph):
    dart_face: dict[tuple[int, int], int] = {}
    faces = []
    for u in range(e.n):
        for v in e.rotation[u]:
            if (u, v) in dart_face:
                continue
            fid = len(faces)
            walk = []
            a, b = u, v
            while (a, b) not in dart_face:
                dart_face[(a, b)] = fid
                walk.append(a)
                a, b = b, e.succ(b, a)
            if (a, b) != (u, v):
                raise UsageError(f"face tracing does not close at vertex {a}")
            faces.append(tuple(walk))
    return faces, dart_face


def trace_faces(e: EmbeddedGraph, *, check_euler: bool = True) -> list[tuple[int, ...]]:
    """Faces as cyclic vertex sequences; connected inputs must be spherical."""
    faces = e.faces()
    if check_euler and e.n and is_connected(e.graph) and e.euler_characteristic() != 2:
        raise UsageError(f"rotation system has Euler characteristic {e.euler_characteristic()}, not 2")
    return faces


def rotation_from_coordinates(g: Graph, coords: Sequence[tuple[float, float]]) -> list[tuple[int, ...]]:
    """Counter-clockwise neighbour order of a straight-line drawing."""
    import math

    rot = []
    for v in range(g.n):
        x, y = coords[v]
        nb = sorted(members(g.adj[v]), key=lambda u: math.atan2(coords[u][1] - y, coords[u][0] - x))
        rot.append(tuple(nb))
    return rot


# --------------------------------------------------------------- VF graphs


@dataclass(frozen=True)
class VFGraph:
    """Vertex-face incidence graph; vertices ``0..n-1`` come from ``V``, the rest from faces."""

    graph: Graph
    embedding: EmbeddedGraph
    n_vertices: int
    faces: tuple[tuple[int, ...], ...]
    source: EmbeddedGraph = field(repr=False)

    def face_vertex(self, f: int) -> int:
        return self.n_vertices + f

    @property
    def vertex_part(self) -> int:
        return (1 << self.n_vertices) - 1

    @property
    def face_part(self) -> int:
        return self.graph.full & ~self.vertex_part


def _require_simple_biconnected(e: EmbeddedGraph) -> None:
    if e.n < 3 or not is_biconnected(e.graph):
        raise UsageError("embedded graph must be 2-connected")
    trace_faces(e)


def vf_graph(e: EmbeddedGraph) -> VFGraph:
    _require_simple_biconnected(e)
    faces = e.faces()
    n = e.n
    edges = set()
    for fi, f in enumerate(faces):
        for v in f:
            edges.add((v, n + fi))
    labels = [e.graph.label(v) for v in range(n)] + [f"f{i}" for i in range(len(faces))]
    g = Graph(n + len(faces), sorted(edges), labels)
    quads = []
    for u, v in e.graph.edges():
        fl, fr = e.edge_faces(u, v)
        quads.append((u, n + fr, v, n + fl))
    try:
        emb = EmbeddedGraph.from_faces(g, quads)
    except UsageError:
        emb = EmbeddedGraph.from_faces(g, [q[::-1] for q in quads])
    trace_faces(emb)
    if kappa2(g) != 0:
        raise AssertionError("vertex-face graph of a spherical embedding must have zero curvature")
    return VFGraph(g, emb, n, tuple(faces), e)


# ------------------------------------------------ Hamilton cycles and states


def _check_subcubic(e: EmbeddedGraph) -> None:
    bad = [v for v in range(e.n) if e.graph.degree(v) > 3]
    if bad:
        raise UsageError(f"vertex {bad[0]} has degree {e.graph.degree(bad[0])}; need a graph of maximum degree 3")


def _cycle_edges(cycle: Sequence[int]) -> set[tuple[int, int]]:
    k = len(cycle)
    return {(min(cycle[i], cycle[(i + 1) % k]), max(cycle[i], cycle[(i + 1) % k])) for i in range(k)}


@dataclass(frozen=True)
class HamiltonState:
    state: int
    faces_in: int
    faces_out: int
    initial: int
    terminal: int

    def system(self, vf: VFGraph) -> MoveSystem:
        """The two-move system ``{faces, vertices}``."""
        return MoveSystem(tuple(vf.vertex_part if v < vf.n_vertices else vf.face_part for v in range(vf.graph.n)))


def hamilton_to_state(e: EmbeddedGraph, cycle: Sequence[int], vf: VFGraph | None = None) -> HamiltonState:
    """Strongly legal state of ``VF`` from a Hamilton cycle.

    Faces on the side of the cycle containing the face left of the dart
    ``cycle[0] -> cycle[1]`` go in; so does the lower endpoint of every chord.
    Vertices on no chord (degree two) go in as well.
    """
    _check_subcubic(e)
    vf = vf or vf_graph(e)
    g = e.graph
    cycle = list(cycle)
    if len(cycle) != g.n or len(set(cycle)) != g.n or not all(g.has_edge(cycle[i], cycle[(i + 1) % g.n]) for i in range(g.n)):
        raise UsageError("not a Hamiltonian cycle")
    on_cycle = _cycle_edges(cycle)
    faces = e.faces()
    # flood the faces across chords starting from the root face
    root = e.dart_face(cycle[0], cycle[1])
    side = {root}
    stack = [root]
    while stack:
        f = stack.pop()
        fv = faces[f]
        for i in range(len(fv)):
            u, v = fv[i], fv[(i + 1) % len(fv)]
            if (min(u, v), max(u, v)) in on_cycle:
                continue
            h = e.dart_face(v, u)
            if h not in side:
                side.add(h)
                stack.append(h)
    n = g.n
    faces_in = vset(n + f for f in side)
    faces_out = vf.face_part & ~faces_in
    initial = 0
    chord_vertices = 0
    for u, v in g.edges():
        if (u, v) not in on_cycle:
            initial |= 1 << u
            chord_vertices |= (1 << u) | (1 << v)
    initial |= g.full & ~chord_vertices
    terminal = g.full & ~initial
    state = faces_in | initial
    if not is_strongly_legal_state(vf.graph, state):
        raise AssertionError("constructed state is not strongly legal")
    return HamiltonState(state, faces_in, faces_out, initial, terminal)


def state_to_hamilton(e: EmbeddedGraph, state: int, vf: VFGraph | None = None) -> tuple[int, ...]:
    """The edges whose two faces lie on different sides of ``state`` form a Hamilton cycle."""
    _check_subcubic(e)
    vf = vf or vf_graph(e)
    if not is_strongly_legal_state(vf.graph, state):
        raise UsageError("state is not strongly legal in the vertex-face graph")
    n = e.n
    picked = [0] * n
    for u, v in e.graph.edges():
        fl, fr = e.edge_faces(u, v)
        if ((state >> (n + fl)) & 1) != ((state >> (n + fr)) & 1):
            picked[u] |= 1 << v
            picked[v] |= 1 << u
    if any(popcount(r) != 2 for r in picked):
        raise AssertionError("selected edges are not 2-regular")
    h = Graph.from_rows(picked)
    if reach(h, 0, h.full) != h.full:
        raise AssertionError("selected edges form more than one cycle")
    cyc = [0]
    prev = -1
    while True:
        nb = members(picked[cyc[-1]])
        nxt = nb[0] if nb[0] != prev else nb[1]
        if nxt == 0:
            break
        prev = cyc[-1]
        cyc.append(nxt)
    return tuple(cyc)


# ------------------------------------------------------- condition checkers


@dataclass(frozen=True)
class Verdict:
    conditions: dict
    witnesses: dict

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def to_dict(self) -> dict:
        return {"pass": self.passed, "conditions": dict(self.conditions), "witnesses": dict(self.witnesses)}


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for a, b in g.edges():
        for c in members(g.adj[a] & g.adj[b]):
            if c > b:
                out.append((a, b, c))
    return out


def four_cycles(g: Graph) -> list[tuple[int, int, int, int]]:
    """Every 4-cycle once, as ``(a, b, c, d)`` with ``a`` smallest and ``b < d``."""
    out = []
    for a in range(g.n):
        for c in range(a + 1, g.n):
            common = [x for x in members(g.adj[a] & g.adj[c]) if x > a]
            for b, d in itertools.combinations(common, 2):
                out.append((a, b, c, d))
    return out


def _face_sets(e: EmbeddedGraph) -> dict[int, list[int]]:
    by_set: dict[int, list[int]] = {}
    for i, f in enumerate(e.faces()):
        by_set.setdefault(vset(f), []).append(i)
    return by_set


def _is_face_cycle(e: EmbeddedGraph, cyc: Sequence[int]) -> bool:
    faces = e.faces()
    s = vset(cyc)
    for f in faces:
        if len(f) == len(cyc) and vset(f) == s and _cycle_edges(f) == _cycle_edges(cyc):
            return True
    return False


def _two_triangles(e: EmbeddedGraph, cyc: Sequence[int]) -> bool:
    a, b, c, d = cyc
    g = e.graph
    if g.has_edge(a, c) and _is_face_cycle(e, (a, b, c)) and _is_face_cycle(e, (a, c, d)):
        return True
    if g.has_edge(b, d) and _is_face_cycle(e, (b, c, d)) and _is_face_cycle(e, (b, d, a)):
        return True
    return False


def _short_cycle_condition(e: EmbeddedGraph, allow_square_faces: bool):
    g = e.graph
    for t in triangles(g):
        if not _is_face_cycle(e, t):
            return False, list(t)
    for q in four_cycles(g):
        if allow_square_faces and _is_face_cycle(e, q):
            continue
        if not _two_triangles(e, q):
            return False, list(q)
    return True, None


def _is_small_exception(g: Graph, names: Sequence[str]) -> str | None:
    n, m = g.n, g.num_edges
    degs = sorted(g.degree(v) for v in range(n))
    if "triangle" in names and n == 3 and m == 3:
        return "triangle"
    if "K4" in names and n == 4 and m == 6:
        return "K4"
    if "C4" in names and n == 4 and m == 4 and degs == [2, 2, 2, 2]:
        return "C4"
    if "W5" in names and n == 5 and m == 8 and degs == [3, 3, 3, 3, 4]:
        return "W5"
    return None


def pogorelov_check(e: EmbeddedGraph) -> Verdict:
    trace_faces(e)
    g = e.graph
    bad_face = next((list(f) for f in e.faces() if len(f) != 3), None)
    short_ok, short_w = _short_cycle_condition(e, allow_square_faces=False)
    exc = _is_small_exception(g, ("triangle", "K4"))
    return Verdict(
        {"triangular_faces": bad_face is None, "short_cycles": short_ok, "not_excluded": exc is None},
        {"triangular_faces": bad_face, "short_cycles": short_w, "not_excluded": exc},
    )


def _is_quad(e: EmbeddedGraph, f: Sequence[int]) -> bool:
    g = e.graph
    if len(f) != 4 or len(set(f)) != 4:
        return False
    a, b, c, d = f
    return not g.has_edge(a, c) and not g.has_edge(b, d)


def cusped_check(e: EmbeddedGraph) -> Verdict:
    trace_faces(e)
    g = e.graph
    faces = e.faces()
    bad_face = None
    quads = []
    for f in faces:
        if len(f) == 3 and len(set(f)) == 3:
            continue
        if _is_quad(e, f):
            quads.append(f)
            continue
        bad_face = list(f)
        break
    meet_w = None
    for p, q in itertools.combinations(quads, 2):
        common = vset(p) & vset(q)
        k = popcount(common)
        if k <= 1:
            continue
        shared = members(common)
        edge = (shared[0], shared[1])
        if k == 2 and edge in _cycle_edges(p) and edge in _cycle_edges(q):
            continue
        meet_w = [list(p), list(q)]
        break
    short_ok, short_w = _short_cycle_condition(e, allow_square_faces=True)
    exc = _is_small_exception(g, ("triangle", "K4", "C4", "W5"))
    return Verdict(
        {
            "faces_triangles_or_quads": bad_face is None,
            "quads_meet_properly": meet_w is None,
            "short_cycles": short_ok,
            "not_excluded": exc is None,
        },
        {
            "faces_triangles_or_quads": bad_face,
            "quads_meet_properly": meet_w,
            "short_cycles": short_w,
            "not_excluded": exc,
        },
    )


def relhyp_quads_check(g: Graph) -> tuple[bool, tuple[int, ...] | None]:
    """Look for an induced join of two nonadjacent vertices with three vertices not forming a triangle.

    Returns ``(True, None)`` if there is none, else ``(False, (b1, b2, c1, c2, c3))``.
    """
    adj = g.adj
    for b1 in range(g.n):
        for b2 in range(b1 + 1, g.n):
            if (adj[b1] >> b2) & 1:
                continue
            common = members(adj[b1] & adj[b2])
            if len(common) < 3:
                continue
            for c in itertools.combinations(common, 3):
                x, y, z = c
                if not (g.has_edge(x, y) and g.has_edge(y, z) and g.has_edge(x, z)):
                    return False, (b1, b2, *c)
    return True, None


@dataclass(frozen=True)
class TBWSResult:
    ok: bool
    failures: tuple
    system: MoveSystem
    state: int


def tbws_check(g: Graph, a1: int, a2: int, b1: int, b2: int) -> TBWSResult:
    """Check the two conditions on ``A_i + B_j`` and emit the system ``{A, B}``.

    Condition one: any two vertices of ``A_i`` are joined by a path inside
    ``A_i + B_j``. Condition two: every vertex of ``B_j`` has a neighbour in ``A_i``.
    """
    parts = (a1, a2, b1, b2)
    if any(p & q for p, q in itertools.combinations(parts, 2)) or (a1 | a2 | b1 | b2) != g.full:
        raise UsageError("the four sets must partition the vertex set")
    a, b = a1 | a2, b1 | b2
    for side in (a, b):
        for v in members(side):
            if g.adj[v] & side:
                raise UsageError("A and B must be the two sides of a bipartition")
    failures = []
    for i, ai in enumerate((a1, a2), 1):
        for j, bj in enumerate((b1, b2), 1):
            s = ai | bj
            if ai:
                comp = reach(g, members(ai)[0], s)
                if ai & ~comp:
                    failures.append(("path", i, j, members(ai & ~comp)[0]))
            for v in members(bj):
                if not g.adj[v] & ai:
                    failures.append(("adjacent", i, j, v))
                    break
    system = MoveSystem(tuple(a if (a >> v) & 1 else b for v in range(g.n)))
    return TBWSResult(not failures, tuple(failures), system, a1 | b1)


def barycentric_skeleton(e: EmbeddedGraph) -> tuple[Graph, dict]:
    """Vertices, edges and faces as one vertex set, joined by incidence.

    Returns the graph and an index map with keys ``vertex``, ``edge`` and ``face``.
    """
    _require_simple_biconnected(e)
    g = e.graph
    n = g.n
    edges = g.edges()
    faces = e.faces()
    m = len(edges)
    eidx = {uv: n + i for i, uv in enumerate(edges)}
    fbase = n + m
    out = set()
    for (u, v), x in eidx.items():
        out.add((u, x))
        out.add((v, x))
        for f in e.edge_faces(u, v):
            out.add((x, fbase + f))
    for fi, f in enumerate(faces):
        for v in f:
            out.add((v, fbase + fi))
    labels = [g.label(v) for v in range(n)] + [f"e{u}-{v}" for u, v in edges] + [f"f{i}" for i in range(len(faces))]
    h = Graph(n + m + len(faces), sorted(out), labels)
    index = {"vertex": list(range(n)), "edge": [eidx[uv] for uv in edges], "face": [fbase + i for i in range(len(faces))]}
    return h, index


# ---------------------------------------------------- cubic map generation


def _replace(rot: list[list[int]], v: int, old: int, new: int) -> None:
    rot[v][rot[v].index(old)] = new


def add_face_edge(e: EmbeddedGraph, dart1: tuple[int, int], dart2: tuple[int, int]) -> EmbeddedGraph:
    """Subdivide two edges bordering the same face and join the new vertices across it."""
    (a, b), (c, d) = dart1, dart2
    if e.dart_face(a, b) != e.dart_face(c, d) or dart1 == dart2:
        raise UsageError("darts must be distinct and on the same face")
    rot = [list(r) for r in e.rotation]
    x, y = e.n, e.n + 1
    _replace(rot, a, b, x)
    _replace(rot, b, a, x)
    _replace(rot, c, d, y)
    _replace(rot, d, c, y)
    rot.append([a, y, b])
    rot.append([c, x, d])
    return EmbeddedGraph.from_rotation(e.n + 2, rot)


def insert_diamond(e: EmbeddedGraph, u: int, v: int) -> EmbeddedGraph:
    """Replace the edge ``uv`` by ``u - a = {c, d} = b - v`` with ``c d`` adjacent.

    The result has a 2-edge cut, so it is 2-connected but not 3-connected.
    """
    rot = [list(r) for r in e.rotation]
    a, b, c, d = range(e.n, e.n + 4)
    _replace(rot, u, v, a)
    _replace(rot, v, u, b)
    rot += [[u, c, d], [v, d, c], [a, b, d], [a, c, b]]
    out = EmbeddedGraph.from_rotation(e.n + 4, rot)
    if out.euler_characteristic() != 2:
        rot[-4:] = [[u, d, c], [v, c, d], [a, d, b], [a, b, c]]
        out = EmbeddedGraph.from_rotation(e.n + 4, rot)
    return out


def map_code(e: EmbeddedGraph) -> tuple:
    """Canonical code of the map up to orientation-preserving or -reversing isomorphism."""
    best = None
    for mirror in (False, True):
        rot = [r[::-1] if mirror else r for r in e.rotation]
        pos = [{u: i for i, u in enumerate(r)} for r in rot]
        for r0 in range(e.n):
            for first in rot[r0]:
                num = {r0: 0}
                order = [r0]
                start = {r0: first}
                code = []
                i = 0
                while i < len(order):
                    v = order[i]
                    r = rot[v]
                    k = pos[v][start[v]]
                    for j in range(len(r)):
                        w = r[(k + j) % len(r)]
                        if w not in num:
                            num[w] = len(order)
                            order.append(w)
                            start[w] = v
                        code.append(num[w])
                    code.append(-1)
                    i += 1
                code = tuple(code)
                if best is None or code < best:
                    best = code
    return best


def k4_map() -> EmbeddedGraph:
    return EmbeddedGraph.from_rotation(4, [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)])


def _children(e: EmbeddedGraph, max_n: int):
    if e.n + 2 <= max_n:
        for f in e.faces():
            darts = [(f[i], f[(i + 1) % len(f)]) for i in range(len(f))]
            for d1, d2 in itertools.combinations(darts, 2):
                yield add_face_edge(e, d1, d2)
    if e.n + 4 <= max_n:
        for u, v in e.graph.edges():
            yield insert_diamond(e, u, v)


def cubic_planar_maps(max_n: int) -> list[EmbeddedGraph]:
    """Cubic 2-connected plane maps up to ``max_n`` vertices grown from ``K4``, one per map class."""
    seen = {}
    frontier = [k4_map()]
    seen[map_code(frontier[0])] = frontier[0]
    while frontier:
        nxt = []
        for e in frontier:
            for c in _children(e, max_n):
                key = map_code(c)
                if key not in seen:
                    seen[key] = c
                    nxt.append(c)
        frontier = nxt
    return sorted(seen.values(), key=lambda m: (m.n, map_code(m)))


def random_cubic_planar_map(max_n: int, rng: random.Random) -> EmbeddedGraph:
    e = k4_map()
    target = rng.randrange(4, max_n + 1, 2)
    while e.n < target:
        if e.n + 4 <= target and rng.random() < 0.2:
            u, v = rng.choice(e.graph.edges())
            e = insert_diamond(e, u, v)
            continue
        f = rng.choice(e.faces())
        i, j = rng.sample(range(len(f)), 2)
        e = add_face_edge(e, (f[i], f[(i + 1) % len(f)]), (f[j], f[(j + 1) % len(f)]))
    return e


__all__ = [
    "EmbeddedGraph",
    "VFGraph",
    "Verdict",
    "TBWSResult",
    "HamiltonState",
    "trace_faces",
    "rotation_from_coordinates",
    "vf_graph",
    "hamilton_to_state",
    "state_to_hamilton",
    "pogorelov_check",
    "cusped_check",
    "relhyp_quads_check",
    "tbws_check",
    "barycentric_skeleton",
    "triangles",
    "four_cycles",
    "cubic_planar_maps",
    "random_cubic_planar_map",
    "map_code",
    "add_face_edge",
    "insert_diamond",
    "k4_map",
]
