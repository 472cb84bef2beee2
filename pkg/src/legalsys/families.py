"""Named graphs with their move systems and start states.

Every constructor returns a ``FamilyBundle``. Vertex labels follow the
figures they are drawn from wherever that is possible (Wagner vertices are
``1..8``, 600-cell grid vertices ``r,c``, hypercube vertices are bit strings
with the first coordinate leftmost).
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable
from dataclasses import dataclass, field

from .errors import UsageError
from .graph import Graph, bipartition, girth, is_legal_state, isomorphism, members, popcount, vset
from .legal import MoveSystem, move_span, scan_coset, validate_system, walk_coset
from .planar import EmbeddedGraph, rotation_from_coordinates, trace_faces


@dataclass
class FamilyBundle:
    name: str
    graph: Graph
    embedding: EmbeddedGraph | None = None
    system: MoveSystem | None = None
    state: int | None = None
    note: str = ""
    extra: dict = field(default_factory=dict)

    def check(self) -> None:
        """Bundled systems must be valid and bundled embeddings spherical."""
        if self.system is not None and validate_system(self.graph, self.system):
            raise AssertionError(f"{self.name}: bundled system violates the move properties")
        if self.embedding is not None:
            trace_faces(self.embedding)


def rotation_from_3d(g: Graph, coords) -> list[tuple[int, ...]]:
    """Neighbour order seen from outside a convex polytope centred at the origin."""
    rot = []
    for v in range(g.n):
        p = coords[v]
        norm = math.sqrt(sum(x * x for x in p))
        nrm = [x / norm for x in p]
        # any vector not parallel to the normal gives a tangent frame
        helper = (1.0, 0.0, 0.0) if abs(nrm[0]) < 0.9 else (0.0, 1.0, 0.0)
        e1 = _cross(nrm, helper)
        l1 = math.sqrt(sum(x * x for x in e1))
        e1 = [x / l1 for x in e1]
        e2 = _cross(nrm, e1)
        angle = {}
        for u in members(g.adj[v]):
            d = [coords[u][i] - p[i] for i in range(3)]
            angle[u] = math.atan2(_dot(d, e2), _dot(d, e1))
        rot.append(tuple(sorted(angle, key=angle.get)))
    return rot


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# ----------------------------------------------------------------- hypercube


def _cube_label(x: int, d: int) -> str:
    return "".join(str((x >> i) & 1) for i in range(d))


def cube_state_from_points(points, d: int) -> int:
    return vset(sum(b << i for i, b in enumerate(p)) for p in points)


CUBE3_STATE = ((0, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1))
CUBE4_STATE = (
    (1, 1, 1, 0),
    (1, 1, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 0, 0),
    (0, 0, 0, 1),
    (0, 0, 1, 1),
    (1, 0, 1, 1),
    (1, 1, 1, 1),
)


def hypercube_graph(d: int) -> Graph:
    n = 1 << d
    edges = [(x, x | (1 << i)) for x in range(n) for i in range(d) if not (x >> i) & 1]
    return Graph(n, edges, [_cube_label(x, d) for x in range(n)])


def _two_class_orbit_legal(g: Graph, a: int, b: int, s: int) -> bool:
    return all(is_legal_state(g, t) for t in (s, s ^ a, s ^ b, s ^ a ^ b))


def _lift_state(g: Graph, prev: int, d: int, a: int, b: int) -> int:
    """Two layers of the (d-1)-cube state, the upper one transformed by a coordinate permutation and a shift."""
    half = d - 1
    pts = members(prev)
    for perm in itertools.permutations(range(half)):
        moved = [sum(((x >> perm[i]) & 1) << i for i in range(half)) for x in pts]
        for shift in range(1 << half):
            s = vset(pts) | vset((y ^ shift) | (1 << half) for y in moved)
            if _two_class_orbit_legal(g, a, b, s):
                return s
    raise AssertionError(f"no lifted hypercube state in dimension {d}")


def hypercube_state(d: int) -> int:
    if d == 1:
        return 1
    if d == 2:
        return 0b0011
    if d == 3:
        return cube_state_from_points(CUBE3_STATE, 3)
    if d == 4:
        return cube_state_from_points(CUBE4_STATE, 4)
    g = hypercube_graph(d)
    a, b = bipartition(g)
    return _lift_state(g, hypercube_state(d - 1), d, a, b)


def hypercube(d: int = 3) -> FamilyBundle:
    if d < 1:
        raise UsageError("dimension must be at least 1")
    g = hypercube_graph(d)
    a, b = bipartition(g)
    emb = None
    if d == 3:
        coords = [tuple(2 * ((x >> i) & 1) - 1 for i in range(3)) for x in range(8)]
        emb = EmbeddedGraph(g, rotation_from_3d(g, coords))
    return FamilyBundle(
        f"hypercube-{d}",
        g,
        emb,
        MoveSystem.from_classes(g.n, [a, b]),
        hypercube_state(d),
        "moves are the two bipartition classes",
        {"classes": [a, b]},
    )


# ------------------------------------------------------------ small examples


def example_2_3() -> FamilyBundle:
    labels = ["1", "2", "3", "4"]
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], labels)
    m = MoveSystem((vset([0]), vset([1, 3]), vset([2]), vset([1, 3])))
    return FamilyBundle(
        "example-2-3",
        g,
        None,
        m,
        vset([3]),
        "three-class partition; vertices 2 and 4 share a move",
        {"illegal_start": vset([0, 1, 3])},
    )


def wagner() -> FamilyBundle:
    labels = [str(i) for i in range(1, 9)]
    edges = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    g = Graph(8, edges, labels)

    def s(*vs):
        return vset(v - 1 for v in vs)

    moves = [0] * 8
    for vs, mv in (
        ((1, 4), s(1, 4, 6, 7)),
        ((5, 8), s(2, 3, 5, 8)),
        ((2, 7), s(2, 4, 5, 7)),
        ((3, 6), s(1, 3, 6, 8)),
    ):
        for v in vs:
            moves[v - 1] = mv
    return FamilyBundle("wagner", g, None, MoveSystem(tuple(moves)), s(1, 2, 4, 8), "8-cycle with long diagonals")


TBWS_EDGES = (
    ("a1", "b1"), ("b1", "a2"), ("a2", "b2"), ("b2", "a3"), ("a1", "b5"),
    ("b5", "a2"), ("a2", "b6"), ("b6", "a3"), ("a3", "b4"), ("b4", "a4"),
    ("a4", "b5"), ("b5", "a5"), ("a5", "b6"), ("b6", "a6"), ("a6", "b3"),
    ("b3", "a5"), ("a5", "b2"), ("b2", "a4"), ("a4", "b1"), ("a2", "b3"),
)  # fmt: skip


def tbws_example() -> FamilyBundle:
    labels = [f"a{i}" for i in range(1, 7)] + [f"b{i}" for i in range(1, 7)]
    idx = {lab: i for i, lab in enumerate(labels)}
    g = Graph(12, [(idx[u], idx[v]) for u, v in TBWS_EDGES], labels)
    parts = {
        "A1": vset(idx[x] for x in ("a1", "a2", "a3")),
        "A2": vset(idx[x] for x in ("a4", "a5", "a6")),
        "B1": vset(idx[x] for x in ("b1", "b2", "b3")),
        "B2": vset(idx[x] for x in ("b4", "b5", "b6")),
    }
    a, b = parts["A1"] | parts["A2"], parts["B1"] | parts["B2"]
    return FamilyBundle(
        "tbws",
        g,
        None,
        MoveSystem(tuple(a if (a >> v) & 1 else b for v in range(12))),
        parts["A1"] | parts["B1"],
        "two halves of each side of a bipartite graph",
        {"parts": parts},
    )


def house() -> FamilyBundle:
    coords = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 3.41)]
    labels = ["(0,0)", "(2,0)", "(2,2)", "(0,2)", "(1,3.41)"]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)]
    g = Graph(5, edges, labels)
    emb = EmbeddedGraph(g, rotation_from_coordinates(g, coords))
    return FamilyBundle(
        "house",
        g,
        emb,
        note="square with a triangle on top",
        extra={"cycle": (0, 1, 2, 4, 3)},
    )


def triangular_prism() -> FamilyBundle:
    coords = []
    for z in (1.0, -1.0):
        for i in range(3):
            t = 2 * math.pi * i / 3
            coords.append((math.cos(t), math.sin(t), z))
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]
    g = Graph(6, edges, [f"t{i}" for i in range(3)] + [f"b{i}" for i in range(3)])
    return FamilyBundle("triangular-prism", g, EmbeddedGraph(g, rotation_from_3d(g, coords)))


def antiprism(n: int = 5) -> FamilyBundle:
    if n < 3:
        raise UsageError("antiprism needs n >= 3")
    coords = []
    for i in range(n):
        t = 2 * math.pi * i / n
        coords.append((math.cos(t), math.sin(t), 0.6))
    for i in range(n):
        t = 2 * math.pi * (i - 0.5) / n
        coords.append((math.cos(t), math.sin(t), -0.6))
    edges = []
    for i in range(n):
        edges += [(i, (i + 1) % n), (n + i, n + (i + 1) % n), (i, n + i), (i, n + (i + 1) % n)]
    g = Graph(2 * n, edges, [f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)])
    return FamilyBundle(f"antiprism-{n}", g, EmbeddedGraph(g, rotation_from_3d(g, coords)))


# --------------------------------------------------------------- icosahedra


def icosahedron_graph() -> tuple[Graph, list]:
    phi = (1 + 5**0.5) / 2
    pts = []
    for a in (-1, 1):
        for b in (-phi, phi):
            pts += [(0, a, b), (a, b, 0), (b, 0, a)]
    edges = []
    for i, j in itertools.combinations(range(12), 2):
        d2 = sum((pts[i][k] - pts[j][k]) ** 2 for k in range(3))
        if abs(d2 - 4) < 1e-9:
            edges.append((i, j))
    return Graph(12, edges, [f"x{i}" for i in range(12)]), pts


# Drawing of the icosahedron by polar position (angle, radius): three
# concentric triangles around a hexagon, the outer triangle closing around
# the back.
ICO_POSITIONS = (
    (90, 0.5), (210, 0.5), (330, 0.5), (30, 1), (150, 1), (270, 1),
    (90, 1.5), (210, 1.5), (330, 1.5), (30, 2), (150, 2), (270, 2),
)  # fmt: skip
ICO_DRAWN_EDGES = (
    (0, 1), (1, 2), (2, 0), (3, 0), (0, 4), (4, 1), (1, 5), (5, 2), (2, 3),
    (6, 3), (3, 8), (8, 5), (5, 7), (7, 4), (4, 6), (6, 0), (8, 2), (7, 1),
    (9, 6), (6, 10), (10, 7), (7, 11), (11, 8), (8, 9), (9, 3), (10, 4), (11, 5),
    (9, 10), (10, 11), (11, 9),
)  # fmt: skip
# colour pairs of the drawing and its legal one-per-colour state
ICO_COLOURS = ((0, 5), (2, 9), (1, 10), (3, 4), (7, 8), (11, 6))
ICO_LEGAL_START = (0, 2, 3, 7, 1, 11)


def _drawn_icosahedron() -> Graph:
    labels = [f"({a}:{r})" for a, r in ICO_POSITIONS]
    return Graph(12, ICO_DRAWN_EDGES, labels)


def icosahedral_system(g: Graph, colours=None) -> tuple[list[int], MoveSystem, int, list[int]]:
    """The six-colour system of an icosahedral graph.

    Colours are pairs of vertices at distance two, chosen so that every
    vertex sees exactly one foreign colour on none of its neighbours; the
    move at ``v`` is its own pair together with that absent pair. Without
    explicit ``colours`` the colouring of the reference drawing is carried
    over by an isomorphism. Returns the colour classes, the system, the
    first one-per-colour state with a legal orbit, and all one-per-colour
    states in Gray order.
    """
    if colours is None:
        phi = isomorphism(_drawn_icosahedron(), g)
        if phi is None:
            raise UsageError("not an icosahedral graph")
        colours = [(phi[a], phi[b]) for a, b in ICO_COLOURS]
    pairs = [vset(c) for c in colours]
    moves = [0] * g.n
    for v in range(g.n):
        own = next(c for c in pairs if (c >> v) & 1)
        absent = [c for c in pairs if not c & g.adj[v] and c != own]
        if len(absent) != 1:
            raise UsageError(f"vertex {v} does not miss exactly one colour")
        moves[v] = own | absent[0]
    m = MoveSystem(tuple(moves))
    base = vset(members(c)[0] for c in pairs)
    states = list(walk_coset(base, pairs))
    basis = move_span(m)
    start = next(s for s in states if scan_coset(g, basis, s).legal)
    return pairs, m, start, states


def icosahedron() -> FamilyBundle:
    """Icosahedron labelled as in the reference drawing; embedding from the convex realisation."""
    g = _drawn_icosahedron()
    h, pts = icosahedron_graph()
    phi = isomorphism(g, h)
    coords = [pts[phi[v]] for v in range(12)]
    pairs, m, _, states = icosahedral_system(g, ICO_COLOURS)
    return FamilyBundle(
        "icosahedron",
        g,
        EmbeddedGraph(g, rotation_from_3d(g, coords)),
        m,
        vset(ICO_LEGAL_START),
        "colours are pairs at distance two",
        {"colours": pairs, "one_per_colour": states},
    )


def dual_lobell_graph(n: int) -> tuple[Graph, list]:
    """Vertices: ``v*`` = 0, ``v_1..v_n`` = 1..n, ``w*`` = n+1, ``w_1..w_n`` = n+2..2n+1.

    ``w_i`` is adjacent to ``v_{i-2}`` and ``v_{i-1}``.
    """
    vs, ws = 0, n + 1

    def v(i):
        return 1 + (i - 1) % n

    def w(i):
        return n + 2 + (i - 1) % n

    edges = []
    coords: list = [None] * (2 * n + 2)
    coords[vs] = (0.0, 0.0, 1.2)
    coords[ws] = (0.0, 0.0, -1.2)
    for i in range(1, n + 1):
        edges += [(vs, v(i)), (ws, w(i)), (v(i), v(i + 1)), (w(i), w(i + 1)), (w(i), v(i - 2)), (w(i), v(i - 1))]
        t = 2 * math.pi * i / n
        coords[v(i)] = (math.cos(t), math.sin(t), 0.5)
        t = 2 * math.pi * (i - 1.5) / n
        coords[w(i)] = (math.cos(t), math.sin(t), -0.5)
    labels = ["v*"] + [f"v{i}" for i in range(1, n + 1)] + ["w*"] + [f"w{i}" for i in range(1, n + 1)]
    return Graph(2 * n + 2, sorted({(min(a, b), max(a, b)) for a, b in edges}), labels), coords


def dual_lobell(n: int = 6) -> FamilyBundle:
    if n < 4:
        raise UsageError("dual Lobell graphs need n >= 4")
    g, coords = dual_lobell_graph(n)
    emb = EmbeddedGraph(g, rotation_from_3d(g, coords))
    if n == 5:
        pairs, m, start, _ = icosahedral_system(g)
        return FamilyBundle("dual-lobell-5", g, emb, m, start, "icosahedral case", {"colours": pairs})
    if n == 4:
        return FamilyBundle("dual-lobell-4", g, emb, note="no system bundled below degree five")

    def v(i):
        return 1 + (i - 1) % n

    def w(i):
        return n + 2 + (i - 1) % n

    colour = {0: (1 << 0) | (1 << (n + 1))}
    for i in range(1, n + 1):
        colour[i] = (1 << v(i)) | (1 << w(i))
    k = n // 2 + 1
    classes = [colour[0], colour[1] | colour[k]] + [colour[i] for i in range(2, n + 1) if i != k]
    start = (1 << 0) | (1 << w(1)) | vset(v(i) for i in range(2, n + 1))
    return FamilyBundle(
        f"dual-lobell-{n}",
        g,
        emb,
        MoveSystem.from_classes(g.n, classes),
        start,
        f"colour classes with c1 and c{k} merged",
        {"merged": k},
    )


# ------------------------------------------------------------------ 24-cell


def cell24() -> FamilyBundle:
    cube = hypercube_graph(4)
    edges = list(cube.edges())
    labels = [cube.label(x) for x in range(16)]
    extra = []
    for i in range(4):
        for bit in (0, 1):
            e = 16 + len(extra)
            extra.append(e)
            labels.append(f"c{i}={bit}")
            for x in range(16):
                if (x >> i) & 1 == bit:
                    edges.append((x, e))
    g = Graph(24, edges, labels)
    a, b = bipartition(cube)
    c = vset(extra)
    s = cube_state_from_points(CUBE4_STATE, 4)
    return FamilyBundle(
        "cell24",
        g,
        None,
        MoveSystem.from_classes(24, [a, b, c]),
        s,
        "4-cube plus one vertex per 3-face",
        {"classes": [a, b, c]},
    )


# ----------------------------------------------------------------- 600-cell


def cell600() -> FamilyBundle:
    def gid(r, c):
        return 10 * (r % 10) + (c % 10)

    def even(r, c):
        return (r + c) % 2 == 0

    edges = set()

    def add(a, b):
        edges.add((min(a, b), max(a, b)))

    for r in range(10):
        for c in range(10):
            v = gid(r, c)
            add(v, gid(r + 1, c))
            add(v, gid(r, c + 1))
            add(v, gid(r + 1, c + 1))
            add(gid(r + 1, c), gid(r, c + 1))
            if even(r, c):
                add(v, gid(r + 2, c))
            else:
                add(v, gid(r, c + 2))
    he = [100 + i for i in range(10)]
    ho = [110 + i for i in range(10)]
    for i in range(10):
        for r in range(10):
            for c in (i, i + 1):
                if even(r, c % 10):
                    add(he[i], gid(r, c))
        for c in range(10):
            for r in (i, i + 1):
                if not even(r % 10, c):
                    add(ho[i], gid(r, c))
        add(he[i], he[(i + 1) % 10])
        add(ho[i], ho[(i + 1) % 10])
    labels = [f"{r},{c}" for r in range(10) for c in range(10)]
    labels += [f"E{i}" for i in range(10)] + [f"O{i}" for i in range(10)]
    g = Graph(120, sorted(edges), labels)
    colour = {}
    for r in range(10):
        for c in range(10):
            colour[gid(r, c)] = (r - 3 * c) % 10 if even(r, c) else (r + 3 * c) % 10
    classes = [vset(v for v in range(100) if colour[v] == k) for k in range(10)]
    classes += [(1 << he[i]) | (1 << he[i + 5]) for i in range(5)]
    classes += [(1 << ho[i]) | (1 << ho[i + 5]) for i in range(5)]
    start = vset(gid(r, c) for r in range(0, 10, 2) for c in range(10))
    start |= vset(he[i] for i in range(0, 10, 2)) | vset(ho[i] for i in range(0, 10, 2))
    return FamilyBundle(
        "cell600",
        g,
        None,
        MoveSystem.from_classes(120, classes),
        start,
        "10x10 torus grid with diagonals and two cycles of hovering vertices",
        {"classes": classes, "grid_colour": [colour[v] for v in range(100)], "hovering": he + ho},
    )


# -------------------------------------------------------------- Brinkmann


BRINKMANN_ADJ = {
    0: (2, 5, 7, 13), 1: (3, 6, 7, 8), 2: (4, 8, 9), 3: (5, 9, 10), 4: (6, 10, 11),
    5: (11, 12), 6: (12, 13), 7: (15, 20), 8: (14, 16), 9: (15, 17), 10: (16, 18),
    11: (17, 19), 12: (18, 20), 13: (14, 19), 14: (17, 18), 15: (18, 19), 16: (19, 20),
    17: (20,),
}  # fmt: skip


def brinkmann() -> FamilyBundle:
    edges = [(u, v) for u, vs in BRINKMANN_ADJ.items() for v in vs]
    g = Graph(21, edges, [str(i) for i in range(21)])
    return FamilyBundle("brinkmann", g, note="4-regular, girth 5; system comes from search")


# ------------------------------------------------------------- bipartite cones


def bipartite_cone(m: int = 5, k: int = 3) -> FamilyBundle:
    if not 1 <= k <= m:
        raise UsageError("need 1 <= k <= m")
    subsets = list(itertools.combinations(range(1, m + 1), k))
    labels = [str(r) for r in range(1, m + 1)] + ["{" + ",".join(map(str, s)) + "}" for s in subsets]
    edges = [(r - 1, m + j) for j, s in enumerate(subsets) for r in s]
    g = Graph(m + len(subsets), edges, labels)
    bundle = FamilyBundle(f"lambda-{m}-{k}", g, note="elements joined to the k-subsets containing them")
    if 3 < k < m < 2 * k - 1:
        half = math.ceil(m / 2)
        s_n = set(range(1, half + 1))
        rest = set(range(half + 1, m + 1))
        v = next(j for j, s in enumerate(subsets) if s_n <= set(s))
        u = next(j for j, s in enumerate(subsets) if rest <= set(s) and j != v)
        nm = (1 << m) - 1
        bundle.system = MoveSystem(tuple(nm if x < m else g.full & ~nm for x in range(g.n)))
        bundle.state = vset(r - 1 for r in s_n) | (1 << (m + v)) | (1 << (m + u))
    return bundle


# ---------------------------------------------------------------- Tutte


TUTTE_ROTATION = (
    (1, 3, 2), (0, 4, 26), (10, 0, 11), (18, 0, 19), (1, 5, 33), (4, 6, 29), (5, 7, 27),
    (6, 8, 14), (7, 9, 38), (8, 10, 37), (9, 2, 39), (2, 12, 39), (11, 13, 35), (12, 15, 14),
    (13, 7, 34), (13, 16, 22), (15, 17, 44), (16, 18, 43), (17, 3, 45), (3, 20, 45),
    (19, 21, 41), (20, 23, 22), (21, 15, 40), (21, 24, 27), (23, 25, 32), (24, 26, 31),
    (25, 1, 33), (28, 6, 23), (29, 27, 32), (30, 5, 28), (33, 29, 31), (32, 25, 30),
    (28, 24, 31), (26, 4, 30), (14, 38, 35), (34, 36, 12), (35, 37, 39), (36, 38, 9),
    (37, 34, 8), (36, 10, 11), (22, 44, 41), (40, 42, 20), (41, 43, 45), (42, 44, 17),
    (43, 40, 16), (42, 18, 19),
)  # fmt: skip


def tutte() -> FamilyBundle:
    emb = EmbeddedGraph.from_rotation(46, TUTTE_ROTATION, [str(i) for i in range(46)])
    return FamilyBundle("tutte", emb.graph, emb, note="cubic, 3-connected, planar, not Hamiltonian")


# -------------------------------------------------------------- cube blowup


def _cube_square_pairs(d: int, dist: int):
    """Pairs of non-distinguished cube edges that are opposite sides of a square."""
    for x in range(1 << d):
        for i, j in itertools.combinations(range(d), 2):
            if (x >> i) & 1 or (x >> j) & 1:
                continue
            for a, b in ((i, j), (j, i)):
                if a == dist:
                    continue
                # edges along a, based at x and at x + e_b
                yield (x, a), (x | (1 << b), a)


def _default_offsets(d: int, n: int, dist: int) -> dict:
    # alternate 0 / 3 across squares, flipping the pattern on every other class
    out = {}
    classes = [j for j in range(d) if j != dist]
    for rank, j in enumerate(classes):
        for x in range(1 << d):
            if not (x >> j) & 1:
                out[(x, j)] = 3 * ((popcount(x) + rank) % 2)
    return out


def blowup_cube(d: int = 3, n: int = 7, offsets: dict | None = None, distinguished: int = 0) -> FamilyBundle:
    """Blow every cube vertex up to ``n`` copies.

    Edges along the distinguished direction lift to the path
    ``u1 - v1 - u2 - ... - un - vn``; an edge ``e`` in another direction lifts to
    ``u_i -> v_{i+k_e}``. ``offsets`` maps ``(base vertex, direction)`` (with
    the base having a 0 in that direction) to ``k_e``.
    """
    if d < 2 or n < 2:
        raise UsageError("need d >= 2 and n >= 2")
    if offsets is None:
        offsets = _default_offsets(d, n, distinguished)
    for key, k in offsets.items():
        if not 0 <= k < n / 2:
            raise UsageError(f"offset {k} at {key} is not in [0, n/2)")
    for e1, e2 in _cube_square_pairs(d, distinguished):
        if abs(offsets[e1] - offsets[e2]) < 3:
            raise UsageError(f"offsets of parallel edges {e1} and {e2} differ by less than 3")
    edges = []

    def vid(x, i):
        return x * n + (i % n)

    for x in range(1 << d):
        for j in range(d):
            if (x >> j) & 1:
                continue
            y = x | (1 << j)
            if j == distinguished:
                for i in range(n):
                    edges.append((vid(x, i), vid(y, i)))
                    if i + 1 < n:
                        edges.append((vid(y, i), vid(x, i + 1)))
            else:
                k = offsets[(x, j)]
                for i in range(n):
                    edges.append((vid(x, i), vid(y, i + k)))
    labels = [f"{_cube_label(x, d)}.{i + 1}" for x in range(1 << d) for i in range(n)]
    g = Graph((1 << d) * n, edges, labels)
    gr = girth(g)
    base = hypercube(d)
    a = vset(vid(x, i) for x in range(1 << d) if popcount(x) % 2 == 0 for i in range(n))
    b = g.full & ~a
    s = vset(vid(x, i) for x in members(base.state) for i in range(n))
    return FamilyBundle(
        f"blowup-{d}-{n}",
        g,
        None,
        MoveSystem.from_classes(g.n, [a, b]),
        s,
        "preimage of the cube system",
        {"girth": gr, "offsets": offsets},
    )


# ------------------------------------------------------------------ registry


FAMILIES: dict[str, Callable[..., FamilyBundle]] = {
    "hypercube": hypercube,
    "wagner": wagner,
    "example-2-3": example_2_3,
    "tbws": tbws_example,
    "icosahedron": icosahedron,
    "cell24": cell24,
    "cell600": cell600,
    "brinkmann": brinkmann,
    "dual-lobell": dual_lobell,
    "bipartite-cone": bipartite_cone,
    "tutte": tutte,
    "house": house,
    "triangular-prism": triangular_prism,
    "antiprism": antiprism,
    "blowup-cube": blowup_cube,
}


def build(name: str, **params) -> FamilyBundle:
    try:
        ctor = FAMILIES[name]
    except KeyError:
        raise UsageError(f"unknown family {name!r}; choose from {', '.join(sorted(FAMILIES))}") from None
    try:
        bundle = ctor(**params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {name}: {exc}") from None
    bundle.check()
    return bundle
