"""Finite simple graphs with bitset adjacency, and the predicates built on them.

Vertex sets (states) are plain Python ints used as bitmasks: bit ``v`` is set
iff vertex ``v`` belongs to the set. ``vset`` and ``members`` convert between
that form and iterables of vertex indices.
"""

from __future__ import annotations

import hashlib
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError

INFINITE = float("inf")


def vset(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the neighbourhood of ``v`` as a bitmask. Instances are
    treated as immutable once built.
    """

    __slots__ = ("n", "adj", "labels", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence[str] | None = None):
        if n < 0:
            raise UsageError("vertex count must be non-negative")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise UsageError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise UsageError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.n = n
        self.adj = tuple(rows)
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise UsageError("label count does not match vertex count")
        self._m = None

    @classmethod
    def from_rows(cls, rows: Sequence[int], labels: Sequence[str] | None = None) -> Graph:
        n = len(rows)
        for v, row in enumerate(rows):
            if (row >> v) & 1:
                raise UsageError(f"self-loop at vertex {v}")
            if row >> n:
                raise UsageError(f"row {v} refers to a vertex >= {n}")
            for u in members(row):
                if not (rows[u] >> v) & 1:
                    raise UsageError(f"adjacency not symmetric at ({v}, {u})")
        g = cls.__new__(cls)
        g.n = n
        g.adj = tuple(rows)
        g.labels = tuple(labels) if labels is not None else None
        g._m = None
        return g

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def num_edges(self) -> int:
        if self._m is None:
            self._m = sum(popcount(r) for r in self.adj) // 2
        return self._m

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            for v in members(self.adj[u] >> (u + 1) << (u + 1)):
                out.append((u, v))
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return members(self.adj[v])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def index_of(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def induced(self, mask: int) -> tuple[Graph, list[int]]:
        """Subgraph induced by ``mask``; returns it with the old index of each new vertex."""
        keep = members(mask)
        pos = {v: i for i, v in enumerate(keep)}
        rows = []
        for v in keep:
            rows.append(vset(pos[u] for u in members(self.adj[v] & mask)))
        labels = [self.label(v) for v in keep] if self.labels is not None else None
        return Graph.from_rows(rows, labels), keep

    def remove_vertex(self, v: int) -> Graph:
        return self.induced(self.full & ~(1 << v))[0]

    def complement(self) -> Graph:
        full = self.full
        return Graph.from_rows([full & ~self.adj[v] & ~(1 << v) for v in range(self.n)], self.labels)

    def relabel(self, labels: Sequence[str] | None) -> Graph:
        return Graph.from_rows(self.adj, labels)

    def fingerprint(self) -> str:
        """SHA-256 of the canonical edge list; labels are not part of the hash."""
        h = hashlib.sha256()
        h.update(f"graph {self.n}\n".encode())
        for u, v in self.edges():
            h.update(f"e {u} {v}\n".encode())
        return h.hexdigest()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def _check_width(g: Graph, s: int) -> None:
    if s < 0 or s >> g.n:
        raise UsageError(f"vertex set has members outside 0..{g.n - 1}")


def reach(g: Graph, start: int, within: int) -> int:
    """Vertices of ``within`` reachable from vertex ``start`` inside ``within``."""
    adj = g.adj
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= adj[low.bit_length() - 1]
            frontier ^= low
        frontier = nxt & within & ~seen
        seen |= frontier
    return seen


def induced_connected(g: Graph, s: int) -> bool:
    """True iff the subgraph induced by the nonempty set ``s`` is connected."""
    if not s:
        raise UsageError("empty set has no connectivity verdict")
    _check_width(g, s)
    return reach(g, lowest(s), s) == s


def components(g: Graph, s: int | None = None) -> list[int]:
    s = g.full if s is None else s
    out = []
    while s:
        c = reach(g, lowest(s), s)
        out.append(c)
        s &= ~c
    return out


def is_connected(g: Graph) -> bool:
    return g.n == 0 or induced_connected(g, g.full)


def is_legal_state(g: Graph, s: int) -> bool:
    """Both ``s`` and its complement are nonempty and induce connected subgraphs."""
    _check_width(g, s)
    t = g.full & ~s
    if not s or not t:
        return False
    return reach(g, lowest(s), s) == s and reach(g, lowest(t), t) == t


def boundary_ok(g: Graph, s: int) -> bool:
    """Every vertex of ``s`` has a neighbour outside it, and vice versa."""
    t = g.full & ~s
    adj = g.adj
    for v in range(g.n):
        other = t if (s >> v) & 1 else s
        if not adj[v] & other:
            return False
    return True


def is_strongly_legal_state(g: Graph, s: int) -> bool:
    return is_legal_state(g, s) and boundary_ok(g, s)


def girth(g: Graph) -> float:
    """Length of a shortest cycle; ``inf`` for forests."""
    best = INFINITE
    adj = g.adj
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in members(adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best if best == INFINITE else int(best)


@dataclass(frozen=True)
class CliqueCensus:
    """``counts[i + 1]`` is the number of cliques with ``i + 1`` vertices (``|K_i|``)."""

    counts: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        if i + 1 >= len(self.counts):
            return 0
        return self.counts[i + 1]

    @property
    def i_max(self) -> int:
        return len(self.counts) - 2


def clique_census(g: Graph, i_max: int) -> CliqueCensus:
    """Count cliques of dimension ``-1..i_max`` (that is, with up to ``i_max + 1`` vertices)."""
    if i_max < -1:
        raise UsageError("i_max must be >= -1")
    counts = [0] * (i_max + 2)
    counts[0] = 1
    if i_max < 0:
        return CliqueCensus(tuple(counts))
    adj = g.adj

    def extend(size: int, cand: int) -> None:
        # size = vertices in the current clique; cand = later common neighbours
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            counts[size + 1] += 1
            if size + 1 <= i_max:
                extend(size + 1, cand & adj[v])

    extend(0, g.full)
    return CliqueCensus(tuple(counts))


def clique_number(g: Graph) -> int:
    best = 0
    adj = g.adj

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if size + popcount(cand) <= best:
            return
        if not cand:
            best = max(best, size)
            return
        while cand:
            if size + popcount(cand) <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            grow(size + 1, cand & adj[v])
        best = max(best, size)

    grow(0, g.full)
    return best


def curvature(g: Graph, n: int | float = 2) -> Fraction:
    """Alternating clique count with weights ``(-1/2)**(i+1)``.

    ``n`` bounds the clique size (in vertices) that enters the sum, so
    ``curvature(g, 2) == 1 - |V|/2 + |E|/4`` and ``n=inf`` counts every clique.
    """
    if n == INFINITE or n is None:
        n = clique_number(g)
    n = int(n)
    if n < 0:
        raise UsageError("curvature order must be >= 0")
    census = clique_census(g, n - 1)
    total = Fraction(0)
    for i in range(-1, n):
        total += Fraction(-1, 2) ** (i + 1) * census[i]
    return total


def kappa2(g: Graph) -> Fraction:
    return Fraction(1) - Fraction(g.n, 2) + Fraction(g.num_edges, 4)


def bipartition(g: Graph) -> tuple[int, int] | None:
    """Two-colouring by BFS; ``None`` iff there is an odd cycle. Vertex 0's side comes first."""
    color = [-1] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        q = deque([root])
        while q:
            u = q.popleft()
            for w in members(g.adj[u]):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    q.append(w)
                elif color[w] == color[u]:
                    return None
    a = vset(v for v in range(g.n) if color[v] == 0)
    return a, g.full & ~a


def is_independent(g: Graph, s: int) -> bool:
    for v in members(s):
        if g.adj[v] & s:
            return False
    return True


def is_clique(g: Graph, s: int) -> bool:
    for v in members(s):
        if (s & ~(1 << v)) & ~g.adj[v]:
            return False
    return True


def is_forest(g: Graph, s: int) -> bool:
    """The subgraph induced by ``s`` has no cycle."""
    if not s:
        return True
    sub, _ = g.induced(s)
    return sub.num_edges == sub.n - len(components(sub))


def articulation_points(g: Graph) -> list[int]:
    n = g.n
    disc = [-1] * n
    low = [0] * n
    out = set()
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(members(g.adj[root])))]
        children = 0
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(members(g.adj[w]))))
                    if v == root:
                        children += 1
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if p != root and low[v] >= disc[p]:
                        out.add(p)
        if children > 1:
            out.add(root)
    return sorted(out)


def is_biconnected(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and not articulation_points(g)


def isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """A vertex map ``g -> h`` preserving adjacency both ways, or ``None``.

    Backtracking with colour refinement; adequate for the sparse, fairly
    asymmetric graphs up to a few hundred vertices that appear in this package.
    """
    if g.n != h.n or g.num_edges != h.num_edges:
        return None
    n = g.n
    if n == 0:
        return []
    cg, ch = _refine(g, [0] * n, h, [0] * n)
    if cg is None:
        return None
    return _iso_search(g, h, cg, ch)


def _refine(g: Graph, cg: list[int], h: Graph, ch: list[int]):
    # joint colour refinement so colour ids are comparable across g and h
    while True:
        sig_g = [(cg[v], tuple(sorted(cg[u] for u in members(g.adj[v])))) for v in range(g.n)]
        sig_h = [(ch[v], tuple(sorted(ch[u] for u in members(h.adj[v])))) for v in range(h.n)]
        if sorted(sig_g) != sorted(sig_h):
            return None, None
        table = {s: i for i, s in enumerate(sorted(set(sig_g)))}
        ng = [table[s] for s in sig_g]
        nh = [table[s] for s in sig_h]
        if len(set(ng)) == len(set(cg)):
            return ng, nh
        cg, ch = ng, nh


def _iso_search(g: Graph, h: Graph, cg: list[int], ch: list[int]):
    n = g.n
    if len(set(cg)) == n:
        pos = {c: v for v, c in enumerate(ch)}
        mapping = [pos[cg[v]] for v in range(n)]
        for v in range(n):
            if vset(mapping[u] for u in members(g.adj[v])) != h.adj[mapping[v]]:
                return None
        return mapping
    sizes = {}
    for c in cg:
        sizes[c] = sizes.get(c, 0) + 1
    target = min((s, c) for c, s in sizes.items() if s > 1)[1]
    v = cg.index(target)
    fresh = max(max(cg), max(ch)) + 1
    for w in range(n):
        if ch[w] != target:
            continue
        ng = list(cg)
        nh = list(ch)
        ng[v] = fresh
        nh[w] = fresh
        rg, rh = _refine(g, ng, h, nh)
        if rg is None:
            continue
        found = _iso_search(g, h, rg, rh)
        if found is not None:
            return found
    return None
