"""Maximum cardinality matching (Edmonds' blossom algorithm) and perfect antimatchings.

The matcher works on adjacency bit rows. For antimatchings the rows of the
complement are produced one at a time by negating the graph's rows, so the
complement graph is never stored.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable
from dataclasses import dataclass

from .graph import Graph, members, vset


def maximum_matching(n: int, row: Callable[[int], int], initial: list[int] | None = None) -> list[int]:
    """Return ``mate`` with ``mate[v] = -1`` for exposed vertices.

    ``row(v)`` must return the neighbourhood bitmask of ``v``. Vertices are
    scanned in ascending order, so ties resolve the same way on every run.
    """
    mate = list(initial) if initial is not None else [-1] * n
    # greedy start
    for v in range(n):
        if mate[v] < 0:
            for w in members(row(v)):
                if mate[w] < 0:
                    mate[v], mate[w] = w, v
                    break

    def find_path(root: int) -> bool:
        parent = [-1] * n
        base = list(range(n))
        used = [False] * n
        used[root] = True
        q = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if mate[a] < 0:
                    break
                a = parent[mate[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[mate[b]]

        def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[mate[v]]] = True
                parent[v] = child
                child = mate[v]
                v = parent[mate[v]]

        while q:
            v = q.popleft()
            for to in members(row(v)):
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] >= 0 and parent[mate[to]] >= 0):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur, to, blossom)
                    mark_path(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] < 0:
                    parent[to] = v
                    if mate[to] < 0:
                        # augment along the alternating path ending at ``to``
                        u = to
                        while u >= 0:
                            pv = parent[u]
                            nxt = mate[pv]
                            mate[u] = pv
                            mate[pv] = u
                            u = nxt
                        return True
                    used[mate[to]] = True
                    q.append(mate[to])
        return False

    for v in range(n):
        if mate[v] < 0:
            find_path(v)
    return mate


@dataclass(frozen=True)
class Antimatching:
    """Partition into nonadjacent pairs, or the reason none exists."""

    pairs: tuple[tuple[int, int], ...] | None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.pairs is not None


def perfect_antimatching(g: Graph) -> Antimatching:
    """Perfect matching of the complement of ``g`` (pairs of nonadjacent vertices)."""
    n = g.n
    if n % 2:
        return Antimatching(None, "odd order")
    full = g.full
    adj = g.adj
    mate = maximum_matching(n, lambda v: full & ~adj[v] & ~(1 << v))
    if any(m < 0 for m in mate):
        return Antimatching(None, "complement has no perfect matching")
    pairs = tuple(sorted((v, mate[v]) for v in range(n) if v < mate[v]))
    return Antimatching(pairs)


def is_antimatching(g: Graph, pairs) -> bool:
    seen = 0
    for a, b in pairs:
        if a == b or g.has_edge(a, b):
            return False
        m = vset((a, b))
        if seen & m:
            return False
        seen |= m
    return seen == g.full


def greedy_maximal_matching(g: Graph) -> list[tuple[int, int]]:
    """Maximal (not maximum) matching, scanning edges in ascending order."""
    used = 0
    out = []
    for u, v in g.edges():
        if not (used >> u) & 1 and not (used >> v) & 1:
            out.append((u, v))
            used |= (1 << u) | (1 << v)
    return out
