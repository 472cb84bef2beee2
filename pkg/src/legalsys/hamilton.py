"""Exact Hamiltonian cycle search.

Edges are decided one at a time (in the cycle / excluded). After each decision
the search propagates the two local rules that make cubic graphs tractable:
a vertex with two chosen edges loses its other edges, and a vertex left with
exactly two available edges must use both. Premature cycles are forbidden by
keeping track of the two ends of every chosen path. Each node also requires
the graph of available edges to stay 2-connected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded
from .graph import Graph, articulation_points, members, popcount, reach

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class HamiltonResult:
    cycle: tuple[int, ...] | None
    exact: bool
    nodes: int

    @property
    def found(self) -> bool:
        return self.cycle is not None


class _Contradiction(Exception):
    pass


class _State:
    __slots__ = ("avail", "sel", "inc", "other", "nchosen")

    def copy(self) -> _State:
        s = _State.__new__(_State)
        s.avail = list(self.avail)
        s.sel = list(self.sel)
        s.inc = list(self.inc)
        s.other = list(self.other)
        s.nchosen = self.nchosen
        return s


class _Search:
    def __init__(self, g: Graph, budget: int):
        self.g = g
        self.n = g.n
        self.budget = budget
        self.nodes = 0

    def exclude(self, st: _State, u: int, w: int, queue: list[int]) -> None:
        if (st.sel[u] >> w) & 1:
            raise _Contradiction
        if not (st.avail[u] >> w) & 1:
            return
        st.avail[u] &= ~(1 << w)
        st.avail[w] &= ~(1 << u)
        if popcount(st.avail[u]) < 2 or popcount(st.avail[w]) < 2:
            raise _Contradiction
        queue.append(u)
        queue.append(w)

    def choose(self, st: _State, u: int, w: int, queue: list[int]) -> None:
        if (st.sel[u] >> w) & 1:
            return
        if not (st.avail[u] >> w) & 1 or st.inc[u] >= 2 or st.inc[w] >= 2:
            raise _Contradiction
        a = st.other[u]
        b = st.other[w]
        closing = a == w
        if closing and st.nchosen != self.n - 1:
            raise _Contradiction
        st.sel[u] |= 1 << w
        st.sel[w] |= 1 << u
        st.inc[u] += 1
        st.inc[w] += 1
        st.nchosen += 1
        if not closing:
            st.other[a] = b
            st.other[b] = a
            if st.nchosen < self.n - 1 and (st.avail[a] >> b) & 1 and not (st.sel[a] >> b) & 1:
                self.exclude(st, a, b, queue)
        queue.append(u)
        queue.append(w)

    def propagate(self, st: _State, queue: list[int]) -> None:
        while queue:
            v = queue.pop()
            if st.inc[v] == 2:
                for w in members(st.avail[v] & ~st.sel[v]):
                    self.exclude(st, v, w, queue)
            else:
                c = popcount(st.avail[v])
                if c < 2:
                    raise _Contradiction
                if c == 2:
                    for w in members(st.avail[v] & ~st.sel[v]):
                        self.choose(st, v, w, queue)

    def feasible(self, st: _State) -> bool:
        full = (1 << self.n) - 1
        adj_rows = st.avail
        # connectivity of the available-edge graph, via bit BFS
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                nxt |= adj_rows[low.bit_length() - 1]
                frontier ^= low
            frontier = nxt & ~seen
            seen |= frontier
        if seen != full:
            return False
        return not articulation_points(Graph.from_rows(adj_rows))

    def run(self, st: _State) -> _State | None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"Hamiltonian search exceeded {self.budget} nodes", self.nodes)
        if st.nchosen == self.n:
            return st
        if not self.feasible(st):
            return None
        best = None
        for v in range(self.n):
            if st.inc[v] == 1:
                k = popcount(st.avail[v] & ~st.sel[v])
                if best is None or k < best[0]:
                    best = (k, v)
        if best is None:
            # nothing chosen yet: branch at the lowest-index vertex of minimum degree
            v = min(range(self.n), key=lambda x: (popcount(st.avail[x]), x))
        else:
            v = best[1]
        w = members(st.avail[v] & ~st.sel[v])[0]
        for take in (True, False):
            child = st.copy()
            queue: list[int] = []
            try:
                if take:
                    self.choose(child, v, w, queue)
                else:
                    self.exclude(child, v, w, queue)
                self.propagate(child, queue)
            except _Contradiction:
                continue
            found = self.run(child)
            if found is not None:
                return found
        return None


def find_hamiltonian_cycle(g: Graph, budget: int = DEFAULT_BUDGET) -> HamiltonResult:
    """Return a Hamiltonian cycle of ``g`` or an exhaustive certificate that none exists.

    Raises ``BudgetExceeded`` if more than ``budget`` search nodes are needed;
    a returned ``None`` cycle is always exact.
    """
    n = g.n
    if n < 3:
        return HamiltonResult(None, True, 0)
    if any(popcount(r) < 2 for r in g.adj) or reach(g, 0, g.full) != g.full:
        return HamiltonResult(None, True, 0)
    search = _Search(g, budget)
    st = _State.__new__(_State)
    st.avail = list(g.adj)
    st.sel = [0] * n
    st.inc = [0] * n
    st.other = list(range(n))
    st.nchosen = 0
    queue = list(range(n))
    try:
        search.propagate(st, queue)
    except _Contradiction:
        return HamiltonResult(None, True, search.nodes)
    final = search.run(st)
    if final is None:
        return HamiltonResult(None, True, search.nodes)
    return HamiltonResult(_walk(final.sel), True, search.nodes)


def _walk(sel: list[int]) -> tuple[int, ...]:
    cycle = [0]
    prev, cur = -1, 0
    while True:
        nbrs = members(sel[cur])
        nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
        if nxt == 0:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    return tuple(cycle)


def is_hamiltonian_cycle(g: Graph, cycle) -> bool:
    cycle = list(cycle)
    if len(cycle) != g.n or len(set(cycle)) != g.n or g.n < 3:
        return False
    return all(g.has_edge(cycle[i], cycle[(i + 1) % g.n]) for i in range(g.n))
