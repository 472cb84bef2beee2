"""Move systems, their GF(2) span, and verification of legal orbits.

A move system assigns to every vertex ``v`` a vertex set ``m_v`` containing
``v`` and no neighbour of ``v``. Moves act on states by symmetric difference,
so the orbit of a state ``s0`` is the coset ``s0 + span(moves)``. Orbits are
walked in reflected binary (Gray) order over an independent subset of the
moves, one XOR per step.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import BudgetExceeded, ResourceRefusal, UsageError
from .graph import (
    Graph,
    boundary_ok,
    clique_number,
    components,
    is_clique,
    is_legal_state,
    lowest,
    members,
    popcount,
    vset,
)

MAX_RANK = 30
STATE_SEARCH_LIMIT = 28
BITMAP_LIMIT = 26
EXHAUSTIVE_PARTITION_LIMIT = 24
LAWFUL_LIMIT = 24
# below this rank the interpreter beats the compiled kernel's call overhead
PYTHON_RANK = 12


@dataclass(frozen=True)
class MoveSystem:
    """Per-vertex moves; ``moves[v]`` is the bitmask ``m_v``."""

    moves: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(int(x) for x in self.moves))

    @property
    def n(self) -> int:
        return len(self.moves)

    @classmethod
    def from_classes(cls, n: int, classes: Sequence[int]) -> MoveSystem:
        """Each vertex gets the class containing it (classes must partition ``0..n-1``)."""
        moves = [0] * n
        for c in classes:
            for v in members(c):
                if moves[v]:
                    raise UsageError(f"vertex {v} lies in two classes")
                moves[v] = c
        missing = [v for v in range(n) if not moves[v]]
        if missing:
            raise UsageError(f"vertices {missing} lie in no class")
        return cls(tuple(moves))

    def distinct(self) -> list[tuple[int, int]]:
        """``(first vertex, move)`` for each distinct move, in vertex order."""
        seen: dict[int, int] = {}
        for v, mv in enumerate(self.moves):
            seen.setdefault(mv, v)
        return sorted(((v, mv) for mv, v in seen.items()))


@dataclass(frozen=True)
class GF2Basis:
    """Independent rows spanning the move group.

    ``rows`` are original moves (not reduced), chosen greedily in vertex order;
    ``provenance[i]`` is the vertex whose move is ``rows[i]``. ``echelon`` maps
    pivot bit to a reduced row and answers membership queries.
    """

    rows: tuple[int, ...]
    provenance: tuple[int, ...]
    echelon: tuple[tuple[int, int], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, x: int) -> int:
        for pivot, row in self.echelon:
            if (x >> pivot) & 1:
                x ^= row
        return x

    def contains(self, x: int) -> bool:
        return self.reduce(x) == 0


def _insert(echelon: list[tuple[int, int]], x: int) -> int:
    for pivot, row in echelon:
        if (x >> pivot) & 1:
            x ^= row
    if x:
        pivot = lowest(x)
        # keep rows fully reduced so ``reduce`` is a single pass in pivot order
        echelon[:] = [(p, r ^ x if (r >> pivot) & 1 else r) for p, r in echelon]
        echelon.append((pivot, x))
        echelon.sort()
    return x


def basis_from_rows(rows: Sequence[int], provenance: Sequence[int] | None = None) -> GF2Basis:
    echelon: list[tuple[int, int]] = []
    keep, prov = [], []
    for i, r in enumerate(rows):
        if _insert(echelon, r):
            keep.append(r)
            prov.append(provenance[i] if provenance is not None else i)
    return GF2Basis(tuple(keep), tuple(prov), tuple(echelon))


def move_span(m: MoveSystem) -> GF2Basis:
    dist = m.distinct()
    return basis_from_rows([mv for _, mv in dist], [v for v, _ in dist])


def validate_system(g: Graph, m: MoveSystem) -> list[tuple[str, int]]:
    """Violations as ``(property, vertex)`` pairs; empty means the system is valid.

    ``contains-self`` flags ``v not in m_v``; ``no-neighbour`` flags a
    neighbour of ``v`` inside ``m_v``; ``width`` flags a move with members
    outside the vertex range.
    """
    if m.n != g.n:
        raise UsageError(f"system has {m.n} moves but graph has {g.n} vertices")
    out = []
    for v, mv in enumerate(m.moves):
        if mv < 0 or mv >> g.n:
            out.append(("width", v))
        if not (mv >> v) & 1:
            out.append(("contains-self", v))
        if mv & g.adj[v]:
            out.append(("no-neighbour", v))
    return out


@dataclass(frozen=True)
class Witness:
    state: int
    index: int
    coefficients: tuple[int, ...]
    moves: tuple[int, ...]

    def to_dict(self, labels=None) -> dict:
        return {
            "state": members(self.state),
            "index": self.index,
            "coefficients": list(self.coefficients),
            "moves": list(self.moves),
        }


@dataclass(frozen=True)
class OrbitReport:
    rank: int
    orbit_size: int
    verdict: str
    witness: Witness | None
    min_size: int | None
    max_size: int | None
    checked: int
    illegal_count: int | None = None
    not_strong: int | None = None

    @property
    def legal(self) -> bool:
        return self.verdict == "legal"

    def to_dict(self) -> dict:
        d = {
            "rank": self.rank,
            "orbit_size": self.orbit_size,
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
            "stats": {"min_size": self.min_size, "max_size": self.max_size, "checked": self.checked},
        }
        if self.illegal_count is not None:
            d["stats"]["illegal_count"] = self.illegal_count
        if self.not_strong is not None:
            d["stats"]["not_strongly_legal"] = self.not_strong
        return d


@dataclass(frozen=True)
class Certificate:
    graph_hash: str
    system: MoveSystem
    state: int
    report: OrbitReport


def gray(i: int) -> int:
    return i ^ (i >> 1)


def coset_state(s0: int, rows: Sequence[int], index: int) -> int:
    """State at Gray position ``index`` of the walk over ``rows``."""
    g = gray(index)
    s = s0
    k = 0
    while g:
        if g & 1:
            s ^= rows[k]
        g >>= 1
        k += 1
    return s


def walk_coset(s0: int, rows: Sequence[int]) -> Iterator[int]:
    s = s0
    total = 1 << len(rows)
    for i in range(total):
        yield s
        if i + 1 < total:
            s ^= rows[((i + 1) & -(i + 1)).bit_length() - 1]


def _scan_python(g: Graph, rows, s0, start, stop, exhaustive, check_strong):
    n = g.n
    s = coset_state(s0, rows, start)
    first_bad, bad, not_strong = -1, 0, 0
    lo, hi = n + 1, -1
    for i in range(start, stop):
        size = popcount(s)
        lo = min(lo, size)
        hi = max(hi, size)
        if not is_legal_state(g, s):
            bad += 1
            if first_bad < 0:
                first_bad = i
            if not exhaustive:
                break
        elif check_strong and not boundary_ok(g, s):
            not_strong += 1
        if i + 1 < stop:
            s ^= rows[((i + 1) & -(i + 1)).bit_length() - 1]
    return first_bad, bad, not_strong, lo, hi


def _scan_compiled(g: Graph, rows, s0, exhaustive, check_strong, threads):
    w = kernels.words_for(g.n)
    adj = kernels.adjacency_words(g.adj, w)
    basis = np.zeros((max(len(rows), 1), w), dtype=np.uint64)
    for k, r in enumerate(rows):
        basis[k] = kernels.to_words(r, w)
    if not rows:
        basis = basis[:0]
    start = kernels.to_words(s0, w)
    full = kernels.to_words(g.full, w)
    total = 1 << len(rows)
    threads = max(1, min(threads, total))
    if threads == 1:
        return [kernels.orbit_scan(adj, basis, start, full, 0, total, exhaustive, check_strong)]
    step = -(-total // threads)
    bounds = [(a, min(a + step, total)) for a in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [pool.submit(kernels.orbit_scan, adj, basis, start, full, a, b, exhaustive, check_strong) for a, b in bounds]
        return [f.result() for f in futs]


def scan_coset(
    g: Graph,
    basis: GF2Basis,
    s0: int,
    *,
    exhaustive: bool = False,
    check_strong: bool = False,
    threads: int = 1,
    max_rank: int = MAX_RANK,
    engine: str = "auto",
) -> OrbitReport:
    """Check every state of ``s0 + span(basis.rows)`` for legality."""
    if s0 < 0 or s0 >> g.n:
        raise UsageError(f"start state has members outside 0..{g.n - 1}")
    r = basis.rank
    if r > max_rank:
        raise ResourceRefusal(f"orbit rank {r} exceeds the cap of {max_rank}; raise max_rank to override")
    rows = basis.rows
    total = 1 << r
    if engine == "auto":
        engine = "python" if r <= PYTHON_RANK else "compiled"
    if engine == "python":
        parts = [_scan_python(g, rows, s0, 0, total, exhaustive, check_strong)]
    elif engine == "compiled":
        parts = [tuple(int(x) for x in p) for p in _scan_compiled(g, rows, s0, exhaustive, check_strong, threads)]
    else:
        raise UsageError(f"unknown engine {engine!r}")
    bad_idx = [p[0] for p in parts if p[0] >= 0]
    first = min(bad_idx) if bad_idx else -1
    witness = None
    if first >= 0:
        coeff = gray(first)
        coefficients = tuple((coeff >> k) & 1 for k in range(r))
        witness = Witness(
            coset_state(s0, rows, first),
            first,
            coefficients,
            tuple(basis.provenance[k] for k in range(r) if coefficients[k]),
        )
    complete = exhaustive or first < 0
    return OrbitReport(
        rank=r,
        orbit_size=total,
        verdict="legal" if first < 0 else "illegal",
        witness=witness,
        # a partial early-stopping scan has thread-dependent stats, so they are dropped
        min_size=min(p[3] for p in parts) if complete else None,
        max_size=max(p[4] for p in parts) if complete else None,
        checked=total if complete else first + 1,
        illegal_count=sum(p[1] for p in parts) if exhaustive else None,
        not_strong=sum(p[2] for p in parts) if check_strong and complete else None,
    )


def verify_legal_orbit(
    g: Graph,
    m: MoveSystem,
    s0: int,
    *,
    exhaustive: bool = False,
    check_strong: bool = False,
    threads: int = 1,
    max_rank: int = MAX_RANK,
    engine: str = "auto",
) -> OrbitReport:
    """Verdict on the orbit of ``s0`` under the group generated by ``m``.

    The witness of an illegal verdict is the first failing state in Gray
    order, which does not depend on ``threads``.
    """
    bad = validate_system(g, m)
    if bad:
        raise UsageError(f"invalid move system: {bad[:5]}")
    return scan_coset(
        g,
        move_span(m),
        s0,
        exhaustive=exhaustive,
        check_strong=check_strong,
        threads=threads,
        max_rank=max_rank,
        engine=engine,
    )


def certify(g: Graph, m: MoveSystem, s0: int, **kw) -> Certificate:
    return Certificate(g.fingerprint(), m, s0, verify_legal_orbit(g, m, s0, **kw))


def orbit_states(m: MoveSystem, s0: int, max_rank: int = 24) -> Iterator[int]:
    basis = move_span(m)
    if basis.rank > max_rank:
        raise ResourceRefusal(f"orbit rank {basis.rank} exceeds enumeration cap {max_rank}")
    return walk_coset(s0, basis.rows)


# ---------------------------------------------------------------- state search


def _adjacency_word(g: Graph) -> np.ndarray:
    if g.n > 63:
        raise ResourceRefusal("single-word kernels need at most 63 vertices")
    return np.array(g.adj, dtype=np.uint64)


def legality_bitmap(g: Graph, strong: bool = False, limit: int = BITMAP_LIMIT) -> np.ndarray:
    """``out[s] == 1`` iff state ``s`` is legal (strongly legal if ``strong``)."""
    if g.n > limit:
        raise ResourceRefusal(f"legality bitmap needs n <= {limit}, got {g.n}")
    out = np.zeros(1 << g.n, dtype=np.uint8)
    kernels.legal_bitmap(_adjacency_word(g), g.n, strong, 0, 1 << g.n, out)
    return out


def _first_in_canonical_order(g: Graph, strong: bool) -> int | None:
    n = g.n
    rest = list(range(1, n))
    for k in range(1, n):
        for combo in itertools.combinations(rest, k - 1):
            s = vset(combo) | 1
            if is_legal_state(g, s) and (not strong or boundary_ok(g, s)):
                return s
    return None


def exists_legal_state(g: Graph, *, strong: bool = False, limit: int = STATE_SEARCH_LIMIT) -> int | None:
    """First legal state containing vertex 0, by size then lexicographic order; ``None`` if there is none.

    Every legal state or its complement contains vertex 0, so ``None`` is a
    proof of absence.
    """
    if g.n > limit:
        raise ResourceRefusal(f"exhaustive state search is limited to n <= {limit}, got {g.n}")
    if g.n < 2:
        return None
    if g.n <= 12:
        return _first_in_canonical_order(g, strong)
    s = kernels.first_legal_canonical(_adjacency_word(g), g.n, strong)
    return None if s < 0 else int(s)


# ------------------------------------------------------- any-system search


SYSTEM_SEARCH_LIMIT = 18


@dataclass(frozen=True)
class SystemSearch:
    status: str  # found | none
    system: MoveSystem | None = None
    state: int | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def _subset_array(mask: int) -> np.ndarray:
    bits = members(mask)
    out = np.zeros(1 << len(bits), dtype=np.int64)
    for i, b in enumerate(bits):
        out[1 << i : 2 << i] = out[: 1 << i] | (1 << b)
    return out


def exists_legal_system(g: Graph, *, limit: int = SYSTEM_SEARCH_LIMIT, budget: int = 10**7) -> SystemSearch:
    """Decide whether any move system has a legal orbit.

    A system with a legal orbit ``s + span(M)`` exists iff some subspace
    ``D`` meets every ``A_v`` (sets containing ``v`` and no neighbour of
    ``v``) while ``s + D`` consists of legal states; moves can then be taken
    from ``D``. The search grows ``D`` one move at a time, always serving the
    uncovered vertex with the fewest admissible moves, and only tries start
    states containing vertex 0 (complements have the same verdict).
    """
    n = g.n
    if n > limit:
        raise ResourceRefusal(f"exhaustive system search is limited to n <= {limit}, got {n}")
    if n < 2:
        return SystemSearch("none")
    legal = legality_bitmap(g, limit=limit).astype(bool)
    adj = np.array(g.adj, dtype=np.int64)
    pools = [(1 << v) | _subset_array(g.full & ~g.adj[v] & ~(1 << v)) for v in range(n)]
    nodes = 0

    def covered(space: np.ndarray, v: int) -> np.ndarray:
        return (((space >> v) & 1) == 1) & ((space & adj[v]) == 0)

    def grow(s: int, space: np.ndarray, pivots: list[tuple[int, int]]) -> np.ndarray | None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"system search exceeded {budget} nodes", nodes)
        best = None
        for v in range(n):
            if covered(space, v).any():
                continue
            cand = pools[v]
            ok = np.ones(cand.shape[0], dtype=bool)
            for d in space.tolist():
                ok &= legal[(s ^ d) ^ cand]
                if not ok.any():
                    return None
            cand = cand[ok]
            if best is None or cand.shape[0] < best[1].shape[0]:
                best = (v, cand)
        if best is None:
            return space
        cand = best[1]
        for p, row in pivots:
            cand = np.where((cand >> p) & 1 == 1, cand ^ row, cand)
        for m in np.unique(cand).tolist():
            p = m.bit_length() - 1
            found = grow(s, np.concatenate([space, space ^ m]), pivots + [(p, m)])
            if found is not None:
                return found
        return None

    for s in np.nonzero(legal)[0].tolist():
        if not s & 1:
            continue
        space = grow(s, np.zeros(1, dtype=np.int64), [])
        if space is not None:
            moves = []
            for v in range(n):
                moves.append(int(space[np.argmax(covered(space, v))]))
            return SystemSearch("found", MoveSystem(tuple(moves)), s, nodes)
    return SystemSearch("none", nodes=nodes)


# ------------------------------------------------------------ partition search


@dataclass(frozen=True)
class PartitionSearch:
    status: str  # found | none | inconclusive
    system: MoveSystem | None = None
    state: int | None = None
    classes: tuple[int, ...] = ()
    tried: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def independent_partitions(g: Graph, max_classes: int | None = None, exact: int | None = None) -> Iterator[list[int]]:
    """Partitions of ``V`` into independent sets, as restricted-growth assignments.

    ``max_classes`` caps the number of classes; ``exact`` yields only
    partitions with exactly that many.
    """
    n = g.n
    cap = exact if exact is not None else (max_classes if max_classes is not None else n)
    adj = g.adj
    classes: list[int] = []

    def rec(v: int) -> Iterator[list[int]]:
        if v == n:
            if exact is None or len(classes) == exact:
                yield list(classes)
            return
        # not enough vertices left to open the remaining classes
        if exact is not None and len(classes) + (n - v) < exact:
            return
        for j in range(len(classes)):
            if not classes[j] & adj[v]:
                classes[j] |= 1 << v
                yield from rec(v + 1)
                classes[j] &= ~(1 << v)
        if len(classes) < cap:
            classes.append(1 << v)
            yield from rec(v + 1)
            classes.pop()

    yield from rec(0)


def _orbit_rep_search(bitmap: np.ndarray, classes: Sequence[int], n: int) -> int | None:
    arr = np.array(classes, dtype=np.uint64)
    s = kernels.colored_orbit_search(bitmap, arr, n)
    return None if s < 0 else int(s)


def _seeded_check(g: Graph, classes: Sequence[int], rng: random.Random, samples: int) -> int | None:
    basis = basis_from_rows(classes)
    seen = set()
    seeds = []
    for combo in itertools.islice(itertools.product(*(members(c) for c in classes)), 256):
        seeds.append(vset(combo))
    for _ in range(samples):
        s = rng.getrandbits(g.n)
        if is_legal_state(g, s):
            seeds.append(s)
    for s in seeds:
        key = basis.reduce(s)
        if key in seen:
            continue
        seen.add(key)
        if scan_coset(g, basis, s).legal:
            return s
    return None


def search_partition_system(
    g: Graph,
    mode: str = "exhaustive",
    *,
    budget: int = 10**6,
    k_min: int | None = None,
    k_max: int | None = None,
    seed: int = 0,
    samples: int = 10_000,
) -> PartitionSearch:
    """Look for a colored system (moves = classes of an independent partition) with a legal orbit.

    ``exhaustive`` tries every independent partition against a bitmap of all
    legal states and certifies ``none``. ``coloring`` tries proper colorings
    with ``k = k_min, k_min+1, ...`` classes; it checks orbits exactly while
    the bitmap fits and falls back to seeded starts otherwise. It never
    certifies absence and reports ``inconclusive`` instead.
    """
    n = g.n
    if n == 0:
        return PartitionSearch("none")
    tried = 0
    if mode == "exhaustive":
        if n > EXHAUSTIVE_PARTITION_LIMIT:
            raise ResourceRefusal(f"exhaustive partition search needs n <= {EXHAUSTIVE_PARTITION_LIMIT}")
        bitmap = legality_bitmap(g)
        for classes in independent_partitions(g):
            tried += 1
            if tried > budget:
                raise ResourceRefusal(f"exhaustive partition search exceeded {budget} partitions")
            s = _orbit_rep_search(bitmap, classes, n)
            if s is not None:
                return PartitionSearch("found", MoveSystem.from_classes(n, classes), s, tuple(classes), tried)
        return PartitionSearch("none", tried=tried)
    if mode != "coloring":
        raise UsageError(f"unknown search mode {mode!r}")
    lo = k_min if k_min is not None else max(2, clique_number(g))
    hi = k_max if k_max is not None else n
    bitmap = legality_bitmap(g) if n <= BITMAP_LIMIT else None
    rng = random.Random(seed)
    for k in range(lo, hi + 1):
        for classes in independent_partitions(g, exact=k):
            tried += 1
            if tried > budget:
                return PartitionSearch("inconclusive", tried=tried - 1)
            if bitmap is not None:
                s = _orbit_rep_search(bitmap, classes, n)
            else:
                s = _seeded_check(g, classes, rng, samples)
            if s is not None:
                return PartitionSearch("found", MoveSystem.from_classes(n, classes), s, tuple(classes), tried)
    return PartitionSearch("inconclusive", tried=tried)


# ------------------------------------------------------------- cone reduction


def cone_square(g: Graph, v: int) -> tuple[int, int, int, int] | None:
    """A 4-cycle through all four neighbours of ``v``, or ``None``."""
    nb = members(g.adj[v])
    if len(nb) != 4:
        return None
    a = nb[0]
    for b, c, d in itertools.permutations(nb[1:]):
        if b < d and g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d) and g.has_edge(d, a):
            return (a, b, c, d)
    return None


def remove_cone_vertex(g: Graph, v: int) -> Graph:
    if cone_square(g, v) is None:
        raise UsageError(f"vertex {v} is not a cone on a 4-cycle")
    return g.remove_vertex(v)


def _drop_bit(x: int, v: int) -> int:
    low = x & ((1 << v) - 1)
    return low | ((x >> (v + 1)) << v)


def restrict_cone_system(g: Graph, v: int, m: MoveSystem, s0: int, *, check: bool = True):
    """Delete the cone vertex ``v`` and restrict every move and the start state.

    With ``check`` the input orbit is verified first and the restricted one
    after; a failure of the latter raises, since it cannot happen for a cone
    on a 4-cycle.
    """
    h = remove_cone_vertex(g, v)
    if check and not verify_legal_orbit(g, m, s0).legal:
        raise UsageError("input system is not legal on the given state")
    moves = tuple(_drop_bit(mv, v) for u, mv in enumerate(m.moves) if u != v)
    m2 = MoveSystem(moves)
    s2 = _drop_bit(s0, v)
    if check and not verify_legal_orbit(h, m2, s2).legal:
        raise AssertionError("restricted system lost legality")
    return h, m2, s2


# ----------------------------------------------------- orbit-wide identities


def clique_orbit_frequency(g: Graph, m: MoveSystem, s0: int, k: int) -> Fraction:
    """Fraction of orbit states containing the clique ``k``.

    The orbit is an affine space, so the states containing ``k`` are the
    solutions of a linear system restricted to the coordinates of ``k``.
    """
    if not is_clique(g, k):
        raise UsageError("vertex set is not a clique")
    basis = move_span(m)
    # project the rows to the coordinates of k and eliminate
    target = k & ~s0
    echelon: list[tuple[int, int]] = []
    for r in basis.rows:
        _insert(echelon, r & k)
    for pivot, row in echelon:
        if (target >> pivot) & 1:
            target ^= row
    if target:
        return Fraction(0)
    return Fraction(1, 1 << len(echelon))


def clique_orbit_frequency_bruteforce(g: Graph, m: MoveSystem, s0: int, k: int) -> Fraction:
    states = list(orbit_states(m, s0))
    return Fraction(sum(1 for s in states if s & k == k), len(states))


def all_states_trees(g: Graph, m: MoveSystem, s0: int, max_rank: int = 24) -> bool:
    adj = g.adj
    for s in orbit_states(m, s0, max_rank):
        edges = sum(popcount(adj[v] & s) for v in members(s)) // 2
        if edges != popcount(s) - len(components(g, s)):
            return False
    return True


# ----------------------------------------------------------- antimatchings


def antimatching_system(g: Graph, pairs, singles: Sequence[int] = ()) -> MoveSystem:
    moves = [0] * g.n
    for a, b in pairs:
        moves[a] = moves[b] = (1 << a) | (1 << b)
    for v in singles:
        moves[v] = 1 << v
    return MoveSystem(tuple(moves))


def verify_lawful_antimatching(g: Graph, pairs, *, limit: int = LAWFUL_LIMIT, threads: int = 1) -> bool:
    """Every transversal (one vertex from each pair) is a legal state."""
    pairs = [tuple(p) for p in pairs]
    covered = 0
    for a, b in pairs:
        m = (1 << a) | (1 << b)
        if a == b or g.has_edge(a, b) or covered & m:
            raise UsageError(f"({a}, {b}) breaks the antimatching")
        covered |= m
    if covered != g.full:
        raise UsageError("pairs do not cover the vertex set")
    if len(pairs) > limit:
        raise ResourceRefusal(f"{len(pairs)} pairs exceed the exhaustive limit of {limit}")
    s0 = vset(a for a, _ in pairs)
    basis = basis_from_rows([(1 << a) | (1 << b) for a, b in pairs], [a for a, _ in pairs])
    return scan_coset(g, basis, s0, threads=threads).legal


__all__ = [
    "MoveSystem",
    "GF2Basis",
    "OrbitReport",
    "Witness",
    "Certificate",
    "move_span",
    "basis_from_rows",
    "validate_system",
    "verify_legal_orbit",
    "scan_coset",
    "certify",
    "orbit_states",
    "walk_coset",
    "coset_state",
    "legality_bitmap",
    "exists_legal_state",
    "exists_legal_system",
    "SystemSearch",
    "independent_partitions",
    "search_partition_system",
    "PartitionSearch",
    "cone_square",
    "remove_cone_vertex",
    "restrict_cone_system",
    "clique_orbit_frequency",
    "all_states_trees",
    "antimatching_system",
    "verify_lawful_antimatching",
]
