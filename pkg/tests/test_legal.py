from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from legalsys.errors import ResourceRefusal, UsageError
from legalsys.graph import Graph, is_legal_state, is_strongly_legal_state, kappa2, members, vset
from legalsys.legal import (
    MoveSystem,
    all_states_trees,
    basis_from_rows,
    clique_orbit_frequency,
    clique_orbit_frequency_bruteforce,
    exists_legal_state,
    exists_legal_system,
    independent_partitions,
    move_span,
    orbit_states,
    restrict_cone_system,
    search_partition_system,
    validate_system,
    verify_lawful_antimatching,
    verify_legal_orbit,
)


def s(*labels: int) -> int:
    """Vertex set from 1-based labels."""
    return vset(v - 1 for v in labels)


EX23 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
# moves {2,4}, {1}, {3}; the move at 4 is {2,4}
EX23_SYSTEM = MoveSystem((s(1), s(2, 4), s(3), s(2, 4)))

WAGNER = Graph(8, [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)])
_W = {
    1: s(1, 4, 6, 7),
    4: s(1, 4, 6, 7),
    5: s(2, 3, 5, 8),
    8: s(2, 3, 5, 8),
    2: s(2, 4, 5, 7),
    7: s(2, 4, 5, 7),
    3: s(1, 3, 6, 8),
    6: s(1, 3, 6, 8),
}
WAGNER_SYSTEM = MoveSystem(tuple(_W[v] for v in range(1, 9)))


def cube() -> Graph:
    return Graph(8, [(x, x ^ (1 << i)) for x in range(8) for i in range(3) if x < x ^ (1 << i)])


def brute_legal_system(g: Graph) -> bool:
    """Depth-first over per-vertex move choices, tracking the spanned group explicitly."""
    n = g.n
    legal = [is_legal_state(g, x) for x in range(1 << n)]
    options = []
    for v in range(n):
        free = [u for u in range(n) if u != v and not g.has_edge(u, v)]
        options.append([(1 << v) | vset(c) for r in range(len(free) + 1) for c in itertools.combinations(free, r)])

    def rec(v: int, start: int, span: frozenset) -> bool:
        if v == n:
            return True
        for mv in options[v]:
            if mv in span:
                if rec(v + 1, start, span):
                    return True
                continue
            grown = span | {x ^ mv for x in span}
            if all(legal[start ^ x] for x in grown) and rec(v + 1, start, frozenset(grown)):
                return True
        return False

    return any(legal[x] and rec(0, x, frozenset({0})) for x in range(1 << n))


class TestValidate:
    def test_example_ok(self):
        assert validate_system(EX23, EX23_SYSTEM) == []

    def test_wagner_ok(self):
        assert validate_system(WAGNER, WAGNER_SYSTEM) == []

    def test_missing_vertex(self):
        m = MoveSystem((0b10, 0b10, 0b100, 0b1000))
        assert ("contains-vertex", 0) in validate_system(EX23, m) or any(v == 0 for _, v in validate_system(EX23, m))

    def test_reports_every_violation(self):
        # the all-vertex move at every vertex breaks property 2 everywhere
        m = MoveSystem((EX23.full,) * 4)
        assert sorted(v for _, v in validate_system(EX23, m)) == [0, 1, 2, 3]

    def test_from_classes_rejects_overlap(self):
        with pytest.raises(UsageError):
            MoveSystem.from_classes(3, [0b011, 0b110])


class TestSpan:
    def test_example_rank(self):
        assert move_span(EX23_SYSTEM).rank == 3

    def test_wagner_rank(self):
        assert move_span(WAGNER_SYSTEM).rank == 3

    def test_all_equal(self):
        assert move_span(MoveSystem((0b1111,) * 4)).rank == 1

    @given(st.lists(st.integers(0, 255), max_size=10))
    def test_rank_matches_span_size(self, rows):
        b = basis_from_rows(rows)
        assert 1 << b.rank == len(oracles.orbit(rows, 0))
        for r in rows:
            assert b.contains(r)


class TestVerify:
    def test_example_legal(self):
        rep = verify_legal_orbit(EX23, EX23_SYSTEM, s(4))
        assert rep.legal and rep.orbit_size == 8

    def test_example_illegal_witness(self):
        rep = verify_legal_orbit(EX23, EX23_SYSTEM, s(1, 2, 4))
        assert rep.verdict == "illegal"
        assert rep.witness.state == s(2, 4)
        # reached by the move {1}, which first appears at vertex 1
        assert [EX23_SYSTEM.moves[v] for v in rep.witness.moves] == [s(1)]

    def test_cube_zigzag(self):
        g = cube()
        even = vset(x for x in range(8) if bin(x).count("1") % 2 == 0)
        m = MoveSystem.from_classes(8, [even, g.full & ~even])
        # a path 000-001-011-111 zig-zagging across the cube
        rep = verify_legal_orbit(g, m, vset([0b000, 0b001, 0b011, 0b111]))
        assert rep.legal and rep.orbit_size == 4

    def test_invalid_system_rejected(self):
        with pytest.raises(UsageError):
            verify_legal_orbit(EX23, MoveSystem((EX23.full,) * 4), 1)

    def test_rank_cap(self):
        g = Graph(40)
        m = MoveSystem(tuple(1 << v for v in range(40)))
        with pytest.raises(ResourceRefusal):
            verify_legal_orbit(g, m, 1)

    @given(oracles.graph_system_state())
    def test_matches_oracle(self, gms):
        g, moves, s0 = gms
        m = MoveSystem(tuple(moves))
        rep = verify_legal_orbit(g, m, s0, exhaustive=True)
        orbit = oracles.orbit(moves, s0)
        assert rep.orbit_size == len(orbit) == 1 << rep.rank
        bad = [x for x in orbit if not oracles.legal(g, x)]
        assert rep.legal == (not bad)
        assert rep.illegal_count == len(bad)

    @given(oracles.graph_system_state())
    def test_witness_replays(self, gms):
        g, moves, s0 = gms
        m = MoveSystem(tuple(moves))
        rep = verify_legal_orbit(g, m, s0)
        if rep.legal:
            return
        w = rep.witness
        x = s0
        for v in w.moves:
            x ^= m.moves[v]
        assert x == w.state
        assert not is_legal_state(g, w.state)
        # nothing earlier in the walk fails
        for i, state in enumerate(orbit_states(m, s0)):
            if i == w.index:
                break
            assert is_legal_state(g, state)

    @given(oracles.graph_system_state(), st.randoms(use_true_random=False))
    def test_verdict_independent_of_start(self, gms, rnd):
        g, moves, s0 = gms
        m = MoveSystem(tuple(moves))
        want = verify_legal_orbit(g, m, s0).verdict
        orbit = sorted(oracles.orbit(moves, s0))
        for x in rnd.sample(orbit, min(10, len(orbit))):
            assert verify_legal_orbit(g, m, x).verdict == want

    @given(oracles.graph_system_state(3, 12))
    @settings(max_examples=30)
    def test_engines_agree(self, gms):
        g, moves, s0 = gms
        m = MoveSystem(tuple(moves))
        a = verify_legal_orbit(g, m, s0, engine="python", exhaustive=True, check_strong=True)
        b = verify_legal_orbit(g, m, s0, engine="compiled", exhaustive=True, check_strong=True)
        c = verify_legal_orbit(g, m, s0, engine="compiled", threads=4)
        assert a == b
        assert a.verdict == c.verdict and a.witness == c.witness

    @given(oracles.graph_system_state(2, 10))
    def test_orbit_visits_distinct_states(self, gms):
        g, moves, s0 = gms
        m = MoveSystem(tuple(moves))
        seen = list(orbit_states(m, s0))
        assert len(set(seen)) == len(seen) == 1 << move_span(m).rank
        # consecutive Gray steps differ by exactly one basis row
        rows = set(move_span(m).rows)
        for a, b in zip(seen, seen[1:]):
            assert a ^ b in rows


def _legal_instances():
    """Hypothesis-independent pool of legal systems for the orbit-wide identities."""
    yield EX23, EX23_SYSTEM, s(4)
    yield WAGNER, WAGNER_SYSTEM, s(1, 2, 4, 8)
    g = cube()
    even = vset(x for x in range(8) if bin(x).count("1") % 2 == 0)
    yield g, MoveSystem.from_classes(8, [even, g.full & ~even]), vset([0, 1, 3, 7])
    rnd = random.Random(7)
    found = 0
    while found < 25:
        n = rnd.randint(4, 9)
        h = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rnd.random() < 0.5])
        res = exists_legal_system(h)
        if res.found:
            found += 1
            yield h, res.system, res.state


LEGAL_POOL = list(_legal_instances())


@pytest.mark.parametrize("g,m,s0", LEGAL_POOL)
class TestLegalOrbitIdentities:
    def test_legal(self, g, m, s0):
        assert verify_legal_orbit(g, m, s0).legal

    def test_weak_states_need_a_singleton_side(self, g, m, s0):
        # v with no neighbour across is isolated on the other side after m_v,
        # which is survivable only when that side is {v} alone
        states = list(orbit_states(m, s0))
        rep = verify_legal_orbit(g, m, s0, check_strong=True)
        assert rep.not_strong == sum(not is_strongly_legal_state(g, x) for x in states)
        if rep.not_strong:
            sizes = {bin(x).count("1") for x in states}
            assert 1 in sizes or g.n - 1 in sizes
        for x in states:
            for v in range(g.n):
                inside = (x >> v) & 1
                if not any(((x >> u) & 1) != inside for u in members(g.adj[v])):
                    flipped = x ^ m.moves[v]
                    assert flipped in (1 << v, g.full & ~(1 << v))

    def test_curvature_nonnegative(self, g, m, s0):
        assert kappa2(g) >= 0

    def test_clique_frequency(self, g, m, s0):
        import networkx as nx

        assert clique_orbit_frequency(g, m, s0, 0) == 1
        for c in nx.enumerate_all_cliques(oracles.to_nx(g)):
            k = vset(c)
            want = Fraction(1, 1 << len(c))
            assert clique_orbit_frequency(g, m, s0, k) == want
            assert clique_orbit_frequency_bruteforce(g, m, s0, k) == want

    def test_trees_when_flat(self, g, m, s0):
        if kappa2(g) == 0:
            assert all_states_trees(g, m, s0)


def test_example_orbit_has_weak_states():
    # {1,2,3}: vertex 2 sees only 1 and 3, both inside
    states = set(orbit_states(EX23_SYSTEM, s(4)))
    assert s(1, 2, 3) in states
    assert is_legal_state(EX23, s(1, 2, 3))
    assert not is_strongly_legal_state(EX23, s(1, 2, 3))


class TestCliqueFrequency:
    def test_example_edge(self):
        assert clique_orbit_frequency(EX23, EX23_SYSTEM, s(4), s(1, 2)) == Fraction(1, 4)

    def test_not_a_clique(self):
        with pytest.raises(UsageError):
            clique_orbit_frequency(EX23, EX23_SYSTEM, s(4), s(2, 4))

    @given(oracles.graph_system_state(2, 8), st.data())
    def test_fast_matches_bruteforce(self, gms, data):
        g, moves, s0 = gms
        m = MoveSystem(tuple(moves))
        v = data.draw(st.integers(0, g.n - 1))
        k = 1 << v
        nb = members(g.adj[v])
        if nb:
            k |= 1 << data.draw(st.sampled_from(nb))
        assert clique_orbit_frequency(g, m, s0, k) == clique_orbit_frequency_bruteforce(g, m, s0, k)


class TestTrees:
    def test_single_edge(self):
        g = Graph(2, [(0, 1)])
        assert all_states_trees(g, MoveSystem((1, 2)), 1)

    def test_cube(self):
        g = cube()
        even = vset(x for x in range(8) if bin(x).count("1") % 2 == 0)
        assert all_states_trees(g, MoveSystem.from_classes(8, [even, g.full & ~even]), vset([0, 1, 3, 7]))


class TestStateSearch:
    def test_path2(self):
        assert exists_legal_state(Graph(2, [(0, 1)])) == 1

    def test_cube_has_one(self):
        assert exists_legal_state(cube()) is not None

    def test_refuses_large(self):
        with pytest.raises(ResourceRefusal, match="28"):
            exists_legal_state(Graph(29))

    @given(oracles.graphs(1, 11))
    def test_matches_oracle(self, g):
        got = exists_legal_state(g)
        assert (got is not None) == oracles.any_legal_state(g)
        if got is not None:
            assert got & 1 and is_legal_state(g, got)
            # canonical: nothing smaller by (size, lex) qualifies
            k = bin(got).count("1")
            for combo in itertools.combinations(range(1, g.n), k - 1):
                cand = vset(combo) | 1
                if cand == got:
                    break
                assert not is_legal_state(g, cand)

    @given(oracles.graphs(13, 16, p=0.4))
    @settings(max_examples=15)
    def test_compiled_path_matches_python(self, g):
        got = exists_legal_state(g)
        strong = exists_legal_state(g, strong=True)
        if got is None:
            assert strong is None
        else:
            assert is_legal_state(g, got)
        if strong is not None:
            assert is_strongly_legal_state(g, strong)

    @given(oracles.graphs(2, 9))
    def test_strong_matches_oracle(self, g):
        got = exists_legal_state(g, strong=True)
        want = any(oracles.strongly_legal(g, x) for x in range(1, 1 << g.n))
        assert (got is not None) == want


class TestSystemSearch:
    def test_house_none(self):
        g = Graph(5, [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4), (0, 2)])
        assert exists_legal_system(g).status == "none"
        assert not brute_legal_system(g)

    @given(oracles.graphs(2, 6))
    @settings(max_examples=40)
    def test_matches_bruteforce(self, g):
        res = exists_legal_system(g)
        assert res.found == brute_legal_system(g)
        if res.found:
            assert validate_system(g, res.system) == []
            assert verify_legal_orbit(g, res.system, res.state).legal


class TestPartitionSearch:
    def test_edgeless_pair(self):
        res = search_partition_system(Graph(2), "exhaustive")
        assert res.found
        assert res.classes == (0b11,)
        assert verify_legal_orbit(Graph(2), res.system, res.state).legal
        # singleton classes reach the empty state from {0}
        assert not verify_legal_orbit(Graph(2), MoveSystem((1, 2)), 1).legal

    def test_wagner_none(self):
        assert search_partition_system(WAGNER, "exhaustive").status == "none"

    def test_refusal(self):
        with pytest.raises(ResourceRefusal):
            search_partition_system(Graph(30), "exhaustive")

    @given(oracles.graphs(1, 7))
    def test_partitions_enumerated(self, g):
        parts = [tuple(sorted(p)) for p in independent_partitions(g)]
        assert len(parts) == len(set(parts))
        for p in parts:
            assert sum(p) == g.full
            for c in p:
                assert all(not (g.adj[v] & c) for v in members(c))

    @given(oracles.colored_systems(3, 8))
    @settings(max_examples=30)
    def test_exhaustive_agrees_with_bruteforce(self, gcs):
        g, _, _ = gcs
        res = search_partition_system(g, "exhaustive")
        want = False
        for p in independent_partitions(g):
            moves = MoveSystem.from_classes(g.n, p).moves
            if any(all(oracles.legal(g, x) for x in oracles.orbit(moves, s0)) for s0 in range(1 << g.n)):
                want = True
                break
        assert res.found == want
        if res.found:
            assert verify_legal_orbit(g, res.system, res.state).legal

    def test_coloring_mode(self):
        res = search_partition_system(cube(), "coloring", k_min=2, k_max=2)
        assert res.found and len(res.classes) == 2


class TestCone:
    def wheel(self):
        return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0)] + [(4, v) for v in range(4)])

    def test_restriction(self):
        g = self.wheel()
        res = search_partition_system(g, "exhaustive")
        assert res.found
        h, m2, s2 = restrict_cone_system(g, 4, res.system, res.state)
        assert h.n == 4 and h.num_edges == 4
        assert validate_system(h, m2) == []
        assert verify_legal_orbit(h, m2, s2).legal
        if not (res.state >> 4) & 1:
            assert s2 == res.state & 0b1111

    def test_rejects_non_cone(self):
        with pytest.raises(UsageError):
            restrict_cone_system(EX23, 0, EX23_SYSTEM, s(4))


class TestLawful:
    def test_four_cycle(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert verify_lawful_antimatching(g, [(0, 2), (1, 3)])

    def test_isolated_vertex(self):
        g = Graph(4, [(0, 1), (1, 2)])
        assert not verify_lawful_antimatching(g, [(0, 2), (1, 3)])

    def test_k22_minus_matching(self):
        g = Graph(4, [(0, 3), (1, 2)])
        pairs = [(0, 1), (2, 3)]
        want = all(oracles.legal(g, vset(t)) for t in itertools.product(*pairs))
        assert verify_lawful_antimatching(g, pairs) == want

    def test_rejects_adjacent_pair(self):
        with pytest.raises(UsageError):
            verify_lawful_antimatching(Graph(2, [(0, 1)]), [(0, 1)])

    def test_refusal(self):
        g = Graph(50)
        with pytest.raises(ResourceRefusal):
            verify_lawful_antimatching(g, [(2 * i, 2 * i + 1) for i in range(25)])

    @given(oracles.graphs(2, 10), st.randoms(use_true_random=False))
    def test_matches_oracle(self, g, rnd):
        if g.n % 2:
            return
        verts = list(range(g.n))
        rnd.shuffle(verts)
        pairs = list(zip(verts[::2], verts[1::2]))
        if any(g.has_edge(a, b) for a, b in pairs):
            return
        want = all(oracles.legal(g, vset(t)) for t in itertools.product(*pairs))
        assert verify_lawful_antimatching(g, pairs) == want
