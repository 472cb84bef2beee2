from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from legalsys.errors import UsageError
from legalsys.families import build
from legalsys.graph import Graph, bipartition, girth, is_strongly_legal_state, kappa2, vset
from legalsys.hamilton import find_hamiltonian_cycle
from legalsys.legal import MoveSystem, exists_legal_state, verify_legal_orbit
from legalsys.planar import (
    EmbeddedGraph,
    add_face_edge,
    barycentric_skeleton,
    cubic_planar_maps,
    cusped_check,
    hamilton_to_state,
    insert_diamond,
    k4_map,
    map_code,
    pogorelov_check,
    random_cubic_planar_map,
    relhyp_quads_check,
    state_to_hamilton,
    tbws_check,
    trace_faces,
    vf_graph,
)


def triangle() -> EmbeddedGraph:
    return EmbeddedGraph.from_rotation(3, [(1, 2), (2, 0), (0, 1)])


def nx_embedding(e: EmbeddedGraph) -> nx.PlanarEmbedding:
    emb = nx.PlanarEmbedding()
    emb.set_data({v: list(r) for v, r in enumerate(e.rotation)})
    return emb


def edge_set(cycle):
    k = len(cycle)
    return {frozenset((cycle[i], cycle[(i + 1) % k])) for i in range(k)}


EMBEDDED = ["house", "triangular-prism", "antiprism", "icosahedron", "dual-lobell", "tutte"]


class TestFaces:
    def test_triangle(self):
        assert len(trace_faces(triangle())) == 2

    def test_house(self):
        assert len(trace_faces(build("house").embedding)) == 3

    def test_tutte(self):
        e = build("tutte").embedding
        assert (e.n, e.graph.num_edges, len(trace_faces(e))) == (46, 69, 25)

    def test_inconsistent_rotation(self):
        with pytest.raises(UsageError, match="vertex 1"):
            EmbeddedGraph(Graph(3, [(0, 1), (1, 2)]), [(1,), (0, 2, 2), (1,)])

    def test_non_spherical_rotation(self):
        # K4 with one rotation reversed traces a torus-like surface
        rot = [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)]
        rot[0] = rot[0][::-1]
        with pytest.raises(UsageError):
            trace_faces(EmbeddedGraph.from_rotation(4, rot))

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_every_dart_on_one_face(self, name):
        e = build(name).embedding
        darts = [(f[i], f[(i + 1) % len(f)]) for f in e.faces() for i in range(len(f))]
        assert len(darts) == len(set(darts)) == 2 * e.graph.num_edges
        assert e.euler_characteristic() == 2

    @pytest.mark.parametrize("name", EMBEDDED)
    def test_rotation_is_planar_for_networkx(self, name):
        # raises NetworkXException on a non-planar rotation system
        nx_embedding(build(name).embedding).check_structure()


class TestVF:
    def test_house(self):
        vf = vf_graph(build("house").embedding)
        assert (vf.graph.n, vf.graph.num_edges) == (8, 12)

    def test_tutte(self):
        vf = vf_graph(build("tutte").embedding)
        assert (vf.graph.n, vf.graph.num_edges) == (71, 138)
        assert kappa2(vf.graph) == 0

    def test_cube(self):
        vf = vf_graph(build("hypercube", d=3).embedding)
        assert (vf.graph.n, vf.graph.num_edges) == (14, 24)

    def test_rejects_cut_vertex(self):
        bowtie = EmbeddedGraph.from_rotation(5, [(1, 2, 3, 4), (2, 0), (0, 1), (4, 0), (0, 3)])
        with pytest.raises(UsageError, match="2-connected"):
            vf_graph(bowtie)

    @pytest.mark.parametrize("e", cubic_planar_maps(10) + [build(n).embedding for n in EMBEDDED])
    def test_invariants(self, e):
        vf = vf_graph(e)
        g = vf.graph
        assert g.n == e.n + len(e.faces())
        assert g.num_edges == 2 * e.graph.num_edges
        assert bipartition(g) is not None
        assert all(not (g.adj[v] & vf.vertex_part) for v in range(e.n))
        assert all(len(f) == 4 for f in vf.embedding.faces())
        assert kappa2(g) == 0
        if len(e.faces()) >= 3:
            assert girth(g) == 4


def hamilton_maps():
    out = []
    for name in ("house", "triangular-prism"):
        out.append(build(name).embedding)
    out.append(build("hypercube", d=3).embedding)
    return out


class TestHamiltonBridge:
    @pytest.mark.parametrize("e", hamilton_maps())
    def test_round_trip(self, e):
        cyc = find_hamiltonian_cycle(e.graph).cycle
        vf = vf_graph(e)
        hs = hamilton_to_state(e, cyc, vf)
        assert is_strongly_legal_state(vf.graph, hs.state)
        rep = verify_legal_orbit(vf.graph, hs.system(vf), hs.state)
        assert rep.legal and rep.orbit_size == 4
        for a in (hs.faces_in, hs.faces_out):
            for b in (hs.initial, hs.terminal):
                assert is_strongly_legal_state(vf.graph, a | b)
        assert edge_set(state_to_hamilton(e, hs.state, vf)) == edge_set(cyc)

    def test_house_state(self):
        e = build("house").embedding
        vf = vf_graph(e)
        hs = hamilton_to_state(e, find_hamiltonian_cycle(e.graph).cycle, vf)
        back = state_to_hamilton(e, hs.state, vf)
        assert len(back) == 5

    def test_drawn_house_state(self):
        # bottom-left, top-left and top-right corners with the square and the roof
        e = build("house").embedding
        vf = vf_graph(e)
        inner = [vf.face_vertex(f) for f, face in enumerate(vf.faces) if len(face) < 5]
        state = vset([0, 2, 3, *inner])
        assert len(inner) == 2
        assert is_strongly_legal_state(vf.graph, state)
        assert sorted(state_to_hamilton(e, state, vf)) == list(range(5))

    def test_rejects_non_cycle(self):
        e = build("house").embedding
        with pytest.raises(UsageError):
            hamilton_to_state(e, [0, 1, 2, 3, 4])

    def test_rejects_high_degree(self):
        e = build("icosahedron").embedding
        with pytest.raises(UsageError):
            hamilton_to_state(e, list(range(12)))

    def test_rejects_weak_state(self):
        e = build("house").embedding
        with pytest.raises(UsageError):
            state_to_hamilton(e, 1)

    def test_random_maps_close(self):
        rng = random.Random(2024)
        for _ in range(50):
            e = random_cubic_planar_map(20, rng)
            res = find_hamiltonian_cycle(e.graph)
            if not res.found:
                continue
            vf = vf_graph(e)
            hs = hamilton_to_state(e, res.cycle, vf)
            assert edge_set(state_to_hamilton(e, hs.state, vf)) == edge_set(res.cycle)

    @pytest.mark.parametrize("e", [m for m in cubic_planar_maps(14) if m.n <= 14], ids=lambda m: f"n{m.n}")
    def test_equivalence_bruteforce(self, e):
        vf = vf_graph(e)
        ham = oracles.hamiltonian_cycles_exist(e.graph) if e.n <= 10 else find_hamiltonian_cycle(e.graph).found
        strong = exists_legal_state(vf.graph, strong=True)
        assert ham == (strong is not None)
        if strong is not None:
            cyc = state_to_hamilton(e, strong, vf)
            assert len(cyc) == e.n


class TestGenerator:
    def test_polyhedral_counts(self):
        # 3-connected cubic planar graphs embed uniquely up to reflection;
        # their counts on 4..14 vertices are 1, 1, 2, 5, 14, 50
        counts = {}
        for m in cubic_planar_maps(14):
            if nx.node_connectivity(oracles.to_nx(m.graph)) >= 3:
                counts[m.n] = counts.get(m.n, 0) + 1
        assert counts == {4: 1, 6: 1, 8: 2, 10: 5, 12: 14, 14: 50}

    def test_children_are_cubic(self):
        for m in cubic_planar_maps(12):
            assert all(m.graph.degree(v) == 3 for v in range(m.n))
            assert m.euler_characteristic() == 2

    def test_code_invariant_under_relabel(self):
        e = insert_diamond(k4_map(), 0, 1)
        perm = list(range(e.n))
        random.Random(1).shuffle(perm)
        inv = {p: i for i, p in enumerate(perm)}
        rot = [tuple(perm[u] for u in e.rotation[inv[v]]) for v in range(e.n)]
        assert map_code(EmbeddedGraph.from_rotation(e.n, rot)) == map_code(e)


def test_add_face_edge_grows_cubic_map():
    e = k4_map()
    f = e.faces()[0]
    e2 = add_face_edge(e, (f[0], f[1]), (f[1], f[2]))
    assert (e2.n, e2.graph.num_edges) == (6, 9)
    assert e2.euler_characteristic() == 2


class TestReflectionChecks:
    def test_icosahedron_pogorelov(self):
        assert pogorelov_check(build("icosahedron").embedding).passed

    def test_cube_pogorelov_fails(self):
        v = pogorelov_check(build("hypercube", d=3).embedding)
        assert not v.passed and not v.conditions["triangular_faces"]

    @pytest.mark.parametrize("n", range(5, 13))
    def test_dual_lobell_pogorelov(self, n):
        assert pogorelov_check(build("dual-lobell", n=n).embedding).passed

    def test_k4_excluded(self):
        v = pogorelov_check(EmbeddedGraph.from_rotation(4, [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)]))
        assert not v.conditions["not_excluded"]

    def test_cube_cusped(self):
        assert cusped_check(build("hypercube", d=3).embedding).passed

    def test_prism_cusped(self):
        assert cusped_check(build("triangular-prism").embedding).passed

    def test_vf_tutte_cusped(self):
        v = cusped_check(vf_graph(build("tutte").embedding).embedding)
        assert v.passed and len(v.conditions) == 4

    def test_octahedron_not_pogorelov(self):
        # every 4-cycle around a vertex is a separating square
        v = pogorelov_check(build("antiprism", n=3).embedding)
        assert not v.conditions["short_cycles"]


def k23() -> Graph:
    return Graph(5, [(b, c) for b in (0, 1) for c in (2, 3, 4)])


class TestRelHyp:
    def test_k23(self):
        ok, w = relhyp_quads_check(k23())
        assert not ok and sorted(w) == [0, 1, 2, 3, 4]

    def test_vf_tutte(self):
        assert relhyp_quads_check(vf_graph(build("tutte").embedding).graph)[0]

    @given(st.integers(3, 12))
    def test_cycles(self, n):
        assert relhyp_quads_check(Graph(n, [(i, (i + 1) % n) for i in range(n)]))[0]

    @given(oracles.graphs(5, 7))
    @settings(max_examples=40)
    def test_matches_bruteforce(self, g):
        def forbidden(b, c):
            if g.has_edge(*b):
                return False
            if all(g.has_edge(x, y) for x, y in itertools.combinations(c, 2)):
                return False
            if not all(g.has_edge(x, y) for x in b for y in c):
                return False
            return True

        want = not any(
            forbidden(b, tuple(x for x in five if x not in b))
            for five in itertools.combinations(range(g.n), 5)
            for b in itertools.combinations(five, 2)
        )
        ok, w = relhyp_quads_check(g)
        assert ok == want
        if not ok:
            assert forbidden(w[:2], w[2:])


class TestTBWS:
    def test_figure(self):
        b = build("tbws")
        x = b.extra["parts"]
        res = tbws_check(b.graph, x["A1"], x["A2"], x["B1"], x["B2"])
        assert res.ok
        assert verify_legal_orbit(b.graph, res.system, res.state).legal

    def test_k22_singletons(self):
        g = Graph(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
        res = tbws_check(g, 0b0001, 0b0010, 0b0100, 0b1000)
        want = all(oracles.legal(g, a | b) for a in (1, 2) for b in (4, 8))
        assert res.ok == want

    def test_isolated_a_vertex(self):
        g = Graph(4, [(1, 2), (1, 3)])
        assert not tbws_check(g, 0b0001, 0b0010, 0b0100, 0b1000).ok

    def test_not_a_partition(self):
        with pytest.raises(UsageError):
            tbws_check(k23(), 0b1, 0b1, 0b100, 0b11000)

    @given(oracles.graphs(4, 10), st.data())
    @settings(max_examples=60)
    def test_success_means_legal(self, g, data):
        bp = bipartition(g)
        if bp is None:
            return
        a, b = bp
        a1 = vset(v for v in range(g.n) if (a >> v) & 1 and data.draw(st.booleans()))
        b1 = vset(v for v in range(g.n) if (b >> v) & 1 and data.draw(st.booleans()))
        res = tbws_check(g, a1, a & ~a1, b1, b & ~b1)
        states = [x | y for x in (a1, a & ~a1) for y in (b1, b & ~b1)]
        if res.ok and all(states):
            assert all(oracles.legal(g, x) for x in states)


class TestBarycentric:
    def test_triangle(self):
        g, idx = barycentric_skeleton(triangle())
        assert g.n == 8
        assert [len(idx[k]) for k in ("vertex", "edge", "face")] == [3, 3, 2]

    def test_tutte(self):
        g, _ = barycentric_skeleton(build("tutte").embedding)
        assert g.n == 140

    def test_single_edge_rejected(self):
        with pytest.raises(UsageError):
            barycentric_skeleton(EmbeddedGraph.from_rotation(2, [(1,), (0,)]))

    def test_edge_vertices_are_cones(self):
        from legalsys.legal import cone_square

        g, idx = barycentric_skeleton(build("house").embedding)
        assert all(cone_square(g, x) is not None for x in idx["edge"])


def test_vf_tutte_state_search_refused():
    from legalsys.errors import ResourceRefusal

    with pytest.raises(ResourceRefusal):
        exists_legal_state(vf_graph(build("tutte").embedding).graph, strong=True)


def test_two_move_system_shape():
    e = build("house").embedding
    vf = vf_graph(e)
    m = MoveSystem(tuple(vf.vertex_part if v < e.n else vf.face_part for v in range(vf.graph.n)))
    hs = hamilton_to_state(e, find_hamiltonian_cycle(e.graph).cycle, vf)
    assert hs.system(vf) == m
