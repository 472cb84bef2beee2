"""Named reproductions of the worked examples, compared against stored golden results.

Each reproduction returns a JSON-ready dict with a ``certificates`` mapping
(verdict fields of every orbit check it ran) and a ``facts`` mapping (counts,
curvatures, search outcomes). Timing goes under ``timing`` and is never
compared.
"""

from __future__ import annotations

import json
import time
from collections.abc import Callable
from importlib import resources
from pathlib import Path

from .errors import UsageError
from .families import build, icosahedron_graph
from .formats import certificate_dict, dumps
from .graph import (
    Graph,
    clique_census,
    curvature,
    girth,
    induced_connected,
    is_legal_state,
    isomorphism,
    kappa2,
    members,
    popcount,
)
from .hamilton import find_hamiltonian_cycle
from .legal import (
    certify,
    exists_legal_state,
    exists_legal_system,
    move_span,
    remove_cone_vertex,
    search_partition_system,
    verify_legal_orbit,
)
from .planar import (
    barycentric_skeleton,
    cubic_planar_maps,
    cusped_check,
    hamilton_to_state,
    pogorelov_check,
    state_to_hamilton,
    tbws_check,
    vf_graph,
)

GOLDEN_PACKAGE = "legalsys.golden"


def _cert(g: Graph, m, s0: int, **kw) -> dict:
    return certificate_dict(certify(g, m, s0, **kw))


def _frac(x) -> str:
    return str(x)


def repro_example_2_3() -> dict:
    b = build("example-2-3")
    g = b.graph
    return {
        "certificates": {
            "start": _cert(g, b.system, b.state),
            "illegal_start": _cert(g, b.system, b.extra["illegal_start"]),
        },
        "facts": {"kappa2": _frac(kappa2(g))},
    }


def repro_cube() -> dict:
    b = build("hypercube", d=3)
    g = b.graph
    return {
        "certificates": {"bipartition": _cert(g, b.system, b.state)},
        "facts": {"kappa": _frac(curvature(g, float("inf"))), "girth": girth(g)},
    }


def repro_wagner() -> dict:
    b = build("wagner")
    g = b.graph
    res = search_partition_system(g, "exhaustive")
    return {
        "certificates": {"bundled": _cert(g, b.system, b.state)},
        "facts": {"kappa2": _frac(kappa2(g)), "colored_search": res.status, "partitions_tried": res.tried},
    }


def repro_tbws() -> dict:
    b = build("tbws")
    p = b.extra["parts"]
    res = tbws_check(b.graph, p["A1"], p["A2"], p["B1"], p["B2"])
    return {
        "certificates": {"tbws": _cert(b.graph, res.system, res.state)},
        "facts": {"tbws_check": res.ok},
    }


def repro_cell24() -> dict:
    b = build("cell24")
    g = b.graph
    extra = b.system.moves[16]
    return {
        "certificates": {"three_class": _cert(g, b.system, b.state)},
        "facts": {
            "vertices": g.n,
            "edges": g.num_edges,
            "extra_independent": all(not (g.adj[v] & extra) for v in members(extra)),
        },
    }


def icosahedron_orbit_facts(g: Graph, m, states) -> dict:
    """Sort the 64 one-per-colour states into legal and illegal orbits."""
    basis = move_span(m)
    illegal = [s for s in states if not verify_legal_orbit(g, m, s).legal]
    legal_orbit_states = [s for s in states if s not in illegal]
    bad_states = [s for s in states if not is_legal_state(g, s)]
    one_orbit = all(basis.contains(s ^ bad_states[0]) for s in bad_states) if bad_states else True
    two_triangles = True
    for s in bad_states:
        sides = [s, g.full & ~s]
        ok = False
        for side in sides:
            if induced_connected(g, side):
                continue
            sub, _ = g.induced(side)
            cen = clique_census(sub, 2)
            if sub.n == 6 and sub.num_edges == 6 and cen.counts[3] == 2:
                ok = True
        two_triangles = two_triangles and ok
    return {
        "one_per_colour_states": len(states),
        "states_with_legal_orbit": len(legal_orbit_states),
        "illegal_states": len(bad_states),
        "illegal_in_single_orbit": one_orbit,
        "illegal_sides_two_triangles": two_triangles,
    }


def repro_icosahedron() -> dict:
    b = build("icosahedron")
    g = b.graph
    facts = icosahedron_orbit_facts(g, b.system, b.extra["one_per_colour"])
    facts["move_sizes"] = sorted({popcount(mv) for mv in b.system.moves})
    return {"certificates": {"one_per_colour": _cert(g, b.system, b.state)}, "facts": facts}


def cell600_links_icosahedral(g: Graph) -> int:
    ico, _ = icosahedron_graph()
    good = 0
    for v in range(100):
        sub, _ = g.induced(g.adj[v])
        if isomorphism(sub, ico) is not None:
            good += 1
    return good


def repro_cell600(threads: int = 1) -> dict:
    b = build("cell600")
    g = b.graph
    return {
        "certificates": {"S_o": _cert(g, b.system, b.state, threads=threads)},
        "facts": {
            "vertices": g.n,
            "edges": g.num_edges,
            "moves": len(b.system.distinct()),
            "icosahedral_links": cell600_links_icosahedral(g),
        },
    }


def repro_brinkmann() -> dict:
    b = build("brinkmann")
    g = b.graph
    res = search_partition_system(g, "coloring", k_min=4, k_max=4)
    certs = {}
    if res.found:
        certs["search"] = _cert(g, res.system, res.state, check_strong=True)
    return {
        "certificates": certs,
        "facts": {
            "vertices": g.n,
            "edges": g.num_edges,
            "girth": girth(g),
            "kappa2": _frac(kappa2(g)),
            "search": res.status,
            "classes": len(res.classes),
        },
    }


def repro_dual_lobell() -> dict:
    certs = {}
    pog = {}
    for n in range(5, 13):
        b = build("dual-lobell", n=n)
        certs[f"n={n}"] = _cert(b.graph, b.system, b.state)
        pog[str(n)] = pogorelov_check(b.embedding).passed
    ico = build("icosahedron").graph
    return {
        "certificates": certs,
        "facts": {
            "pogorelov": pog,
            "n5_is_icosahedron": isomorphism(build("dual-lobell", n=5).graph, ico) is not None,
        },
    }


def repro_blowup() -> dict:
    b = build("blowup-cube", d=3, n=7)
    g = b.graph
    b4 = build("blowup-cube", d=4, n=7)
    return {
        "certificates": {"preimage": _cert(g, b.system, b.state)},
        "facts": {
            "vertices": g.n,
            "girth": girth(g),
            "kappa2": _frac(kappa2(g)),
            "d4_kappa2": _frac(kappa2(b4.graph)),
            "d4_girth": girth(b4.graph),
        },
    }


def repro_lambda_5_3() -> dict:
    g = build("bipartite-cone", m=5, k=3).graph
    s = exists_legal_state(g)
    res = exists_legal_system(g)
    return {
        "certificates": {},
        "facts": {
            "vertices": g.n,
            "edges": g.num_edges,
            "kappa2": _frac(kappa2(g)),
            "states_scanned": 1 << g.n,
            "legal_system": res.status,
            "first_legal_state": None if s is None else members(s),
        },
    }


def repro_lambda_6_5() -> dict:
    b = build("bipartite-cone", m=6, k=5)
    return {"certificates": {"bipartition": _cert(b.graph, b.system, b.state)}, "facts": {"vertices": b.graph.n}}


def repro_tutte() -> dict:
    b = build("tutte")
    g = b.graph
    ham = find_hamiltonian_cycle(g)
    vf = vf_graph(b.embedding)
    return {
        "certificates": {},
        "facts": {
            "vertices": g.n,
            "edges": g.num_edges,
            "faces": len(b.embedding.faces()),
            "hamiltonian": ham.found,
            "exact": ham.exact,
            "search_nodes": ham.nodes,
            "vf_vertices": vf.graph.n,
            "vf_kappa2": _frac(kappa2(vf.graph)),
            "cusped": cusped_check(vf.embedding).to_dict()["conditions"],
        },
    }


def reduce_barycentric(e) -> tuple[Graph, int]:
    """Delete every edge vertex of the barycentric skeleton, each a cone on a 4-cycle."""
    g, index = barycentric_skeleton(e)
    steps = 0
    for x in sorted(index["edge"], reverse=True):
        g = remove_cone_vertex(g, x)
        steps += 1
    return g, steps


def repro_cone_chain() -> dict:
    b = build("tutte")
    g, steps = reduce_barycentric(b.embedding)
    vf = vf_graph(b.embedding)
    return {
        "certificates": {},
        "facts": {"reductions": steps, "isomorphic_to_vf": isomorphism(g, vf.graph) is not None},
    }


def vf_equivalence(max_n: int) -> dict:
    """Hamiltonicity against strongly legal states of VF for every generated cubic map."""
    maps = cubic_planar_maps(max_n)
    agree = roundtrips = hamiltonian = 0
    for e in maps:
        vf = vf_graph(e)
        ham = find_hamiltonian_cycle(e.graph)
        s = exists_legal_state(vf.graph, strong=True)
        if ham.found == (s is not None):
            agree += 1
        if ham.found:
            hamiltonian += 1
            hs = hamilton_to_state(e, ham.cycle, vf)
            cyc = state_to_hamilton(e, hs.state, vf)
            rep = verify_legal_orbit(vf.graph, hs.system(vf), hs.state, check_strong=True)
            back = state_to_hamilton(e, s, vf)
            same = set(_cycle_edges(cyc)) == set(_cycle_edges(ham.cycle))
            if rep.legal and rep.not_strong == 0 and same and len(back) == e.graph.n:
                roundtrips += 1
    return {"maps": len(maps), "agree": agree, "hamiltonian": hamiltonian, "roundtrips": roundtrips}


def _cycle_edges(cyc):
    k = len(cyc)
    return [(min(cyc[i], cyc[(i + 1) % k]), max(cyc[i], cyc[(i + 1) % k])) for i in range(k)]


def repro_vf_equivalence() -> dict:
    return {"certificates": {}, "facts": vf_equivalence(12)}


REPRODUCTIONS: dict[str, Callable[[], dict]] = {
    "example-2-3": repro_example_2_3,
    "cube": repro_cube,
    "wagner": repro_wagner,
    "tbws": repro_tbws,
    "cell24": repro_cell24,
    "icosahedron": repro_icosahedron,
    "cell600": repro_cell600,
    "brinkmann": repro_brinkmann,
    "dual-lobell": repro_dual_lobell,
    "blowup": repro_blowup,
    "lambda-5-3": repro_lambda_5_3,
    "lambda-6-5": repro_lambda_6_5,
    "tutte": repro_tutte,
    "cone-chain": repro_cone_chain,
    "vf-equivalence": repro_vf_equivalence,
}


def run(example: str) -> dict:
    try:
        fn = REPRODUCTIONS[example]
    except KeyError:
        raise UsageError(f"unknown example {example!r}; choose from {', '.join(REPRODUCTIONS)}") from None
    t0 = time.perf_counter()
    out = fn()
    out = {"id": example, **out, "timing": {"seconds": round(time.perf_counter() - t0, 3)}}
    return out


def comparable(result: dict) -> dict:
    """Everything except timing, with certificates cut down to their verdict fields."""
    certs = {
        k: {f: v.get(f) for f in ("graph", "rank", "orbit_size", "verdict", "witness")}
        for k, v in result.get("certificates", {}).items()
    }
    return {"id": result["id"], "certificates": certs, "facts": result.get("facts", {})}


def golden_path(example: str) -> Path:
    return Path(str(resources.files(GOLDEN_PACKAGE).joinpath(f"{example}.json")))


def load_golden(example: str) -> dict | None:
    p = golden_path(example)
    if not p.exists():
        return None
    return json.loads(p.read_text())


def diff(result: dict, golden: dict | None) -> list[str]:
    """Human-readable differences in the compared fields; empty when they match."""
    if golden is None:
        return ["no golden file"]
    a = dumps(comparable(result)).splitlines()
    b = dumps(comparable(golden)).splitlines()
    if a == b:
        return []
    import difflib

    return list(difflib.unified_diff(b, a, "golden", "computed", lineterm=""))


def write_golden(result: dict, directory: Path | None = None) -> Path:
    p = (directory / f"{result['id']}.json") if directory else golden_path(result["id"])
    p.write_text(dumps(comparable(result)))
    return p


__all__ = ["REPRODUCTIONS", "run", "diff", "load_golden", "write_golden", "comparable", "vf_equivalence"]
