"""Command-line interface.

Exit codes: 0 when a verdict was computed (including "illegal" and "none"),
1 for usage and format errors, 2 when a size threshold or search budget
refuses the job, 3 when ``repro`` disagrees with its golden file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .errors import FormatError, ResourceRefusal, UsageError
from .graph import curvature, members, vset

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_MISMATCH = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ helpers


def _graph(path: str):
    return formats.parse_graph(formats.read_text(path), path)


def _embedded(path: str):
    return formats.parse_embedded(formats.read_text(path), path)


def _system(path: str):
    return formats.parse_system(formats.read_text(path), path)


def _vertices(text: str, n: int | None = None) -> list[int]:
    try:
        vs = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a vertex list, got {text!r}") from None
    if n is not None and any(not 0 <= v < n for v in vs):
        raise UsageError(f"vertex out of range in {text!r}")
    return vs


def _emit(args, command: str, result: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(formats.dumps({"command": command, "result": result}))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _state_text(s: int | None) -> str:
    return "none" if s is None else " ".join(map(str, members(s)))


# ---------------------------------------------------------------- commands


def cmd_family(args) -> int:
    from .families import FAMILIES, build

    if args.list:
        _emit(args, "family", {"families": sorted(FAMILIES)}, "\n".join(sorted(FAMILIES)))
        return EXIT_OK
    if not args.name:
        raise UsageError("family name required (see --list)")
    params = {}
    for item in args.param:
        k, sep, v = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not key=value")
        try:
            params[k.replace("-", "_")] = int(v)
        except ValueError:
            raise UsageError(f"parameter {k} needs an integer value") from None
    b = build(args.name, **params)
    files = {}
    gtext = formats.format_embedded(b.embedding) if b.embedding else formats.format_graph(b.graph)
    files[f"{b.name}.graph"] = gtext
    if b.system is not None:
        files[f"{b.name}.system"] = formats.format_system(b.system, b.state)
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text)
    result = {"name": b.name, "vertices": b.graph.n, "edges": b.graph.num_edges, "note": b.note, "files": files}
    _emit(args, "family", result, "".join(files.values()) if not args.output else "\n".join(files))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .legal import certify

    g = _graph(args.graph)
    m, state = _system(args.system)
    if m.n != g.n:
        raise UsageError(f"system has {m.n} vertices, graph has {g.n}")
    if args.state is not None:
        state = vset(_vertices(args.state, g.n))
    if state is None:
        raise UsageError("no start state: add a state line or pass --state")
    cert = certify(g, m, state, exhaustive=args.exhaustive, check_strong=args.strong, threads=args.threads)
    d = formats.certificate_dict(cert)
    d["stats"] = cert.report.to_dict()["stats"]
    _write(args.cert, formats.certificate_json(cert))
    rep = cert.report
    text = f"verdict {rep.verdict}\nrank {rep.rank}\norbit_size {rep.orbit_size}"
    if rep.witness:
        w = rep.witness
        text += f"\nwitness {_state_text(w.state)}\nindex {w.index}\nmoves {' '.join(map(str, w.moves))}"
    _emit(args, "verify", d, text)
    return EXIT_OK


def cmd_search_state(args) -> int:
    from .legal import exists_legal_state

    g = _graph(args.graph)
    s = exists_legal_state(g, strong=args.strong)
    result = {"state": None if s is None else members(s), "strong": args.strong, "exhaustive": True}
    _emit(args, "search-state", result, _state_text(s))
    return EXIT_OK


def cmd_search_system(args) -> int:
    from .legal import exists_legal_system, search_partition_system

    g = _graph(args.graph)
    if args.any:
        res = exists_legal_system(g)
        result = {"status": res.status, "nodes": res.nodes}
        text = res.status
        if res.found:
            result["state"] = members(res.state)
            sys_text = formats.format_system(res.system, res.state)
            _write(args.output, sys_text)
            text += "\n" + sys_text
        _emit(args, "search-system", result, text)
        return EXIT_OK
    mode = "coloring" if args.colorings else "exhaustive"
    res = search_partition_system(g, mode, budget=args.budget, k_min=args.k_min, k_max=args.k_max, seed=args.seed)
    result = {"status": res.status, "tried": res.tried}
    text = res.status
    if res.found:
        result["classes"] = [members(c) for c in res.classes]
        result["state"] = members(res.state)
        sys_text = formats.format_system(res.system, res.state)
        _write(args.output, sys_text)
        text += "\n" + sys_text
    _emit(args, "search-system", result, text)
    return EXIT_OK


def cmd_curvature(args) -> int:
    g = _graph(args.graph)
    n = float("inf") if args.n in ("inf", "oo") else int(args.n)
    k = curvature(g, n)
    _emit(args, "curvature", {"n": args.n, "value": str(k)}, str(k))
    return EXIT_OK


def cmd_vf(args) -> int:
    from .planar import vf_graph

    vf = vf_graph(_embedded(args.graph))
    text = formats.format_embedded(vf.embedding)
    _write(args.output, text)
    result = {"vertices": vf.graph.n, "edges": vf.graph.num_edges, "n_vertices": vf.n_vertices, "text": text}
    _emit(args, "vf", result, text)
    return EXIT_OK


def cmd_hamilton(args) -> int:
    from .hamilton import find_hamiltonian_cycle

    g = _graph(args.graph)
    r = find_hamiltonian_cycle(g, budget=args.budget)
    result = {"cycle": list(r.cycle) if r.found else None, "exact": r.exact, "nodes": r.nodes}
    _emit(args, "hamilton", result, " ".join(map(str, r.cycle)) if r.found else "none")
    return EXIT_OK


def cmd_vf_bridge(args) -> int:
    from .legal import verify_legal_orbit
    from .planar import hamilton_to_state, state_to_hamilton, vf_graph

    e = _embedded(args.graph)
    vf = vf_graph(e)
    if args.to_state is not None:
        hs = hamilton_to_state(e, _vertices(args.to_state, e.graph.n), vf)
        rep = verify_legal_orbit(vf.graph, hs.system(vf), hs.state, check_strong=True)
        result = {
            "state": members(hs.state),
            "system": formats.format_system(hs.system(vf), hs.state),
            "verdict": rep.verdict,
            "orbit_size": rep.orbit_size,
            "not_strongly_legal": rep.not_strong,
        }
        text = result["system"] + f"# verdict {rep.verdict}, orbit {rep.orbit_size}\n"
    else:
        cyc = state_to_hamilton(e, vset(_vertices(args.to_cycle, vf.graph.n)), vf)
        result = {"cycle": list(cyc)}
        text = " ".join(map(str, cyc))
    _emit(args, "vf-bridge", result, text)
    return EXIT_OK


def cmd_check(args) -> int:
    from .planar import cusped_check, pogorelov_check, relhyp_quads_check, tbws_check

    if args.tbws:
        g, _ = formats.parse_graph_text(formats.read_text(args.graph), args.graph)
        parts = [vset(_vertices(p, g.n)) for p in args.tbws]
        r = tbws_check(g, *parts)
        result = {
            "check": "tbws",
            "pass": r.ok,
            "failures": [list(f) for f in r.failures],
            "system": formats.format_system(r.system, r.state),
        }
    elif args.relhyp:
        g = _graph(args.graph)
        ok, wit = relhyp_quads_check(g)
        result = {"check": "relhyp", "pass": ok, "witness": list(wit) if wit else None}
    else:
        e = _embedded(args.graph)
        v = pogorelov_check(e) if args.pogorelov else cusped_check(e)
        result = {"check": "pogorelov" if args.pogorelov else "cusped", **_jsonable(v.to_dict())}
    lines = [f"{result['check']} {'pass' if result['pass'] else 'fail'}"]
    for k, val in result.get("conditions", {}).items():
        lines.append(f"  {k}: {'ok' if val else 'FAIL'}")
    _emit(args, "check", result, "\n".join(lines))
    return EXIT_OK


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=lambda o: list(o) if isinstance(o, (set, frozenset, tuple)) else str(o)))


def cmd_reduce_cone(args) -> int:
    from .legal import restrict_cone_system

    g = _graph(args.graph)
    m, state = _system(args.system)
    if state is None:
        raise UsageError("system file needs a state line")
    if not 0 <= args.vertex < g.n:
        raise UsageError(f"vertex {args.vertex} out of range")
    h, m2, s2 = restrict_cone_system(g, args.vertex, m, state)
    gtext, stext = formats.format_graph(h), formats.format_system(m2, s2)
    if args.output:
        _write(args.output + ".graph", gtext)
        _write(args.output + ".system", stext)
    _emit(args, "reduce-cone", {"graph": gtext, "system": stext}, gtext + stext)
    return EXIT_OK


def _parse_n(text: str):
    out = []
    for tok in text.replace(",", " ").split():
        if "x" in tok:
            a, b = tok.split("x", 1)
            out.append((int(a), int(b)))
        else:
            out.append(int(tok))
    return out


def _parse_p(text: str) -> list[float]:
    out = []
    for tok in text.replace(",", " ").split():
        if ":" in tok:
            lo, hi, step = (float(x) for x in tok.split(":"))
            k = int(round((hi - lo) / step))
            out += [round(lo + i * step, 10) for i in range(k + 1)]
        else:
            out.append(float(tok))
    return out


def cmd_montecarlo(args) -> int:
    from .random_lab import monte_carlo, plot_rows, rows_to_csv

    if args.seed is None:
        raise UsageError("montecarlo requires --seed")
    try:
        ns, ps = _parse_n(args.n), _parse_p(args.p)
    except ValueError:
        raise UsageError("bad --n or --p list") from None
    rows = monte_carlo(args.model, ns, ps, args.trials, args.seed, threads=args.threads)
    text = rows_to_csv(rows)
    _write(args.output, text)
    result = {"csv": text, "rows": [r.csv_values() for r in rows]}
    if args.plot:
        result["plot"] = plot_rows(rows, args.plot)
    _emit(args, "montecarlo", result, text)
    return EXIT_OK


def cmd_repro(args) -> int:
    from . import repro

    if args.list or not args.example:
        _emit(args, "repro", {"examples": list(repro.REPRODUCTIONS)}, "\n".join(repro.REPRODUCTIONS))
        return EXIT_OK
    ids = list(repro.REPRODUCTIONS) if args.example == "all" else [args.example]
    status = EXIT_OK
    results = []
    lines = []
    for ex in ids:
        res = repro.run(ex)
        if args.update_golden:
            repro.write_golden(res, Path(args.golden_dir) if args.golden_dir else None)
            d = []
        else:
            d = repro.diff(res, repro.load_golden(ex))
        if d:
            status = EXIT_MISMATCH
        results.append({**res, "match": not d, "diff": d})
        lines.append(f"{ex}: {'match' if not d else 'MISMATCH'} ({res['timing']['seconds']} s)")
        lines += ["  " + x for x in d]
    _emit(args, "repro", {"results": results}, "\n".join(lines))
    return status


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="legalsys", description="Legal systems of moves on graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker threads for orbit scans")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("family", parents=[common], help="emit a named graph family")
    s.add_argument("name", nargs="?")
    s.add_argument("--param", action="append", default=[], metavar="K=V")
    s.add_argument("-o", "--output", help="directory for the emitted files")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("verify", parents=[common], help="check the orbit of a start state")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-s", "--system", required=True)
    s.add_argument("--state", help="override the start state (vertex list)")
    s.add_argument("--exhaustive", action="store_true", help="count every illegal state")
    s.add_argument("--strong", action="store_true", help="also count states that are not strongly legal")
    s.add_argument("--cert", help="write the certificate JSON here")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search-state", parents=[common], help="first legal state or a certified none")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("--strong", action="store_true")
    s.set_defaults(func=cmd_search_state)

    s = sub.add_parser("search-system", parents=[common], help="search colored systems")
    s.add_argument("-g", "--graph", required=True)
    grp = s.add_mutually_exclusive_group()
    grp.add_argument("--exhaustive", action="store_true", help="all independent partitions (default)")
    grp.add_argument("--colorings", action="store_true", help="coloring-driven search; never certifies none")
    grp.add_argument("--any", action="store_true", help="any move system, not only colored ones (small graphs)")
    s.add_argument("--budget", type=int, default=10**6)
    s.add_argument("--k-min", type=int)
    s.add_argument("--k-max", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", help="write the found system here")
    s.set_defaults(func=cmd_search_system)

    s = sub.add_parser("curvature", parents=[common], help="exact curvature")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-n", default="2", help="truncation level or 'inf'")
    s.set_defaults(func=cmd_curvature)

    s = sub.add_parser("vf", parents=[common], help="vertex-face incidence graph")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_vf)

    s = sub.add_parser("hamilton", parents=[common], help="Hamiltonian cycle or certified none")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("--budget", type=int, default=10**9)
    s.set_defaults(func=cmd_hamilton)

    s = sub.add_parser("vf-bridge", parents=[common], help="Hamilton cycles <-> strongly legal VF states")
    s.add_argument("-g", "--graph", required=True)
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--to-state", metavar="CYCLE")
    grp.add_argument("--to-cycle", metavar="STATE")
    s.set_defaults(func=cmd_vf_bridge)

    s = sub.add_parser("check", parents=[common], help="reflection-group conditions")
    s.add_argument("-g", "--graph", required=True)
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--pogorelov", action="store_true")
    grp.add_argument("--cusped", action="store_true")
    grp.add_argument("--relhyp", action="store_true")
    grp.add_argument("--tbws", nargs=4, metavar=("A1", "A2", "B1", "B2"))
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("reduce-cone", parents=[common], help="delete a cone on a 4-cycle")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-s", "--system", required=True)
    s.add_argument("-v", "--vertex", type=int, required=True)
    s.add_argument("-o", "--output", help="prefix for the .graph and .system files")
    s.set_defaults(func=cmd_reduce_cone)

    s = sub.add_parser("montecarlo", parents=[common], help="random graph experiment (CSV)")
    s.add_argument("--model", choices=("gnp", "bip"), default="gnp")
    s.add_argument("--n", required=True, help="orders, e.g. '30,50' or '20x25' for bip")
    s.add_argument("--p", required=True, help="probabilities, e.g. '0.1,0.5' or '0.1:0.9:0.1'")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int)
    s.add_argument("-o", "--output", help="write the CSV here")
    s.add_argument("--plot", help="also render success curves to this image file")
    s.set_defaults(func=cmd_montecarlo)

    s = sub.add_parser("repro", parents=[common], help="run a worked example against its golden file")
    s.add_argument("example", nargs="?", help="example id, or 'all'")
    s.add_argument("--list", action="store_true")
    s.add_argument("--update-golden", action="store_true")
    s.add_argument("--golden-dir")
    s.set_defaults(func=cmd_repro)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
