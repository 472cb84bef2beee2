"""Random graph models, the constructions that find legal systems in them,
and a Monte Carlo harness reporting how often each construction succeeds.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .graph import Graph, induced_connected, is_legal_state, members, popcount, vset
from .legal import (
    LAWFUL_LIMIT,
    MoveSystem,
    antimatching_system,
    basis_from_rows,
    scan_coset,
    validate_system,
    verify_lawful_antimatching,
    verify_legal_orbit,
)
from .matching import greedy_maximal_matching, perfect_antimatching
from .planar import tbws_check

HIGH_EXHAUSTIVE_LIMIT = 20
SPLIT_ATTEMPTS = 5
SPOT_CHECKS = 500
CSV_COLUMNS = ("model", "n1", "n2", "p", "trials", "successes", "case1", "case2", "intermediate", "fail_reasons", "seed")


# ------------------------------------------------------------------ samplers


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"edge probability {p} is outside [0, 1]")


def sample_gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    _check_p(p)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.shape[0]) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def sample_bipartite(n1: int, n2: int, p: float, rng: np.random.Generator) -> Graph:
    """Sides are ``0..n1-1`` and ``n1..n1+n2-1``."""
    _check_p(p)
    keep = rng.random((n1, n2)) < p
    ii, jj = np.nonzero(keep)
    return Graph(n1 + n2, zip(ii.tolist(), (jj + n1).tolist()))


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for one trial, fixed by the master seed and the trial's coordinates."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


# ------------------------------------------------------------------ results


@dataclass
class PipelineResult:
    ok: bool
    method: str
    system: MoveSystem | None = None
    state: int | None = None
    status: str = ""
    reason: str = ""
    certificate: dict = field(default_factory=dict)
    attempts: int = 1

    def to_dict(self) -> dict:
        d = {"ok": self.ok, "method": self.method, "status": self.status, "attempts": self.attempts}
        if self.ok:
            d["state"] = members(self.state)
            d["certificate"] = self.certificate
        else:
            d["reason"] = self.reason
        return d


def _fail(method: str, reason: str, attempts: int = 1, **cert) -> PipelineResult:
    return PipelineResult(False, method, reason=reason, attempts=attempts, certificate=cert)


# ------------------------------------------------------------ intermediate


def _both(g: Graph, pair: tuple[int, int]) -> int:
    """Vertices adjacent to both elements of the pair."""
    return g.adj[pair[0]] & g.adj[pair[1]]


def _auxiliary_connected(g: Graph, side: int, pairs) -> bool:
    """Connectivity of the bipartite graph on ``side`` and ``pairs``; ``u ~ S`` iff ``u`` sees both elements of ``S``."""
    if not side or not pairs:
        return False
    nbrs = [_both(g, s) & side for s in pairs]
    seen_v = 1 << members(side)[0]
    seen_p = 0
    while True:
        grow_p = 0
        for i, nb in enumerate(nbrs):
            if not (seen_p >> i) & 1 and nb & seen_v:
                grow_p |= 1 << i
        grow_v = 0
        for i in members(grow_p):
            grow_v |= nbrs[i]
        grow_v &= ~seen_v
        if not grow_p and not grow_v:
            break
        seen_p |= grow_p
        seen_v |= grow_v
    return seen_v == side and seen_p == (1 << len(pairs)) - 1


def closure_order(g: Graph, pairs, singles: Sequence[int] = ()) -> list[int] | None:
    """An attachment order showing every transversal is connected, or ``None``.

    Starting from one pair, a pair attaches once each of its two vertices
    sees both vertices of some attached pair, and a singleton attaches once
    it sees both vertices of an attached pair. Whatever vertex a transversal
    picks from an attached pair is then adjacent to its pick from an earlier
    one, so the chosen vertices stay connected. Returns the order as indices
    into ``pairs`` followed by ``len(pairs) + j`` for the ``j``-th singleton.
    """
    k = len(pairs)
    both = [_both(g, s) for s in pairs]
    for seed in range(k):
        order = [seed]
        covered = both[seed]  # vertices seeing both ends of some attached pair
        attached = 1 << seed
        grew = True
        while grew:
            grew = False
            for i, (a, b) in enumerate(pairs):
                if not (attached >> i) & 1 and (covered >> a) & 1 and (covered >> b) & 1:
                    attached |= 1 << i
                    covered |= both[i]
                    order.append(i)
                    grew = True
        if attached != (1 << k) - 1:
            continue
        for j, v in enumerate(singles):
            if not (covered >> v) & 1:
                break
            order.append(k + j)
        else:
            return order
    return None


def check_closure(g: Graph, pairs, singles: Sequence[int], order: Sequence[int]) -> bool:
    """Replay an attachment order produced by ``closure_order``."""
    k = len(pairs)
    if sorted(order) != list(range(k + len(singles))) or not order or order[0] >= k:
        return False
    covered = _both(g, pairs[order[0]])
    for idx in order[1:]:
        if idx < k:
            a, b = pairs[idx]
            if not ((covered >> a) & 1 and (covered >> b) & 1):
                return False
            covered |= _both(g, pairs[idx])
        elif not (covered >> singles[idx - k]) & 1:
            return False
    return True


def _split(n: int, attempt: int, rng: np.random.Generator | None, first: int | None = None) -> tuple[int, int]:
    """Two parts of even size covering ``0..n-1`` (``n`` even)."""
    if attempt == 0 and first is not None:
        return first, ((1 << n) - 1) & ~first
    half = n // 2
    if half % 2:
        half += 1
    if attempt == 0 or rng is None:
        order = list(range(n))
    else:
        order = rng.permutation(n).tolist()
    return vset(order[:half]), vset(order[half:])


def intermediate_pipeline(
    g: Graph,
    rng: np.random.Generator | None = None,
    attempts: int = SPLIT_ATTEMPTS,
    threads: int = 1,
    split: int | None = None,
) -> PipelineResult:
    """Lawful perfect antimatching through a split into two even halves.

    For odd order the last vertex is held back and patched in as a singleton
    move. The first split is ``split`` (a vertex mask for ``A``) or else by
    index; later attempts draw a fresh random split from ``rng``.
    """
    n = g.n
    if n < 4:
        return _fail("intermediate", "too few vertices")
    core = g.full
    singles: tuple[int, ...] = ()
    if n % 2:
        singles = (n - 1,)
        core &= ~(1 << (n - 1))
    h, back = g.induced(core)
    reason = ""
    for attempt in range(attempts):
        if split is not None and (popcount(split & core) % 2 or split & ~core):
            raise UsageError("the split must be an even-size subset of the paired vertices")
        first = None if split is None else vset(back.index(v) for v in members(split))
        a, b = _split(h.n, attempt, rng, first)
        found = []
        for side, name in ((a, "A"), (b, "B")):
            sub, idx = h.induced(side)
            am = perfect_antimatching(sub)
            if not am:
                reason = f"no antimatching in {name}"
                break
            found.append(tuple((idx[x], idx[y]) for x, y in am.pairs))
        else:
            ma, mb = found
            if not _auxiliary_connected(h, a, mb) or not _auxiliary_connected(h, b, ma):
                reason = "auxiliary disconnected"
                continue
            if not any(h.adj[v] & b for v in members(a)):
                reason = "no crossing edge"
                continue
            pairs = tuple(sorted((back[x], back[y]) for x, y in ma + mb))
            order = closure_order(g, pairs)
            if order is None:
                reason = "closure incomplete"
                continue
            if singles:
                order = closure_order(g, pairs, singles)
                if order is None:
                    return _fail("intermediate", "leftover vertex not adjacent to both elements of any pair", attempt + 1)
            system = antimatching_system(g, pairs, singles)
            state = vset(x for x, _ in pairs)
            cert = {"pairs": [list(p) for p in pairs], "singles": list(singles), "order": order}
            status = "certified"
            rank = len(pairs) + len(singles)
            if rank <= LAWFUL_LIMIT:
                if singles:
                    ok = verify_legal_orbit(g, system, state, threads=threads).legal
                else:
                    ok = verify_lawful_antimatching(g, pairs, threads=threads)
                if not ok:
                    raise AssertionError("closure certificate accepted an illegal orbit")
                status = "verified"
            return PipelineResult(True, "intermediate", system, state, status, certificate=cert, attempts=attempt + 1)
    return _fail("intermediate", reason, attempts)


# ------------------------------------------------------------ high density


def high_density_pipeline(g: Graph, threads: int = 1, limit: int = HIGH_EXHAUSTIVE_LIMIT) -> PipelineResult:
    """Systems built from the complement: one non-edge, or a maximal matching of non-edges."""
    h = g.complement()
    m = h.num_edges
    if m == 0:
        return _fail("high", "complete graph")
    if g.n < 3:
        return _fail("high", "too few vertices")
    if m == 1:
        v, w = h.edges()[0]
        moves = tuple((1 << v) | (1 << w) if x in (v, w) else 1 << x for x in range(g.n))
        system = MoveSystem(moves)
        # every other vertex sees both v and w, so each side of every state is a star around v or w
        return PipelineResult(True, "case1", system, 1 << v, "verified", certificate={"pairs": [[v, w]]})
    matching = greedy_maximal_matching(h)
    matched = vset(x for e in matching for x in e)
    d_set = g.full & ~matched
    system = antimatching_system(g, matching, members(d_set))
    state = vset(v for v, _ in matching)
    cert = {"pairs": [list(e) for e in matching], "singles": members(d_set)}
    # a vertex of D is cut off from some transversal exactly when every pair meets its non-neighbours
    for d in members(d_set):
        if all(h.adj[d] & ((1 << a) | (1 << b)) for a, b in matching):
            return _fail("case2", "unmatched vertex isolated from some transversal", vertex=d)
    k = len(matching)
    if k <= limit:
        sub, idx = g.induced(matched)
        pos = {v: i for i, v in enumerate(idx)}
        rows = [(1 << pos[a]) | (1 << pos[b]) for a, b in matching]
        s0 = vset(pos[a] for a, _ in matching)
        rep = scan_coset(sub, basis_from_rows(rows), s0, threads=threads)
        if not rep.legal:
            bad = vset(idx[i] for i in members(rep.witness.state))
            return _fail("case2", "disconnected transversal", transversal=members(bad))
        status = "verified"
    else:
        status = "probabilistic"
    return PipelineResult(True, "case2", system, state, status, certificate=cert)


# ---------------------------------------------------------------- bipartite


def bipartite_pipeline(g: Graph, a: int, b: int) -> PipelineResult:
    """Halve each side; the four unions of halves give the orbit of the system ``{A, B}``.

    An odd side keeps its last vertex out of the halves and adds it to the
    start state.
    """
    if a & b or (a | b) != g.full:
        raise UsageError("A and B must partition the vertex set")
    if popcount(a) < 2 or popcount(b) < 2:
        return _fail("bipartite", "side too small")
    extra = 0
    halves = []
    for side in (a, b):
        vs = members(side)
        if len(vs) % 2:
            extra |= 1 << vs[-1]
            vs = vs[:-1]
        h = len(vs) // 2
        halves.append((vset(vs[:h]), vset(vs[h:])))
    (a1, a2), (b1, b2) = halves
    core = g.full & ~extra
    sub, idx = g.induced(core)
    pos = {v: i for i, v in enumerate(idx)}

    def local(x):
        return vset(pos[v] for v in members(x))

    tb = tbws_check(sub, local(a1), local(a2), local(b1), local(b2))
    if not tb.ok:
        kind, i, j, v = tb.failures[0]
        return _fail("bipartite", f"A{i}+B{j} fails the {kind} condition", witness=idx[v])
    for i, ai in enumerate((a1, a2), 1):
        for j, bj in enumerate((b1, b2), 1):
            if not induced_connected(g, ai | bj):
                return _fail("bipartite", f"A{i}+B{j} disconnected")
    system = MoveSystem(tuple(a if (a >> v) & 1 else b for v in range(g.n)))
    state = a1 | b1 | extra
    rep = verify_legal_orbit(g, system, state)
    if not rep.legal:
        return _fail("bipartite", "leftover vertex not attached", state=members(rep.witness.state))
    cert = {"halves": [members(x) for x in (a1, a2, b1, b2)], "extra": members(extra)}
    return PipelineResult(True, "bipartite", system, state, "verified", certificate=cert)


# ------------------------------------------------------------- re-checking


def recheck(g: Graph, res: PipelineResult, rng: np.random.Generator | None = None, samples: int = SPOT_CHECKS) -> bool:
    """Re-verify a successful result from its certificate alone.

    The system must satisfy the move properties; certified results replay
    their attachment order; every result is spot-checked on random orbit
    states (up to ``samples`` of them) when the orbit is too large to walk.
    """
    if not res.ok:
        return False
    if validate_system(g, res.system):
        return False
    cert = res.certificate
    if res.method == "intermediate":
        pairs = [tuple(p) for p in cert["pairs"]]
        if not check_closure(g, pairs, cert["singles"], cert["order"]):
            return False
    rng = rng if rng is not None else np.random.default_rng(0)
    basis = basis_from_rows([mv for _, mv in res.system.distinct()])
    if basis.rank <= 16:
        return verify_legal_orbit(g, res.system, res.state).legal
    rows = basis.rows
    for _ in range(samples):
        coef = rng.integers(0, 2, len(rows))
        s = res.state
        for bit, row in zip(coef.tolist(), rows):
            if bit:
                s ^= row
        if not is_legal_state(g, s):
            return False
    return True


# ------------------------------------------------------------ Monte Carlo


@dataclass
class ExperimentRow:
    model: str
    n1: int
    n2: int
    p: float
    trials: int
    successes: int
    case1: int
    case2: int
    intermediate: int
    fail_reasons: dict
    seed: int
    retries: int = 0
    rechecked: int = 0
    wall_time: float = 0.0

    def csv_values(self) -> list:
        return [
            self.model,
            self.n1,
            self.n2,
            repr(float(self.p)),
            self.trials,
            self.successes,
            self.case1,
            self.case2,
            self.intermediate,
            json.dumps(self.fail_reasons, sort_keys=True, separators=(",", ":")),
            self.seed,
        ]


def run_trial(model: str, n1: int, n2: int, p: float, seed: int, cell: int, trial: int, recheck_results: bool = True):
    rng = trial_rng(seed, cell, trial)
    if model == "gnp":
        g = sample_gnp(n1, p, rng)
        res = intermediate_pipeline(g, rng)
        if not res.ok:
            first = res.reason
            res = high_density_pipeline(g)
            if not res.ok:
                res.reason = f"{first}; {res.reason}"
    elif model == "bip":
        g = sample_bipartite(n1, n2, p, rng)
        res = bipartite_pipeline(g, (1 << n1) - 1, g.full & ~((1 << n1) - 1))
    else:
        raise UsageError(f"unknown model {model!r}")
    ok = recheck(g, res, rng) if (res.ok and recheck_results) else None
    return res, ok


def monte_carlo(
    model: str,
    ns: Sequence,
    ps: Sequence[float],
    trials: int,
    seed: int,
    threads: int = 1,
) -> list[ExperimentRow]:
    """Success counts per grid cell; identical for any ``threads`` value.

    ``ns`` holds ints for ``gnp`` and ints or ``(n1, n2)`` pairs for ``bip``.
    """
    if trials < 1:
        raise UsageError("trials must be at least 1")
    rows = []
    cells = [(n, p) for n in ns for p in ps]
    for ci, (n, p) in enumerate(cells):
        _check_p(p)
        n1, n2 = n if isinstance(n, tuple) else (n, n if model == "bip" else 0)
        t0 = time.perf_counter()
        jobs = [(model, n1, n2, p, seed, ci, t) for t in range(trials)]
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                results = list(ex.map(lambda args: run_trial(*args), jobs))
        else:
            results = [run_trial(*args) for args in jobs]
        tally: Counter = Counter()
        reasons: Counter = Counter()
        retries = rechecked = 0
        for res, ok in results:
            if res.ok:
                tally[res.method] += 1
                retries += res.attempts - 1
                if ok:
                    rechecked += 1
                elif ok is False:
                    raise AssertionError(f"trial result failed its re-check at n={n}, p={p}")
            else:
                reasons[res.reason] += 1
        rows.append(
            ExperimentRow(
                model,
                n1,
                n2,
                p,
                trials,
                sum(tally.values()),
                tally["case1"],
                tally["case2"],
                tally["intermediate"],
                dict(sorted(reasons.items())),
                seed,
                retries,
                rechecked,
                time.perf_counter() - t0,
            )
        )
    return rows


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_values())
    return buf.getvalue()


def thresholds(n: int) -> dict[str, float]:
    """Reference edge probabilities for annotating success curves (growth terms dropped)."""
    log = math.log(n)
    return {
        "antimatching lower": math.sqrt(2 * log / n),
        "antimatching upper": 1 - 2 * log / n,
        "min degree two": (log + math.log(log)) / n if n > 2 else 0.0,
        "bipartite lower": 2 * log / n,
    }


def plot_rows(rows: Sequence[ExperimentRow], path: str) -> str:
    """Success rate against ``p`` for each order, with reference thresholds."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    by_n: dict[tuple[int, int], list[ExperimentRow]] = {}
    for r in rows:
        by_n.setdefault((r.n1, r.n2), []).append(r)
    for (n1, n2), rs in sorted(by_n.items()):
        rs = sorted(rs, key=lambda r: r.p)
        label = f"n={n1}" if rs[0].model == "gnp" else f"n={n1},{n2}"
        line = ax.plot([r.p for r in rs], [r.successes / r.trials for r in rs], marker="o", label=label)[0]
        keys = ("antimatching lower", "min degree two") if rs[0].model == "gnp" else ("bipartite lower",)
        for key, style in zip(keys, ("--", ":")):
            x = thresholds(n1)[key]
            if 0 < x < 1:
                ax.axvline(x, color=line.get_color(), linestyle=style, linewidth=0.8)
    ax.set_xlabel("p")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
