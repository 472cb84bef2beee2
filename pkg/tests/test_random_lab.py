from __future__ import annotations

import csv
import io
import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from legalsys.errors import UsageError
from legalsys.graph import Graph, is_legal_state, vset
from legalsys.legal import validate_system, verify_legal_orbit
from legalsys.random_lab import (
    CSV_COLUMNS,
    bipartite_pipeline,
    check_closure,
    high_density_pipeline,
    intermediate_pipeline,
    monte_carlo,
    plot_rows,
    recheck,
    rows_to_csv,
    sample_bipartite,
    sample_gnp,
    thresholds,
    trial_rng,
)


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def transversals_legal(g: Graph, pairs, singles=()) -> bool:
    for pick in itertools.product(*pairs):
        base = vset(pick)
        for extra in itertools.product((0, 1), repeat=len(singles)):
            s = base | vset(v for v, e in zip(singles, extra) if e)
            if not oracles.legal(g, s):
                return False
    return True


class TestSamplers:
    def test_extremes(self):
        rng = trial_rng(1)
        assert sample_gnp(10, 0.0, rng).num_edges == 0
        assert sample_gnp(10, 1.0, rng).num_edges == 45
        assert sample_bipartite(3, 4, 0.0, rng).num_edges == 0
        g = sample_bipartite(3, 4, 1.0, rng)
        assert g.num_edges == 12
        assert all(not g.has_edge(u, v) for u, v in itertools.combinations(range(3), 2))

    def test_edge_count_binomial(self):
        g = sample_gnp(100, 0.5, trial_rng(12345))
        mean = 4950 * 0.5
        sigma = math.sqrt(4950 * 0.25)
        assert abs(g.num_edges - mean) <= 4 * sigma

    def test_bad_p(self):
        with pytest.raises(UsageError):
            sample_gnp(5, 1.5, trial_rng(0))

    @given(st.integers(0, 2**63 - 1), st.integers(0, 50), st.integers(0, 50))
    @settings(max_examples=25)
    def test_streams_reproducible(self, seed, cell, trial):
        a = sample_gnp(20, 0.3, trial_rng(seed, cell, trial))
        b = sample_gnp(20, 0.3, trial_rng(seed, cell, trial))
        assert a == b

    def test_streams_differ(self):
        assert sample_gnp(30, 0.5, trial_rng(5, 0, 0)) != sample_gnp(30, 0.5, trial_rng(5, 0, 1))


class TestIntermediate:
    def test_crown_graph(self):
        # K_{6,6} minus a perfect matching, split along the sides
        g = Graph(12, [(i, 6 + j) for i in range(6) for j in range(6) if i != j])
        res = intermediate_pipeline(g, split=vset(range(6)))
        assert res.ok and res.status == "verified"
        assert transversals_legal(g, res.certificate["pairs"])

    def test_edgeless(self):
        res = intermediate_pipeline(Graph(10), trial_rng(0))
        assert not res.ok and res.reason == "auxiliary disconnected"

    def test_odd_singleton_patch(self):
        g = sample_gnp(15, 0.9, trial_rng(390, 0))
        res = intermediate_pipeline(g, trial_rng(390, 1))
        assert res.ok and res.status == "verified"
        assert res.certificate["singles"] == [14]
        assert verify_legal_orbit(g, res.system, res.state, exhaustive=True).legal

    def test_bad_split(self):
        with pytest.raises(UsageError):
            intermediate_pipeline(complete(8), split=0b111)

    @given(oracles.graphs(4, 12, p=0.6), st.integers(0, 1000))
    @settings(max_examples=80)
    def test_success_is_sound(self, g, seed):
        res = intermediate_pipeline(g, trial_rng(seed))
        if not res.ok:
            return
        assert validate_system(g, res.system) == []
        pairs = [tuple(p) for p in res.certificate["pairs"]]
        singles = res.certificate["singles"]
        assert transversals_legal(g, pairs, singles)
        assert check_closure(g, pairs, singles, res.certificate["order"])
        assert recheck(g, res)

    def test_large_spot_checks(self):
        rng = trial_rng(77, 1)
        g = sample_gnp(60, 0.5, rng)
        res = intermediate_pipeline(g, rng)
        assert res.ok and res.status == "certified"
        basis_rows = [(1 << a) | (1 << b) for a, b in res.certificate["pairs"]]
        for _ in range(500):
            coef = rng.integers(0, 2, len(basis_rows))
            s = res.state
            for bit, row in zip(coef.tolist(), basis_rows):
                if bit:
                    s ^= row
            assert is_legal_state(g, s)

    def test_tampered_certificate_rejected(self):
        g = sample_gnp(15, 0.9, trial_rng(390, 0))
        res = intermediate_pipeline(g, trial_rng(390, 1))
        res.certificate["order"] = list(reversed(res.certificate["order"]))
        assert not recheck(g, res)


class TestHighDensity:
    @pytest.mark.parametrize("n", range(3, 10))
    def test_case1(self, n):
        g = Graph(n, [e for e in itertools.combinations(range(n), 2) if e != (0, 1)])
        res = high_density_pipeline(g)
        assert res.ok and res.method == "case1"
        assert verify_legal_orbit(g, res.system, res.state, exhaustive=True).legal

    def test_case2(self):
        g = Graph(8, [(u, v) for u, v in itertools.combinations(range(8), 2) if v != u + 4])
        res = high_density_pipeline(g)
        assert res.ok and res.method == "case2" and res.status == "verified"
        assert len(res.certificate["pairs"]) == 4
        assert verify_legal_orbit(g, res.system, res.state, exhaustive=True).legal

    def test_complete(self):
        res = high_density_pipeline(complete(6))
        assert not res.ok and res.reason == "complete graph"

    def test_probabilistic_status(self):
        g = Graph(44, [(u, v) for u, v in itertools.combinations(range(44), 2) if v != u + 22])
        res = high_density_pipeline(g, limit=20)
        assert res.ok and res.status == "probabilistic"
        assert recheck(g, res)

    @given(oracles.graphs(3, 11, p=0.85))
    @settings(max_examples=80)
    def test_success_is_sound(self, g):
        res = high_density_pipeline(g)
        if not res.ok:
            return
        assert validate_system(g, res.system) == []
        orbit = oracles.orbit(res.system.moves, res.state)
        assert all(oracles.legal(g, s) for s in orbit)


class TestBipartite:
    def test_complete_bipartite(self):
        g = Graph(10, [(i, j) for i in range(5) for j in range(5, 10)])
        res = bipartite_pipeline(g, 0b11111, 0b11111 << 5)
        assert res.ok
        assert verify_legal_orbit(g, res.system, res.state).legal

    def test_sampled(self):
        g = sample_bipartite(20, 20, 0.5, trial_rng(2024))
        res = bipartite_pipeline(g, (1 << 20) - 1, ((1 << 20) - 1) << 20)
        assert res.ok and res.status == "verified"

    def test_empty(self):
        g = sample_bipartite(6, 6, 0.0, trial_rng(1))
        assert not bipartite_pipeline(g, 0b111111, 0b111111 << 6).ok

    def test_not_partition(self):
        with pytest.raises(UsageError):
            bipartite_pipeline(Graph(4), 0b11, 0b11)

    @given(st.integers(2, 7), st.integers(2, 7), st.floats(0.3, 1.0), st.integers(0, 10**6))
    @settings(max_examples=80)
    def test_success_is_sound(self, n1, n2, p, seed):
        g = sample_bipartite(n1, n2, p, trial_rng(seed))
        a = (1 << n1) - 1
        res = bipartite_pipeline(g, a, g.full & ~a)
        if res.ok:
            orbit = oracles.orbit(res.system.moves, res.state)
            assert len(orbit) == 4
            assert all(oracles.legal(g, s) for s in orbit)


class TestMonteCarlo:
    def test_thread_independent(self):
        a = rows_to_csv(monte_carlo("gnp", [16, 21], [0.3, 0.7], 12, seed=9, threads=1))
        b = rows_to_csv(monte_carlo("gnp", [16, 21], [0.3, 0.7], 12, seed=9, threads=6))
        assert a == b

    def test_bip_thread_independent(self):
        a = rows_to_csv(monte_carlo("bip", [(8, 9)], [0.5], 10, seed=3, threads=1))
        b = rows_to_csv(monte_carlo("bip", [(8, 9)], [0.5], 10, seed=3, threads=4))
        assert a == b

    def test_complete_graphs_fail(self):
        (row,) = monte_carlo("gnp", [12], [1.0], 5, seed=1)
        assert row.successes == 0
        assert all("complete graph" in k for k in row.fail_reasons)

    def test_csv_format(self):
        rows = monte_carlo("gnp", [30], [0.1, 0.3, 0.5, 0.7, 0.9], 4, seed=11)
        text = rows_to_csv(rows)
        parsed = list(csv.reader(io.StringIO(text)))
        assert tuple(parsed[0]) == CSV_COLUMNS
        assert len(parsed) == 6
        for line in parsed[1:]:
            rec = dict(zip(CSV_COLUMNS, line))
            assert int(rec["successes"]) <= int(rec["trials"])
            assert int(rec["case1"]) + int(rec["case2"]) + int(rec["intermediate"]) == int(rec["successes"])
            assert isinstance(json.loads(rec["fail_reasons"]), dict)
            assert rec["seed"] == "11"

    def test_rejects_zero_trials(self):
        with pytest.raises(UsageError):
            monte_carlo("gnp", [10], [0.5], 0, seed=1)

    def test_unknown_model(self):
        with pytest.raises(UsageError):
            monte_carlo("regular", [10], [0.5], 1, seed=1)

    def test_plot(self, tmp_path):
        rows = monte_carlo("gnp", [20], [0.3, 0.6], 3, seed=2)
        out = plot_rows(rows, str(tmp_path / "curve.png"))
        assert (tmp_path / "curve.png").stat().st_size > 0
        assert out.endswith("curve.png")

    def test_thresholds_ordered(self):
        t = thresholds(100)
        assert 0 < t["antimatching lower"] < t["antimatching upper"] < 1


def test_numpy_generator_type():
    assert isinstance(trial_rng(1, 2, 3), np.random.Generator)
