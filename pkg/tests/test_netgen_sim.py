import numpy as np
import pytest

from pairnet import degree_model as dm, netgen_sim as ns
from pairnet.degree_model import EpidemicParams


def assert_simple(graph):
    """No self-loops, no repeated neighbors, symmetric adjacency."""
    edge_set = set()
    for u in range(graph.N):
        nb = graph.neighbors(u)
        assert np.all(nb != u)
        assert len(set(nb.tolist())) == nb.size
        for v in nb.tolist():
            edge_set.add((u, v))
    for u, v in edge_set:
        assert (v, u) in edge_set


class TestConfigurationGraph:
    def test_degree_sequence_preserved(self):
        seq = dm.sample_degree_sequence(dm.make_bimodal(5, 35, 0.5), 500)
        g = ns.build_configuration_graph(seq, seed=1)
        assert sorted(g.degrees.tolist()) == sorted(seq)
        assert_simple(g)

    def test_powerlaw_sequence(self):
        seq = dm.sample_degree_sequence(
            dm.make_truncated_powerlaw(5, 30, 2.0), 400)
        g = ns.build_configuration_graph(seq, seed=7)
        assert sorted(g.degrees.tolist()) == sorted(seq)
        assert_simple(g)
        assert g.n_edges == sum(seq) // 2

    def test_deterministic_given_seed(self):
        seq = dm.sample_degree_sequence(dm.make_bimodal(5, 35, 0.5), 200)
        a = ns.build_configuration_graph(seq, seed=3)
        b = ns.build_configuration_graph(seq, seed=3)
        np.testing.assert_array_equal(a.indices, b.indices)
        c = ns.build_configuration_graph(seq, seed=4)
        assert not np.array_equal(a.indices, c.indices)

    def test_rejects_odd_stub_sum(self):
        with pytest.raises(ValueError):
            ns.build_configuration_graph([3, 3, 3], seed=0)

    def test_rejects_degree_at_least_N(self):
        with pytest.raises(ValueError):
            ns.build_configuration_graph([4, 2, 1, 1], seed=0)

    def test_complete_graph_corner(self):
        g = ns.build_configuration_graph([3, 3, 3, 3], seed=0)
        for u in range(4):
            assert sorted(g.neighbors(u).tolist()) == \
                [v for v in range(4) if v != u]


class TestRecountPairs:
    def test_path_graph(self):
        # Path 0-1-2 with node 1 infected.
        g = ns.build_configuration_graph([1, 2, 1], seed=0)
        SI, SS, II = ns.recount_pairs(g, [0, 1, 0])
        assert (SI, SS, II) == (2, 0, 0)
        SI, SS, II = ns.recount_pairs(g, [1, 1, 0])
        assert (SI, SS, II) == (1, 0, 2)

    def test_totals(self):
        seq = dm.sample_degree_sequence(dm.make_bimodal(5, 35, 0.5), 300)
        g = ns.build_configuration_graph(seq, seed=5)
        rng = np.random.default_rng(0)
        state = (rng.random(g.N) < 0.3).astype(np.int8)
        SI, SS, II = ns.recount_pairs(g, state)
        assert SS + 2 * SI + II == 2 * g.n_edges


class TestGillespie:
    def test_counts_consistent_with_audit(self):
        seq = dm.sample_degree_sequence(dm.make_bimodal(5, 35, 0.5), 300)
        g = ns.build_configuration_graph(seq, seed=2)
        params = EpidemicParams(tau=0.1, gamma=1.0, N=g.N)
        grid = np.linspace(0.0, 5.0, 41)
        # audit_points forces from-scratch pair recounts inside the core;
        # gillespie_sis raises if the incremental counts ever disagree.
        res = ns.gillespie_sis(g, params, range(10), 5.0, grid, seed=9,
                               audit_points=grid.size)
        assert np.all(res.S + res.I == g.N)
        assert np.all(res.SS + 2 * res.SI + res.II == 2 * g.n_edges)

    def test_deterministic_given_seed(self):
        seq = dm.sample_degree_sequence(dm.make_bimodal(5, 35, 0.5), 200)
        g = ns.build_configuration_graph(seq, seed=2)
        params = EpidemicParams(tau=0.1, gamma=1.0, N=g.N)
        grid = np.linspace(0.0, 5.0, 21)
        a = ns.gillespie_sis(g, params, range(5), 5.0, grid, seed=11)
        b = ns.gillespie_sis(g, params, range(5), 5.0, grid, seed=11)
        np.testing.assert_array_equal(a.I, b.I)
        np.testing.assert_array_equal(a.SI, b.SI)

    def test_zero_tau_is_pure_death(self):
        seq = dm.sample_degree_sequence(dm.make_regular(4), 200)
        g = ns.build_configuration_graph(seq, seed=3)
        params = EpidemicParams(tau=0.0, gamma=1.0, N=g.N)
        grid = np.linspace(0.0, 10.0, 11)
        res = ns.gillespie_sis(g, params, range(50), 10.0, grid, seed=1)
        assert np.all(np.diff(res.I) <= 0)
        assert res.I[-1] == 0.0

    def test_absorbing_state(self):
        seq = dm.sample_degree_sequence(dm.make_regular(4), 100)
        g = ns.build_configuration_graph(seq, seed=3)
        params = EpidemicParams(tau=0.5, gamma=1.0, N=g.N)
        grid = np.linspace(0.0, 5.0, 6)
        res = ns.gillespie_sis(g, params, [], 5.0, grid, seed=1)
        np.testing.assert_array_equal(res.I, 0.0)
        np.testing.assert_array_equal(res.S, float(g.N))

    def test_event_log_replays_to_final_state(self):
        seq = dm.sample_degree_sequence(dm.make_bimodal(5, 35, 0.5), 200)
        g = ns.build_configuration_graph(seq, seed=4)
        params = EpidemicParams(tau=0.1, gamma=1.0, N=g.N)
        grid = np.linspace(0.0, 3.0, 4)
        res = ns.gillespie_sis(g, params, range(10), 3.0, grid, seed=13,
                               record_events=True)
        # Sampled counts are snapshots before the next event, so the events
        # recorded up to the grid horizon must account for I exactly.
        replayed = [e for e in res.events if e[0] <= grid[-1]]
        flips = sum(1 if k == "S->I" else -1 for _, _, k in replayed)
        assert res.I[-1] == 10 + flips
        times = [e[0] for e in res.events]
        assert times == sorted(times)


class TestEnsemble:
    def test_zero_tau_matches_exponential_decay(self):
        dist = dm.make_regular(4)
        params = EpidemicParams(tau=0.0, gamma=1.0, N=500)
        grid = np.linspace(0.0, 3.0, 7)
        res = ns.ensemble(dist, params, 0.1, 3.0, grid, runs=100, seed=21)
        expected = 50.0 * np.exp(-grid)
        se = res.std_I / np.sqrt(res.runs)
        assert np.all(np.abs(res.I - expected) <= 4.0 * np.maximum(se, 1.0))

    def test_reproducible(self):
        dist = dm.make_bimodal(5, 35, 0.5)
        params = EpidemicParams(tau=0.05, gamma=1.0, N=200)
        grid = np.linspace(0.0, 2.0, 5)
        a = ns.ensemble(dist, params, 0.05, 2.0, grid, runs=5, seed=8)
        b = ns.ensemble(dist, params, 0.05, 2.0, grid, runs=5, seed=8)
        np.testing.assert_array_equal(a.I, b.I)
        np.testing.assert_array_equal(a.std_I, b.std_I)

    def test_shared_graph_mode(self):
        dist = dm.make_bimodal(5, 35, 0.5)
        params = EpidemicParams(tau=0.05, gamma=1.0, N=200)
        grid = np.linspace(0.0, 1.0, 3)
        res = ns.ensemble(dist, params, 0.05, 1.0, grid, runs=3, seed=8,
                          fresh_graph_per_run=False)
        assert res.runs == 3

    def test_condition_on_survival_reports_exclusions(self):
        # Tiny seed count and tau=0 guarantee extinction, so every run is
        # extinct at the survival checkpoint; the full set is then kept.
        dist = dm.make_regular(4)
        params = EpidemicParams(tau=0.0, gamma=5.0, N=100)
        grid = np.linspace(0.0, 10.0, 11)
        res = ns.ensemble(dist, params, 0.01, 10.0, grid, runs=10, seed=3,
                          condition_on_survival=True)
        assert res.excluded == 10
        assert res.runs == 10

    def test_rejects_zero_runs(self):
        dist = dm.make_regular(4)
        params = EpidemicParams(tau=0.1, gamma=1.0, N=100)
        with pytest.raises(ValueError):
            ns.ensemble(dist, params, 0.1, 1.0, [0.0, 1.0], runs=0)
