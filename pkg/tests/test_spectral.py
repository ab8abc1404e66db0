import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hksim import (
    Configuration,
    check_decrement,
    active_energy,
    communication_graph,
    energy,
    gap_bound,
    gnp,
    named_graph,
    second_eigenvalue,
    spectral_report,
    step_classical,
    step_social,
)
from hksim.core import interaction_mask

from conftest import config_and_graph, random_config


def energy_oracle(config, graph=None):
    """Independent evaluation: 2 Tr(x^T L x) + count of non-interacting pairs.

    L is the Laplacian of the communication graph (self-loops cancel out of
    D - A), which equals the ordered-pair sum of squared edge distances.
    """
    mask = interaction_mask(config, graph).astype(float)
    deg = np.diag(mask.sum(axis=1))
    lap = deg - mask
    x = config.positions
    quad = 2.0 * np.trace(x.T @ lap @ x)
    non_edges = float((mask == 0).sum())
    return quad + non_edges


def lambda_oracle(adj):
    """Generic eigensolver on the row-stochastic matrix itself."""
    deg = adj.sum(axis=1).astype(float)
    p = adj / deg[:, None]
    ev = np.linalg.eigvals(p)
    ev = sorted(ev, key=lambda v: abs(v - 1.0))
    from hksim.core import _component_labels

    count, _ = _component_labels(adj)
    rest = ev[count:]
    return max((abs(v) for v in rest), default=0.0)


class TestEnergy:
    def test_single_agent_is_zero(self):
        assert energy(Configuration([4.2])) == 0.0

    def test_near_pair(self):
        # two ordered active pairs, each 0.25
        assert energy(Configuration([0.0, 0.5]), named_graph("complete", 2)) == 0.5

    def test_far_pair(self):
        # both ordered pairs inactive, 1 each
        assert energy(Configuration([0.0, 3.0]), named_graph("complete", 2)) == 2.0

    def test_range_is_at_most_n_squared_minus_n(self):
        c = Configuration([0.0, 10.0, 20.0, 30.0])
        assert energy(c) == 4 * 4 - 4

    @given(config_and_graph(n_max=7, d=1))
    def test_matches_trace_oracle_1d(self, cg):
        config, graph = cg
        assert energy(config, graph) == pytest.approx(energy_oracle(config, graph), abs=1e-8)

    @given(config_and_graph(n_max=5, d=2))
    def test_matches_trace_oracle_2d(self, cg):
        config, graph = cg
        assert energy(config, graph) == pytest.approx(energy_oracle(config, graph), abs=1e-8)


class TestActiveEnergy:
    def test_far_pair_has_none(self):
        assert active_energy(Configuration([0.0, 3.0]), named_graph("complete", 2)) == 0.0

    def test_near_pair(self):
        assert active_energy(Configuration([0.0, 0.5]), named_graph("complete", 2)) == 0.5

    def test_coincident_agents(self):
        assert active_energy(Configuration([1.0, 1.0, 1.0])) == 0.0

    @given(config_and_graph(n_max=7))
    def test_bounded_by_energy(self, cg):
        config, graph = cg
        act = active_energy(config, graph)
        assert 0.0 <= act <= energy(config, graph) + 1e-12


class TestSecondEigenvalue:
    def test_complete_graph_is_rank_one(self):
        for n in (2, 3, 7):
            cg = communication_graph(Configuration([0.0] * n))
            assert second_eigenvalue(cg) == pytest.approx(0.0, abs=1e-9)

    def test_three_node_path_is_half(self):
        # non-unit block of the characteristic polynomial t^2 - t/3 - 1/12
        # has roots 1/2 and -1/6
        cg = communication_graph(Configuration([0.0, 0.5, 1.0]), named_graph("path", 3))
        assert second_eigenvalue(cg) == pytest.approx(0.5, abs=1e-9)
        roots = np.roots([1.0, -1.0 / 3.0, -1.0 / 12.0])
        assert max(abs(roots)) == pytest.approx(0.5, abs=1e-12)

    def test_isolated_vertices_give_zero(self):
        cg = communication_graph(Configuration([0.0, 5.0]))
        assert second_eigenvalue(cg) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_generic_eigensolver(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        config = random_config(rng, n, spread=float(rng.uniform(1, 2 * n)))
        graph = gnp(n, float(rng.uniform(0, 1)), rng)
        cg = communication_graph(config, graph)
        assert second_eigenvalue(cg) == pytest.approx(lambda_oracle(cg.adjacency), abs=1e-8)


class TestGapBound:
    def test_three_node_path(self):
        cg = communication_graph(Configuration([0.0, 0.5, 1.0]), named_graph("path", 3))
        assert gap_bound(cg) == pytest.approx(17.0 / 18.0, abs=1e-12)

    def test_complete_graph(self):
        for n in (2, 5):
            cg = communication_graph(Configuration([0.0] * n))
            assert gap_bound(cg) == pytest.approx(1.0 - 1.0 / (n * n), abs=1e-12)

    def test_all_singletons(self):
        cg = communication_graph(Configuration([0.0, 5.0, 10.0]))
        assert gap_bound(cg) == 0.0

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_dominates_second_eigenvalue(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 15))
        config = random_config(rng, n, spread=float(rng.uniform(1, n)))
        graph = gnp(n, float(rng.uniform(0, 1)), rng)
        cg = communication_graph(config, graph)
        assert second_eigenvalue(cg) <= gap_bound(cg) + 1e-9


class TestCheckDecrement:
    def test_fixed_point_holds_with_zeros(self):
        c = Configuration([0.7, 0.7, 0.7])
        res = check_decrement(c, step_classical(c))
        assert res.holds and res.lhs == 0.0 and res.rhs == 0.0

    def test_near_pair_holds_with_equality(self):
        c = Configuration([0.0, 0.5])
        res = check_decrement(c, step_classical(c), named_graph("complete", 2))
        assert res.lam == pytest.approx(0.0, abs=1e-9)
        assert res.lhs == pytest.approx(0.5, abs=1e-12)
        assert res.rhs == pytest.approx(0.5, abs=1e-9)
        assert res.holds

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            check_decrement(Configuration([0.0]), Configuration([0.0, 1.0]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_random_social_steps_hold(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        d = int(rng.integers(1, 3))
        config = random_config(rng, n, d=d, spread=float(rng.uniform(1, n)))
        graph = gnp(n, float(rng.uniform(0, 1)), rng)
        res = check_decrement(config, step_social(config, graph), graph)
        assert res.holds

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_energy_monotone_along_runs(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        config = random_config(rng, n, spread=float(rng.uniform(1, n)))
        graph = gnp(n, float(rng.uniform(0, 1)), rng)
        e = energy(config, graph)
        for _ in range(20):
            config = step_social(config, graph)
            e_next = energy(config, graph)
            assert e_next <= e + 1e-9
            e = e_next


class TestSpectralReport:
    def test_fields_and_invariants(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            n = int(rng.integers(2, 12))
            config = random_config(rng, n, spread=float(rng.uniform(1, n)))
            graph = gnp(n, float(rng.uniform(0, 1)), rng)
            rep = spectral_report(config, graph)
            assert rep.energy >= rep.active_energy >= 0.0
            assert 0.0 <= rep.lam <= 1.0
            if rep.diameter >= 1:
                assert rep.lam <= rep.gap_bound + 1e-9
            assert rep.component_count >= 1

    def test_json_keys(self):
        rep = spectral_report(Configuration([0.0, 0.5]))
        data = rep.to_json_dict()
        assert set(data) == {
            "energy", "active_energy", "lambda", "gap_bound", "diameter", "components",
        }
