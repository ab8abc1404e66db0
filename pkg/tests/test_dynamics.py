import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hksim import (
    Configuration,
    FriendlinessViolation,
    GraphSchedule,
    NoiseSource,
    SocialGraph,
    StopRule,
    gnp,
    named_graph,
    run,
    step_classical,
    step_nd,
    step_nd_pairwise,
    step_social,
)

from conftest import configurations, random_config


def positions(config):
    return config.positions[:, 0]


class TestStepClassical:
    def test_far_pair_is_fixed(self):
        c = Configuration([0.0, 2.0])
        assert step_classical(c) == c

    def test_triple_consensus_in_one_step(self):
        c = Configuration([0.0, 0.5, 1.0])
        assert positions(step_classical(c)).tolist() == [0.5, 0.5, 0.5]

    def test_chain_contracts(self):
        c = Configuration([0.0, 1.0, 2.0])
        assert positions(step_classical(c)).tolist() == [0.5, 1.0, 1.5]

    @given(configurations(n_max=7))
    def test_convex_hull_containment(self, config):
        x = positions(config)
        after = positions(step_classical(config))
        for i in range(config.n):
            hood = [j for j in range(config.n) if abs(x[j] - x[i]) <= 1.0]
            assert min(x[j] for j in hood) - 1e-9 <= after[i] <= max(x[j] for j in hood) + 1e-9

    @given(configurations(n_max=7))
    def test_order_preserved_in_1d(self, config):
        # exact in real arithmetic; 1e-9 headroom for float rounding
        x = positions(config)
        after = positions(step_classical(config))
        for i in range(config.n):
            for j in range(config.n):
                if x[i] < x[j]:
                    assert after[i] <= after[j] + 1e-9

    @given(st.floats(-50, 50), st.integers(1, 6))
    def test_consensus_is_an_exact_fixed_point(self, value, n):
        c = Configuration([value] * n)
        assert step_classical(c) == c


class TestStepSocial:
    def test_complete_graph_is_bitwise_classical(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            c = random_config(rng, int(rng.integers(1, 9)), d=int(rng.integers(1, 4)))
            a = step_social(c, named_graph("complete", c.n))
            assert np.array_equal(a.positions, step_classical(c).positions)

    def test_path_graph_masks_the_far_pair(self):
        c = Configuration([0.0, 0.5, 1.0])
        after = step_social(c, named_graph("path", 3))
        assert positions(after).tolist() == [0.25, 0.5, 0.75]

    def test_empty_graph_freezes_everything(self):
        c = Configuration([0.0, 0.5, 1.0])
        assert step_social(c, named_graph("empty", 3)) == c

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            step_social(Configuration([0.0]), named_graph("path", 3))

    def test_works_in_two_dimensions(self):
        c = Configuration([[0.0, 0.0], [0.6, 0.8]])  # distance exactly 1
        after = step_social(c, named_graph("complete", 2))
        assert np.allclose(after.positions, [[0.3, 0.4], [0.3, 0.4]])

    def test_consensus_fixed_point(self):
        c = Configuration([[0.25, 0.75]] * 4)
        assert step_social(c, gnp(4, 0.5, 0)) == c

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_convex_hull_containment_2d(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 8))
        c = random_config(rng, n, d=2, spread=2.0)
        g = gnp(n, 0.6, rng)
        x, after = c.positions, step_social(c, g).positions
        adj = g.adjacency | np.eye(n, dtype=bool)
        for i in range(n):
            hood = [
                j for j in range(n)
                if adj[i, j] and np.linalg.norm(x[j] - x[i]) <= 1.0
            ]
            lo, hi = x[hood].min(axis=0), x[hood].max(axis=0)
            assert (after[i] >= lo - 1e-9).all() and (after[i] <= hi + 1e-9).all()


class TestStepNd:
    def test_zero_noise_is_bitwise_classical(self):
        rng = np.random.default_rng(2)
        noise = NoiseSource.zero()
        for t in range(20):
            c = random_config(rng, int(rng.integers(1, 9)))
            assert np.array_equal(step_nd(c, noise, t).positions, step_classical(c).positions)

    def test_two_agents_cross(self):
        # both overshoot the midpoint: 0 + 1.1*0.45 = 0.495, 0.9 - 1.1*0.45 = 0.405
        c = Configuration([0.0, 0.9])
        noise = NoiseSource.from_table(0.1, {(0, 0): 0.1, (0, 1): 0.1})
        after = positions(step_nd(c, noise, 0))
        assert after == pytest.approx([0.495, 0.405], abs=1e-12)
        assert after[0] > after[1]

    def test_single_agent_immune_to_noise(self):
        c = Configuration([3.7])
        noise = NoiseSource.from_table(0.5, {(0, 0): 0.5})
        assert step_nd(c, noise, 0) == c

    def test_rejects_multidimensional(self):
        c = Configuration([[0.0, 0.0], [0.5, 0.5]])
        with pytest.raises(ValueError):
            step_nd(c, NoiseSource.zero(), 0)

    def test_rejects_per_pair_source(self):
        with pytest.raises(ValueError):
            step_nd(Configuration([0.0]), NoiseSource.zero(mode="per-pair"), 0)

    def test_adversarial_out_of_range_rejected(self):
        noise = NoiseSource.adversarial(0.1, lambda t, i, cfg: 0.2)
        with pytest.raises(ValueError):
            step_nd(Configuration([0.0, 0.5]), noise, 0)

    def test_adversarial_sees_full_state(self):
        seen = []
        noise = NoiseSource.adversarial(0.1, lambda t, i, cfg: seen.append((t, i, cfg.n)) or 0.0)
        step_nd(Configuration([0.0, 0.5]), noise, 3)
        assert seen == [(3, 0, 2), (3, 1, 2)]

    @given(st.integers(0, 2**32 - 1), st.integers(2, 8))
    @settings(max_examples=40, deadline=None)
    def test_min_max_monotone_below_critical_eps(self, seed, n):
        rng = np.random.default_rng(seed)
        eps = 0.9 / (n - 1)
        c = random_config(rng, n, spread=float(rng.uniform(0.5, n)))
        noise = NoiseSource.uniform(eps, seed=seed)
        x = positions(c)
        after = positions(step_nd(c, noise, 0))
        assert after.min() >= x.min() - 1e-12
        assert after.max() <= x.max() + 1e-12


class TestStepNdPairwise:
    def test_zero_noise_is_bitwise_classical(self):
        rng = np.random.default_rng(3)
        noise = NoiseSource.zero(mode="per-pair")
        for t in range(20):
            c = random_config(rng, int(rng.integers(1, 9)))
            assert np.array_equal(
                step_nd_pairwise(c, noise, t).positions, step_classical(c).positions
            )

    def test_asymmetric_pair_noise(self):
        # agent 0 pulled by 1.1*(0.8)/2 = 0.44; agent 1 by 0.9*(-0.8)/2 = -0.36
        c = Configuration([0.0, 0.8])
        noise = NoiseSource.from_table(0.1, {(0, 0, 1): 0.1, (0, 1, 0): -0.1}, mode="per-pair")
        after = positions(step_nd_pairwise(c, noise, 0))
        assert after == pytest.approx([0.44, 0.44], abs=1e-12)

    def test_single_agent(self):
        c = Configuration([1.0])
        assert step_nd_pairwise(c, NoiseSource.zero(mode="per-pair"), 0) == c

    def test_can_move_against_classical_direction(self):
        # zero weight on the right neighbor leaves only the leftward pull
        c = Configuration([0.0, 0.5, 1.4])
        noise = NoiseSource.from_table(1.0, {(0, 1, 2): -1.0}, mode="per-pair")
        after = positions(step_nd_pairwise(c, noise, 0))
        classical = positions(step_classical(c))
        assert (after[1] - 0.5) * (classical[1] - 0.5) < 0


class TestNoiseSource:
    def test_validation(self):
        with pytest.raises(ValueError):
            NoiseSource(eps=-0.1)
        with pytest.raises(ValueError):
            NoiseSource(eps=0.1, mode="per-edge")
        with pytest.raises(ValueError):
            NoiseSource(eps=0.1, kind="gaussian")
        with pytest.raises(ValueError):
            NoiseSource(eps=0.1, kind="uniform")  # no seed
        with pytest.raises(ValueError):
            NoiseSource.from_table(0.1, {(0, 0): 0.2})  # exceeds bound

    def test_uniform_values_respect_bound_and_reproduce(self):
        c = Configuration([0.0, 0.5, 1.0])
        a = NoiseSource.uniform(0.25, seed=9)
        b = NoiseSource.uniform(0.25, seed=9)
        for t in (0, 1, 5, 700):  # 700 exercises block regrowth
            va, vb = a.values_for_step(t, c), b.values_for_step(t, c)
            assert np.array_equal(va, vb)
            assert np.all(np.abs(va) <= 0.25)
        assert not np.array_equal(
            a.values_for_step(0, c), NoiseSource.uniform(0.25, seed=10).values_for_step(0, c)
        )

    def test_uniform_block_matches_sequential_stream(self):
        # one (n,) draw per step must equal the block fill used internally
        n, eps, seed = 4, 0.3, (77, 5, 1)
        src = NoiseSource.uniform(eps, seed=seed)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        c = Configuration(np.zeros(n))
        for t in range(40):
            assert np.array_equal(src.values_for_step(t, c), rng.uniform(-eps, eps, n))

    def test_per_pair_uniform_shape(self):
        c = Configuration([0.0, 0.5, 1.0])
        v = NoiseSource.uniform(0.1, seed=1, mode="per-pair").values_for_step(2, c)
        assert v.shape == (3, 3)

    def test_schedule_defaults_to_zero(self):
        c = Configuration([0.0, 0.5])
        src = NoiseSource.from_table(0.5, {(3, 1): 0.25})
        assert np.array_equal(src.values_for_step(0, c), [0.0, 0.0])
        assert np.array_equal(src.values_for_step(3, c), [0.0, 0.25])

    def test_json_round_trip_uses_one_based_agents(self):
        src = NoiseSource.from_table(0.5, {(0, 0): 0.25, (2, 1): -0.5})
        data = json.loads(json.dumps(src.to_json_dict()))
        assert data["values"] == {"0,1": 0.25, "2,2": -0.5}
        back = NoiseSource.from_json_dict(data)
        assert back.table == src.table and back.eps == src.eps

    def test_per_pair_json_keys(self):
        src = NoiseSource.from_table(0.2, {(1, 0, 2): 0.1}, mode="per-pair")
        data = src.to_json_dict()
        assert data["values"] == {"1,1,3": 0.1}
        assert NoiseSource.from_json_dict(data).table == src.table


class TestRun:
    def test_classical_triple_converges_at_one(self):
        traj = run(
            "classical",
            Configuration([0.0, 0.5, 1.0]),
            stop=StopRule(max_steps=5, movement_threshold=1e-6),
        )
        assert traj.stop_reason == "movement"
        assert traj.converged_at == 1
        assert positions(traj.configs[-1]).tolist() == [0.5, 0.5, 0.5]

    def test_fixed_point_converges_at_zero(self):
        traj = run(
            "classical",
            Configuration([0.0, 2.0]),
            stop=StopRule(max_steps=5, movement_threshold=1e-6),
        )
        assert traj.converged_at == 0

    def test_path_demo_geometric_decay_stops_at_19(self):
        # total movement is 2^-(t+1); first below 1e-6 at t = 19
        traj = run(
            "social",
            Configuration([-0.5, 0.0, 0.5]),
            schedule=named_graph("path", 3),
            stop=StopRule(max_steps=100, movement_threshold=1e-6),
        )
        assert traj.converged_at == 19

    def test_nd_zero_noise_equals_classical_trajectory(self):
        x0 = Configuration(np.random.default_rng(4).uniform(0, 5, 12))
        a = run("classical", x0, stop=StopRule(max_steps=30))
        b = run("nd", x0, noise=NoiseSource.zero(), stop=StopRule(max_steps=30))
        for ca, cb in zip(a.configs, b.configs):
            assert np.array_equal(ca.positions, cb.positions)

    def test_max_steps_bookkeeping(self):
        traj = run("classical", Configuration([0.0, 1.0, 2.0]), stop=StopRule(max_steps=7))
        assert traj.steps == 7 and traj.stop_reason == "max_steps"

    def test_cluster_stop(self):
        traj = run(
            "nd",
            Configuration([0.0, 0.5, 5.0]),
            noise=NoiseSource.zero(),
            stop=StopRule(max_steps=50, cluster_rho=1e-9),
        )
        assert traj.stop_reason == "cluster"
        assert traj.clustered_at is not None

    def test_inconsistent_arguments(self):
        c = Configuration([0.0, 1.0])
        with pytest.raises(ValueError):
            run("social", c)  # no schedule
        with pytest.raises(ValueError):
            run("classical", c, schedule=named_graph("path", 2))
        with pytest.raises(ValueError):
            run("nd", c)  # no noise
        with pytest.raises(ValueError):
            run("classical", c, noise=NoiseSource.zero())
        with pytest.raises(ValueError):
            run("nd", Configuration([[0.0, 0.0]]), noise=NoiseSource.zero())
        with pytest.raises(ValueError):
            run("flocking", c)

    def test_social_records_graphs_per_state(self):
        g = named_graph("path", 3)
        traj = run("social", Configuration([0.0, 0.5, 1.0]), schedule=g,
                   stop=StopRule(max_steps=4))
        assert len(traj.graphs) == traj.steps + 1
        assert traj.graph_at(0) == g

    def test_friendliness_violation_aborts(self):
        g0 = SocialGraph.from_edges(2, [(0, 1)])
        schedule = GraphSchedule.sequence([g0, named_graph("empty", 2)], declared_friendly=True)
        with pytest.raises(FriendlinessViolation) as exc:
            run("social", Configuration([0.0, 0.5]), schedule=schedule,
                stop=StopRule(max_steps=5))
        assert exc.value.t == 0 and exc.value.pairs == [(0, 1)]

    def test_friendliness_violation_recorded_when_allowed(self):
        g0 = SocialGraph.from_edges(2, [(0, 1)])
        schedule = GraphSchedule.sequence([g0, named_graph("empty", 2)], declared_friendly=True)
        traj = run("social", Configuration([0.0, 0.5]), schedule=schedule,
                   stop=StopRule(max_steps=3), allow_unfriendly=True)
        assert traj.friendliness_violations == [{"t": 0, "pairs": [(0, 1)]}]

    def test_jsonl_record_count(self, tmp_path):
        traj = run("classical", Configuration([0.0, 0.5, 1.0]), stop=StopRule(max_steps=10))
        out = tmp_path / "t.jsonl"
        traj.write_jsonl(out)
        records = [json.loads(line) for line in out.read_text().splitlines()]
        assert len(records) == traj.steps + 1 <= 11
        assert records[0] == {"t": 0, "positions": [0.0, 0.5, 1.0]}
