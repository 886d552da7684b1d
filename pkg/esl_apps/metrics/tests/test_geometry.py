import numpy as np
import pytest

from esl_apps.agents.models.policy import PolicySnapshot, PolicyTrace
from esl_apps.core.exceptions import ConfigError, UsageError
from esl_apps.core.factories import DistanceBackendFactory, RandomMdpFactory, random_policy
from esl_apps.mdp.services.planning import value_iteration
from esl_apps.metrics.models.backend import DistanceBackend
from esl_apps.metrics.services.bounds import performance_difference_gap, regret_analogue
from esl_apps.metrics.services.geometry import resolve_reference, trajectory_geometry
from esl_apps.metrics.services.indices import index_report
from esl_apps.transport.models.metric import GroundMetric


def make_trace(policies, algorithm_id="test"):
    snapshots = [PolicySnapshot(probs=p.probs, update_index=k) for k, p in enumerate(policies)]
    return PolicyTrace(snapshots=snapshots, algorithm_id=algorithm_id, seed=0)


def all_up(mdp):
    return PolicySnapshot.from_actions(np.zeros(mdp.n_states, dtype=int), mdp.n_actions)


class TestResolveReference:
    def test_optimal_final_policy_is_its_own_reference(self, grid_mdp):
        optimal, _ = value_iteration(grid_mdp)
        reference, source = resolve_reference(grid_mdp, make_trace([all_up(grid_mdp), optimal]))
        assert source == "final_policy_optimal"
        assert reference.same_policy(optimal)

    def test_suboptimal_final_policy_uses_value_iteration(self, grid_mdp):
        _, source = resolve_reference(grid_mdp, make_trace([all_up(grid_mdp), all_up(grid_mdp)]))
        assert source == "value_iteration"

    def test_final_policy_mode(self, grid_mdp):
        trace = make_trace([all_up(grid_mdp), all_up(grid_mdp)])
        reference, source = resolve_reference(grid_mdp, trace, "final_policy")
        assert reference is trace.final
        assert source == "final_policy"

    def test_unknown_mode(self, grid_mdp):
        with pytest.raises(UsageError):
            resolve_reference(grid_mdp, make_trace([all_up(grid_mdp)]), "best")


class TestTrajectoryGeometry:
    def test_identical_snapshots_have_zero_steps(self, grid_mdp):
        geo = trajectory_geometry(make_trace([all_up(grid_mdp)] * 3), grid_mdp)
        np.testing.assert_array_equal(geo.stepwise, [0.0, 0.0])
        assert geo.to_reference[0] > 0
        assert len(set(geo.to_reference)) == 1
        report = index_report(geo)
        assert report.esl == 0.0
        assert report.eta_sub is None

    def test_single_update_is_a_straight_line(self, grid_mdp):
        optimal, _ = value_iteration(grid_mdp)
        geo = trajectory_geometry(make_trace([all_up(grid_mdp), optimal]), grid_mdp)
        assert geo.stepwise[0] == pytest.approx(geo.to_reference[0])
        assert geo.to_reference[-1] == 0.0
        assert index_report(geo).esl == pytest.approx(1.0)

    def test_reference_distances_are_one_lipschitz(self, grid_mdp, rng):
        trace = make_trace([random_policy(grid_mdp.n_states, grid_mdp.n_actions, rng) for _ in range(5)])
        geo = trajectory_geometry(trace, grid_mdp)
        gaps = np.abs(np.diff(geo.to_reference))
        assert (gaps <= geo.stepwise + 1e-9).all()
        assert geo.path_length >= geo.endpoint_distance - 1e-9

    def test_sampled_backends_need_a_stream(self, grid_mdp):
        backend = DistanceBackendFactory(kind="empirical_w1")
        with pytest.raises(UsageError):
            trajectory_geometry(make_trace([all_up(grid_mdp)] * 2), grid_mdp, backend=backend)

    @pytest.mark.parametrize("kind", ["empirical_w1", "otdd"])
    def test_sampled_backends_follow_exact_distances(self, slip_mdp, kind):
        optimal, _ = value_iteration(slip_mdp)
        trace = make_trace([all_up(slip_mdp), optimal])
        exact = trajectory_geometry(trace, slip_mdp)
        sampled = trajectory_geometry(
            trace,
            slip_mdp,
            backend=DistanceBackendFactory(kind=kind, rollouts=300),
            rng=np.random.default_rng(3),
        )
        assert sampled.backend.startswith(kind)
        assert sampled.stepwise[0] > 0
        if kind == "empirical_w1":
            assert sampled.stepwise[0] == pytest.approx(exact.stepwise[0], rel=0.35)

    def test_needs_two_snapshots(self, grid_mdp):
        with pytest.raises(UsageError):
            trajectory_geometry(make_trace([all_up(grid_mdp)]), grid_mdp)


class TestBounds:
    def test_performance_difference_on_random_pairs(self, grid_mdp, rng):
        metric = GroundMetric.for_mdp(grid_mdp)
        for _ in range(20):
            left = random_policy(grid_mdp.n_states, grid_mdp.n_actions, rng)
            right = random_policy(grid_mdp.n_states, grid_mdp.n_actions, rng)
            assert performance_difference_gap(grid_mdp, left, right, metric) >= -1e-9

    def test_performance_difference_on_random_mdps(self, rng):
        for seed in range(5):
            mdp = RandomMdpFactory(seed=seed, n_states=6, n_actions=3)
            left = random_policy(6, 3, rng)
            right = random_policy(6, 3, rng)
            assert performance_difference_gap(mdp, left, right) >= -1e-9

    def test_regret_analogue_on_random_traces(self, grid_mdp, rng):
        optimal, _ = value_iteration(grid_mdp)
        for _ in range(3):
            policies = [random_policy(grid_mdp.n_states, grid_mdp.n_actions, rng) for _ in range(4)]
            geo = trajectory_geometry(make_trace(policies + [optimal]), grid_mdp)
            lhs, rhs = regret_analogue(geo, grid_mdp)
            assert lhs >= 0
            assert lhs <= rhs + 1e-9
            report = index_report(geo, grid_mdp)
            assert report.regret_analogue == pytest.approx(rhs - lhs)

    def test_regret_analogue_needs_an_optimal_reference(self, grid_mdp):
        trace = make_trace([all_up(grid_mdp)] * 2)
        geo = trajectory_geometry(trace, grid_mdp, reference_mode="final_policy")
        with pytest.raises(UsageError):
            regret_analogue(geo, grid_mdp)
        assert index_report(geo, grid_mdp).regret_lhs is None


class TestDistanceBackend:
    @pytest.mark.parametrize(
        "kwargs, key",
        [
            ({"kind": "w2"}, "backend"),
            ({"rollouts": 0}, "rollouts"),
            ({"cap": -1}, "rollout_cap"),
            ({"action_scale": -0.5}, "action_scale"),
        ],
    )
    def test_invalid_settings(self, kwargs, key):
        with pytest.raises(ConfigError) as excinfo:
            DistanceBackend(**kwargs)
        assert excinfo.value.key == key

    def test_labels(self):
        assert DistanceBackend().label == "exact_w1"
        assert DistanceBackend(kind="otdd", rollouts=9).label == "otdd(M=9,T=max_steps)"
        assert DistanceBackend(kind="empirical_w1", rollouts=3, cap=20).label == "empirical_w1(M=3,T=20)"
