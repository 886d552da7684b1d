import numpy as np
import pytest

from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.core.exceptions import ConstructionError, UsageError
from esl_apps.mdp.models.rollout import Rollout, Step
from esl_apps.mdp.services.dynamics import rollouts
from esl_apps.occupancy.models.dataset import PolicyDataset
from esl_apps.occupancy.services.empirical import (
    dataset_from_occupancy,
    dataset_from_rollouts,
    empirical_occupancy,
)
from esl_apps.occupancy.services.exact import exact_discounted_occupancy


@pytest.fixture
def chain_episode():
    return Rollout(steps=(Step(0, 1, 0.0, 1), Step(1, 0, 1.0, 1)), terminated_at_goal=False)


@pytest.fixture
def goal_episodes():
    # on the 5x5 grid: one episode enters the goal from 23, one from 22 via 23
    return [
        Rollout(steps=(Step(23, 1, -1.0, 24),), terminated_at_goal=True),
        Rollout(steps=(Step(22, 1, -2.0, 23), Step(23, 1, -1.0, 24)), terminated_at_goal=True),
    ]


class TestEmpiricalOccupancy:
    def test_episodic_pools_visits(self, chain_mdp, chain_episode):
        occ = empirical_occupancy([chain_episode], chain_mdp, kind="episodic")
        np.testing.assert_allclose(occ.weights, [0.0, 0.5, 0.5, 0.0])
        assert not occ.exact

    def test_discounted_weights_each_step(self, chain_mdp, chain_episode):
        occ = empirical_occupancy([chain_episode], chain_mdp, cap=1, gamma=0.5)
        np.testing.assert_allclose(occ.weights, [0.0, 2 / 3, 1 / 3, 0.0])
        assert occ.horizon == 1

    def test_absorb_keeps_finished_episodes_at_the_goal(self, grid_mdp, goal_episodes):
        occ = empirical_occupancy(goal_episodes, grid_mdp, cap=2, gamma=0.5, mode="absorb")
        assert occ.weights[93] == pytest.approx(0.75 / 1.75)
        assert occ.weights[89] == pytest.approx(0.5 / 1.75)
        assert occ.weights[96] == pytest.approx(0.5 / 1.75)

    def test_truncate_renormalizes_over_running_episodes(self, grid_mdp, goal_episodes):
        occ = empirical_occupancy(goal_episodes, grid_mdp, cap=2, gamma=0.5, mode="truncate")
        assert occ.weights[93] == pytest.approx(2 / 3)
        assert occ.weights[89] == pytest.approx(1 / 3)
        assert occ.weights[96] == 0.0

    def test_timed_out_episode_does_not_inflate_the_goal(self, grid_mdp):
        episodes = [
            Rollout(steps=(Step(23, 1, -1.0, 24),), terminated_at_goal=True),
            Rollout(steps=(Step(0, 0, -8.0, 0),), terminated_at_goal=False),
        ]
        occ = empirical_occupancy(episodes, grid_mdp, cap=1, gamma=0.5, mode="absorb")
        assert occ.weights[93] == pytest.approx(0.4)
        assert occ.weights[0] == pytest.approx(0.4)
        assert occ.weights[96] == pytest.approx(0.2)

    def test_default_cap_is_the_step_limit(self, chain_mdp, chain_episode):
        occ = empirical_occupancy([chain_episode], chain_mdp)
        assert occ.horizon == chain_mdp.max_steps

    def test_deterministic_policy_is_recovered_exactly(self, grid_mdp, rng):
        policy = PolicySnapshot.from_actions(np.ones(25, dtype=int), 4)
        # always "right" pins the agent to the top-right corner after four steps
        episodes = rollouts(grid_mdp, policy, 3, rng)
        estimate = empirical_occupancy(episodes, grid_mdp)
        exact = exact_discounted_occupancy(grid_mdp, policy)
        assert estimate.horizon == grid_mdp.max_steps
        assert np.abs(estimate.weights - exact.weights).max() < 0.25

    @pytest.mark.parametrize(
        "kwargs",
        [{"mode": "wrap"}, {"kind": "average"}, {"cap": -1}],
    )
    def test_rejects_bad_arguments(self, chain_mdp, chain_episode, kwargs):
        with pytest.raises(UsageError):
            empirical_occupancy([chain_episode], chain_mdp, **kwargs)

    def test_needs_rollouts(self, chain_mdp):
        with pytest.raises(UsageError):
            empirical_occupancy([], chain_mdp)


class TestPolicyDataset:
    def test_from_rollouts(self, chain_episode):
        dataset = dataset_from_rollouts([chain_episode, chain_episode], 2, 2)
        assert len(dataset) == 4
        assert dataset.n_rollouts == 2
        np.testing.assert_array_equal(dataset.labels, [0, 1])
        assert dataset.label_weight(1) == pytest.approx(0.5)
        np.testing.assert_allclose(dataset.state_distribution(0), [0.0, 1.0])

    def test_cap_limits_each_rollout(self, chain_episode):
        dataset = dataset_from_rollouts([chain_episode], 2, 2, cap=1)
        assert len(dataset) == 1
        with pytest.raises(UsageError):
            dataset.state_distribution(0)

    def test_pair_distribution_merges_duplicates(self, chain_episode):
        states, actions, totals = dataset_from_rollouts([chain_episode] * 3, 2, 2).pair_distribution()
        np.testing.assert_array_equal(states, [0, 1])
        np.testing.assert_array_equal(actions, [1, 0])
        np.testing.assert_allclose(totals, [0.5, 0.5])

    def test_from_occupancy_keeps_weights(self, chain_mdp):
        occ = exact_discounted_occupancy(chain_mdp, PolicySnapshot.uniform(2, 2))
        dataset = dataset_from_occupancy(occ)
        assert dataset.source == "exact_weighted"
        np.testing.assert_allclose(dataset.weights, occ.weights[occ.support])

    @pytest.mark.parametrize(
        "states, actions",
        [([], []), ([0, 2], [0, 0]), ([0], [5]), ([0, 1], [0])],
    )
    def test_rejects_invalid_samples(self, states, actions):
        with pytest.raises(ConstructionError):
            PolicyDataset(states=states, actions=actions, n_states=2, n_actions=2)
