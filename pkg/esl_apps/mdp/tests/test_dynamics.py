import numpy as np
import pytest

from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.core.exceptions import ConstructionError, UsageError
from esl_apps.mdp.models.rollout import Rollout, Step
from esl_apps.mdp.services.dynamics import evaluation_return, rollout, rollouts, step
from esl_apps.mdp.services.planning import value_iteration
from esl_apps.occupancy.services.evaluation import policy_value


class TestStep:
    def test_deterministic_step(self, grid_mdp, rng):
        next_state, reward = step(grid_mdp, 0, 1, rng)
        assert next_state == 1
        assert reward == -8.0

    @pytest.mark.parametrize("state, action", [(-1, 0), (25, 0), (0, 4), (0, -1)])
    def test_out_of_range(self, grid_mdp, rng, state, action):
        with pytest.raises(UsageError):
            step(grid_mdp, state, action, rng)

    def test_slip_frequencies(self, slip_mdp, rng):
        outcomes = [step(slip_mdp, 6, 1, rng)[0] for _ in range(4000)]
        assert np.mean(np.array(outcomes) == 7) == pytest.approx(0.8, abs=0.03)


class TestRollout:
    def test_optimal_rollout_reaches_goal(self, grid_mdp, rng):
        policy, _ = value_iteration(grid_mdp)
        episode = rollout(grid_mdp, policy, rng)
        assert episode.terminated_at_goal
        assert episode.length == 8
        assert episode.total_reward == pytest.approx(-36.0)
        assert episode.initial_state == 0
        assert episode.final_state == 24

    def test_rollout_truncates_at_max_steps(self, grid_mdp, rng):
        # always "up" from the top row never leaves it
        policy = PolicySnapshot.from_actions(np.zeros(25, dtype=int), 4)
        episode = rollout(grid_mdp, policy, rng)
        assert not episode.terminated_at_goal
        assert episode.length == grid_mdp.max_steps

    def test_rollouts_count(self, grid_mdp, rng):
        policy = PolicySnapshot.uniform(25, 4)
        assert len(rollouts(grid_mdp, policy, 7, rng)) == 7

    def test_policy_shape_checked(self, grid_mdp, rng):
        with pytest.raises(UsageError):
            rollout(grid_mdp, PolicySnapshot.uniform(24, 4), rng)

    def test_rollout_steps_must_chain(self):
        with pytest.raises(ConstructionError):
            Rollout(steps=(Step(0, 0, 0.0, 1), Step(2, 0, 0.0, 3)), terminated_at_goal=False)

    def test_empty_rollout_keeps_its_start(self):
        episode = Rollout(steps=(), terminated_at_goal=True, initial_state=24)
        assert episode.final_state == 24
        assert episode.pairs == []


class TestEvaluationReturn:
    def test_deterministic_case_uses_the_greedy_rollout(self, grid_mdp):
        policy, _ = value_iteration(grid_mdp)
        assert evaluation_return(grid_mdp, policy) == pytest.approx(-36.0)

    def test_stochastic_case_uses_policy_value(self, slip_mdp):
        policy, _ = value_iteration(slip_mdp)
        assert evaluation_return(slip_mdp, policy) == pytest.approx(policy_value(slip_mdp, policy))
