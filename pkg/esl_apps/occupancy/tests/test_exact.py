import itertools

import numpy as np
import pytest

from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.core.exceptions import ConstructionError, UsageError
from esl_apps.core.factories import ChainMdpFactory, RandomMdpFactory, random_policy
from esl_apps.mdp.models.gridworld import task_spec
from esl_apps.mdp.services.dynamics import rollouts
from esl_apps.mdp.services.gridworld import build_gridworld
from esl_apps.mdp.services.planning import value_iteration
from esl_apps.occupancy.models.measure import OccupancyMeasure
from esl_apps.occupancy.services.empirical import empirical_occupancy
from esl_apps.occupancy.services.evaluation import (
    policy_value,
    stationarity_rel_error,
    total_variation,
)
from esl_apps.occupancy.services.exact import (
    bellman_flow_residual,
    exact_discounted_occupancy,
    exact_finite_horizon_occupancy,
    finite_horizon_flow_residual,
    recover_policy,
)


def softened(mdp, epsilon):
    optimal, _ = value_iteration(mdp)
    probs = (1 - epsilon) * optimal.probs + epsilon / mdp.n_actions
    probs[mdp.goal_mask] = optimal.probs[mdp.goal_mask]
    return PolicySnapshot(probs=probs)


def enumerated_occupancy(mdp, probs, horizon):
    """Average state-action marginal over steps 0..H-1 by summing every path."""
    occupancy = np.zeros((mdp.n_states, mdp.n_actions))
    pairs = list(itertools.product(range(mdp.n_states), range(mdp.n_actions)))
    for path in itertools.product(pairs, repeat=horizon):
        (s0, a0) = path[0]
        prob = mdp.mu[s0] * probs[s0, a0]
        for (s, a), (s_next, a_next) in zip(path, path[1:]):
            prob *= mdp.transition[s, a, s_next] * probs[s_next, a_next]
        if prob == 0.0:
            continue
        for s, a in path:
            occupancy[s, a] += prob / horizon
    return occupancy


class TestOccupancyMeasure:
    def test_must_be_normalized(self):
        with pytest.raises(ConstructionError):
            OccupancyMeasure(weights=[0.5, 0.4], n_states=1, n_actions=2)

    def test_must_match_the_pair_count(self):
        with pytest.raises(ConstructionError):
            OccupancyMeasure(weights=[1.0], n_states=1, n_actions=2)

    def test_tiny_negatives_are_clipped(self):
        occ = OccupancyMeasure(weights=[1.0 + 1e-12, -1e-12], n_states=1, n_actions=2)
        assert occ.weights.min() == 0.0
        np.testing.assert_array_equal(occ.support, [0])


class TestDiscountedOccupancy:
    def test_bellman_flow_on_random_mdps(self):
        for seed in range(10):
            mdp = RandomMdpFactory(seed=seed, n_states=6, n_actions=3)
            policy = random_policy(6, 3, np.random.default_rng(seed))
            occ = exact_discounted_occupancy(mdp, policy)
            assert bellman_flow_residual(mdp, occ) <= 1e-9
            assert occ.weights.sum() == pytest.approx(1.0, abs=1e-12)

    def test_value_routes_agree(self, slip_mdp, rng):
        policy = random_policy(25, 4, rng)
        assert policy_value(slip_mdp, policy, route="occupancy") == pytest.approx(
            policy_value(slip_mdp, policy, route="value")
        )

    def test_unknown_value_route(self, chain_mdp):
        with pytest.raises(UsageError):
            policy_value(chain_mdp, PolicySnapshot.uniform(2, 2), route="guess")

    def test_shape_mismatch(self, chain_mdp):
        with pytest.raises(UsageError):
            exact_discounted_occupancy(chain_mdp, PolicySnapshot.uniform(3, 2))

    def test_two_state_chain_splits_evenly(self):
        mdp = ChainMdpFactory(gamma=0.5)
        # move from s0 into s1, then stay
        occ = exact_discounted_occupancy(mdp, PolicySnapshot.from_actions([1, 0], 2))
        np.testing.assert_allclose(occ.state_marginal, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(occ.matrix, [[0.0, 0.5], [0.5, 0.0]], atol=1e-12)

    def test_recover_policy_round_trip(self, rng):
        mdp = RandomMdpFactory(seed=4, n_states=5, n_actions=3)
        policy = random_policy(5, 3, rng)
        np.testing.assert_allclose(recover_policy(exact_discounted_occupancy(mdp, policy)), policy.probs, atol=1e-10)

    def test_recover_policy_fills_unvisited_states(self, grid_mdp):
        optimal, _ = value_iteration(grid_mdp)
        recovered = recover_policy(exact_discounted_occupancy(grid_mdp, optimal))
        # (0, 4) is never visited by the optimal policy
        np.testing.assert_allclose(recovered[20], 0.25)

    def test_monte_carlo_estimate_matches(self):
        mdp = build_gridworld(task_spec("5x5-dense", max_steps=200))
        policy = softened(mdp, 0.05)
        episodes = rollouts(mdp, policy, 10_000, np.random.default_rng(0))
        estimate = empirical_occupancy(episodes, mdp)
        assert total_variation(estimate, exact_discounted_occupancy(mdp, policy)) <= 0.01


class TestFiniteHorizonOccupancy:
    @pytest.mark.parametrize("horizon", [1, 3, 6])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_matches_path_enumeration(self, horizon, seed):
        mdp = RandomMdpFactory(seed=seed, n_states=2, n_actions=2)
        policy = random_policy(2, 2, np.random.default_rng(seed + 10))
        occ = exact_finite_horizon_occupancy(mdp, policy, horizon)
        np.testing.assert_allclose(occ.matrix, enumerated_occupancy(mdp, policy.probs, horizon), atol=1e-9)
        assert finite_horizon_flow_residual(mdp, policy, occ, horizon) <= 1e-9

    def test_episodic_visits_stop_at_the_goal(self, grid_mdp):
        optimal, _ = value_iteration(grid_mdp)
        occ = exact_finite_horizon_occupancy(grid_mdp, optimal, grid_mdp.max_steps, stop_at_goal=True)
        assert occ.kind == "episodic"
        assert occ.state_marginal[24] == 0.0
        np.testing.assert_allclose(occ.state_marginal[occ.state_marginal > 0], 1.0 / 8)

    def test_horizon_must_be_positive(self, chain_mdp):
        with pytest.raises(UsageError):
            exact_finite_horizon_occupancy(chain_mdp, PolicySnapshot.uniform(2, 2), 0)

    def test_flow_checks_reject_the_wrong_kind(self, chain_mdp):
        policy = PolicySnapshot.uniform(2, 2)
        with pytest.raises(UsageError):
            bellman_flow_residual(chain_mdp, exact_finite_horizon_occupancy(chain_mdp, policy, 3))
        with pytest.raises(UsageError):
            finite_horizon_flow_residual(chain_mdp, policy, exact_discounted_occupancy(chain_mdp, policy), 3)


class TestStationarity:
    def test_relative_error_on_the_slip_grid(self, slip_mdp):
        policy, _ = value_iteration(slip_mdp)
        occ = exact_finite_horizon_occupancy(slip_mdp, policy, slip_mdp.max_steps, stop_at_goal=True)
        episodes = rollouts(slip_mdp, policy, 500, np.random.default_rng(5))
        assert abs(stationarity_rel_error(slip_mdp, policy, occ, episodes)) <= 5.0

    def test_exact_inputs_on_the_chain_give_zero(self, chain_mdp, rng):
        policy = PolicySnapshot.from_actions([1, 0], 2)
        occ = exact_finite_horizon_occupancy(chain_mdp, policy, chain_mdp.max_steps)
        episodes = rollouts(chain_mdp, policy, 4, rng)
        assert stationarity_rel_error(chain_mdp, policy, occ, episodes) == pytest.approx(0.0, abs=1e-9)

    def test_uniform_occupancy_is_flagged(self, grid_mdp, rng):
        optimal, _ = value_iteration(grid_mdp)
        episodes = rollouts(grid_mdp, optimal, 3, rng)
        exact = exact_finite_horizon_occupancy(grid_mdp, optimal, grid_mdp.max_steps, stop_at_goal=True)
        assert stationarity_rel_error(grid_mdp, optimal, exact, episodes) == pytest.approx(0.0, abs=1e-9)
        uniform = OccupancyMeasure(weights=np.full(100, 0.01), n_states=25, n_actions=4)
        # mean reward -4 over 8 steps against the true return of -36
        assert stationarity_rel_error(grid_mdp, optimal, uniform, episodes) == pytest.approx(-100.0 / 9)

    def test_zero_mean_return_is_undefined(self, chain_mdp, rng):
        # staying in state 0 earns nothing
        policy = PolicySnapshot.from_actions([0, 0], 2)
        occ = exact_finite_horizon_occupancy(chain_mdp, policy, chain_mdp.max_steps)
        episodes = rollouts(chain_mdp, policy, 3, rng)
        assert stationarity_rel_error(chain_mdp, policy, occ, episodes) is None

    def test_needs_rollouts(self, chain_mdp):
        policy = PolicySnapshot.uniform(2, 2)
        occ = exact_discounted_occupancy(chain_mdp, policy)
        with pytest.raises(UsageError):
            stationarity_rel_error(chain_mdp, policy, occ, [])

    def test_total_variation(self):
        assert total_variation([0.5, 0.5], [1.0, 0.0]) == pytest.approx(0.5)
