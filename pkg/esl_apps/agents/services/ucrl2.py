import logging

import numpy as np

from esl_apps.agents.services.base import TabularAgent
from esl_apps.mdp.services.planning import greedy_actions

logger = logging.getLogger(__name__)


def optimistic_transitions(p_hat: np.ndarray, d_p: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Maximize p . values over the L1 ball of radius d_p around each p_hat row.

    The best state gains d_p / 2 (capped at 1) and the surplus is taken
    from the lowest-valued states first.
    """
    order = np.argsort(values, kind="stable")
    p_sorted = p_hat[..., order].copy()
    p_sorted[..., -1] = np.minimum(1.0, p_sorted[..., -1] + d_p / 2.0)
    excess = p_sorted.sum(axis=-1) - 1.0
    # rows left short of unit mass hand the remainder to the best state
    p_sorted[..., -1] -= np.minimum(excess, 0.0)
    lower = p_sorted[..., :-1]
    mass_before = np.cumsum(lower, axis=-1) - lower
    removed = np.clip(excess[..., None] - mass_before, 0.0, lower)
    p_sorted[..., :-1] = lower - removed
    optimistic = np.empty_like(p_sorted)
    optimistic[..., order] = p_sorted
    return optimistic


class Ucrl2Agent(TabularAgent):
    """UCRL2 with the policy recomputed at the start of every episode.

    Extended value iteration runs on the discounted optimistic MDP; the
    goal states are known to be terminal and valued 0.
    """

    variants = ("ucrl2",)

    def __init__(self, mdp, cfg, rng, optimal_return=None):
        super().__init__(mdp, cfg, rng, optimal_return=optimal_return)
        n_states, n_actions = mdp.n_states, mdp.n_actions
        self.sa_counts = np.zeros((n_states, n_actions), dtype=np.int64)
        self.sas_counts = np.zeros((n_states, n_actions, n_states), dtype=np.int64)
        self.reward_sums = np.zeros((n_states, n_actions))
        self.reward_low = float(mdp.reward.min())
        self.reward_high = float(mdp.reward.max())
        self.actions = None

    def initial_policy(self) -> np.ndarray:
        self.actions = self.rng.integers(self.mdp.n_actions, size=self.mdp.n_states)
        self.actions[self.mdp.goal_mask] = 0
        return self._probs(self.actions)

    def _probs(self, actions) -> np.ndarray:
        probs = np.zeros((self.mdp.n_states, self.mdp.n_actions))
        probs[np.arange(self.mdp.n_states), actions] = 1.0
        return probs

    def act(self, state: int) -> int:
        return int(self.actions[state])

    def observe(self, state, action, reward, next_state):
        self.sa_counts[state, action] += 1
        self.sas_counts[state, action, next_state] += 1
        self.reward_sums[state, action] += reward

    def estimates(self):
        counts = np.maximum(self.sa_counts, 1)
        return self.reward_sums / counts, self.sas_counts / counts[..., None]

    def confidence_widths(self):
        """Reward and L1 transition radii, each scaled by ``confidence_scale``.

        A scale of 1.0 gives the worst-case radii; smaller scales keep the
        optimism but let the estimates dominate within a few hundred visits.
        """
        n_states, n_actions = self.sa_counts.shape
        counts = np.maximum(self.sa_counts, 1)
        log_term = np.log(2 * n_states * n_actions * max(self.total_steps, 1) / self.cfg.delta)
        reward_range = max(self.reward_high - self.reward_low, 1.0)
        scale = self.cfg.confidence_scale
        d_r = scale * reward_range * np.sqrt(7 * log_term / (2 * counts))
        d_p = scale * np.sqrt(14 * n_states * log_term / counts)
        return d_r, d_p

    def plan(self, r_hat, p_hat, d_r, d_p) -> np.ndarray:
        """Greedy actions of extended value iteration on the optimistic MDP."""
        mdp = self.mdp
        terminal = mdp.goal_mask
        rewards = np.minimum(r_hat + d_r, self.reward_high)
        values = np.zeros(mdp.n_states)
        for _ in range(self.cfg.evi_max_iterations):
            optimistic = optimistic_transitions(p_hat, d_p, values)
            q = rewards + mdp.gamma * optimistic @ values
            updated = np.where(terminal, 0.0, q.max(axis=1))
            residual = np.abs(updated - values).max()
            values = updated
            if residual < self.cfg.evi_tolerance:
                break
        else:
            logger.warning("Extended value iteration hit %d iterations", self.cfg.evi_max_iterations)
        optimistic = optimistic_transitions(p_hat, d_p, values)
        q = rewards + mdp.gamma * optimistic @ values
        return greedy_actions(q, goal_mask=terminal)

    def end_episode(self):
        r_hat, p_hat = self.estimates()
        d_r, d_p = self.confidence_widths()
        self.actions = self.plan(r_hat, p_hat, d_r, d_p)
        self.record(self._probs(self.actions))


def train_ucrl2(mdp, cfg, rng, seed: int = 0, optimal_return: float = None):
    return Ucrl2Agent(mdp, cfg, rng, optimal_return=optimal_return).train(seed)
