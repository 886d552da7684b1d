import logging

import numpy as np

from esl_apps.agents.services.base import TabularAgent
from esl_apps.mdp.services.planning import greedy_actions

logger = logging.getLogger(__name__)


class QLearningAgent(TabularAgent):
    """Tabular Q-learning with fixed or decaying epsilon-greedy behaviour.

    Snapshots hold the greedy policy of the current Q-table unless
    ``snapshot_behavior_policy`` asks for the epsilon-mixed one.
    """

    variants = ("q_greedy", "q_decay")

    def __init__(self, mdp, cfg, rng, optimal_return=None):
        super().__init__(mdp, cfg, rng, optimal_return=optimal_return)
        self.q = rng.uniform(cfg.q_init_low, cfg.q_init_high, size=(mdp.n_states, mdp.n_actions))
        self.epsilon = cfg.epsilon
        self.action_counts = np.zeros(mdp.n_actions, dtype=np.int64)

    @property
    def cadence(self) -> str:
        return self.cfg.snapshot_cadence

    def greedy(self) -> np.ndarray:
        return greedy_actions(self.q, goal_mask=self.mdp.goal_mask)

    def snapshot_probs(self) -> np.ndarray:
        n_states, n_actions = self.q.shape
        probs = np.zeros((n_states, n_actions))
        probs[np.arange(n_states), self.greedy()] = 1.0
        if self.cfg.snapshot_behavior_policy:
            mixed = (1.0 - self.epsilon) * probs + self.epsilon / n_actions
            probs = np.where(self.mdp.goal_mask[:, None], probs, mixed)
        return probs

    def initial_policy(self) -> np.ndarray:
        return self.snapshot_probs()

    def act(self, state: int) -> int:
        if self.rng.random() < self.epsilon:
            action = int(self.rng.integers(self.mdp.n_actions))
        else:
            action = int(greedy_actions(self.q[state : state + 1])[0])
        self.action_counts[action] += 1
        return action

    def decay_epsilon(self):
        if self.cfg.variant == "q_decay" and self.total_steps > self.cfg.exploration_steps:
            self.epsilon = max(self.epsilon * self.cfg.epsilon_decay, self.cfg.epsilon_floor)

    def observe(self, state, action, reward, next_state):
        target = reward
        if next_state not in self.mdp.goal_states:
            target += self.mdp.gamma * self.q[next_state].max()
        self.q[state, action] += self.cfg.learning_rate * (target - self.q[state, action])
        self.decay_epsilon()
        if self.cfg.snapshot_cadence == "per_step":
            self.record(self.snapshot_probs())

    def end_episode(self):
        if self.cfg.snapshot_cadence == "per_episode":
            self.record(self.snapshot_probs())


def train_q_learning(mdp, cfg, rng, seed: int = 0, optimal_return: float = None):
    return QLearningAgent(mdp, cfg, rng, optimal_return=optimal_return).train(seed)
