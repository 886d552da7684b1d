import logging

import numpy as np

from esl_apps.agents.services.base import TabularAgent
from esl_apps.mdp.models.tabular import TabularMdp
from esl_apps.mdp.services.planning import value_iteration

logger = logging.getLogger(__name__)


class PsrlAgent(TabularAgent):
    """Posterior sampling with a Dirichlet transition and Normal reward posterior.

    One model is sampled per episode and solved exactly; the agent acts
    greedily on it for the whole episode.
    """

    variants = ("psrl",)

    def __init__(
        self,
        mdp,
        cfg,
        rng,
        optimal_return=None,
        transition_prior=None,
        reward_prior_mean=None,
        reward_prior_precision=None,
    ):
        super().__init__(mdp, cfg, rng, optimal_return=optimal_return)
        shape = (mdp.n_states, mdp.n_actions)
        if transition_prior is None:
            transition_prior = np.full(shape + (mdp.n_states,), cfg.prior_transition_mass / mdp.n_states)
        if reward_prior_mean is None:
            low, high = float(mdp.reward.min()), float(mdp.reward.max())
            reward_prior_mean = np.full(shape, low + cfg.prior_reward_mean * (high - low))
        if reward_prior_precision is None:
            reward_prior_precision = np.full(shape, cfg.prior_reward_precision)
        self.alpha = np.array(transition_prior, dtype=float)
        self.reward_mean = np.array(reward_prior_mean, dtype=float)
        self.reward_precision = np.array(reward_prior_precision, dtype=float)
        self.actions = None

    def sample_model(self) -> TabularMdp:
        mdp = self.mdp
        draws = self.rng.gamma(self.alpha)
        totals = draws.sum(axis=-1, keepdims=True)
        # all-underflow rows fall back to the posterior mean
        mean = self.alpha / self.alpha.sum(axis=-1, keepdims=True)
        transition = np.where(totals > 0, draws / np.where(totals > 0, totals, 1.0), mean)
        reward = self.reward_mean + self.rng.standard_normal(self.reward_mean.shape) / np.sqrt(
            self.reward_precision
        )
        goals = list(mdp.goal_states)
        transition[goals] = 0.0
        transition[goals, :, goals] = 1.0
        reward[goals] = 0.0
        transition /= transition.sum(axis=-1, keepdims=True)
        return TabularMdp(
            transition=transition,
            reward=reward,
            gamma=mdp.gamma,
            mu=mdp.mu,
            max_steps=mdp.max_steps,
            goal_states=mdp.goal_states,
            state_coords=mdp.state_coords,
            name=f"{mdp.name} posterior sample",
        )

    def sample_policy(self):
        policy, _ = value_iteration(self.sample_model())
        return policy

    def initial_policy(self) -> np.ndarray:
        policy = self.sample_policy()
        self.actions = policy.actions
        return policy.probs

    def act(self, state: int) -> int:
        return int(self.actions[state])

    def observe(self, state, action, reward, next_state):
        self.alpha[state, action, next_state] += 1.0
        precision = self.reward_precision[state, action]
        updated = precision + self.cfg.reward_noise_precision
        self.reward_mean[state, action] = (
            precision * self.reward_mean[state, action] + self.cfg.reward_noise_precision * reward
        ) / updated
        self.reward_precision[state, action] = updated

    def end_episode(self):
        policy = self.sample_policy()
        self.actions = policy.actions
        self.record(policy.probs)


def train_psrl(mdp, cfg, rng, seed: int = 0, optimal_return: float = None):
    return PsrlAgent(mdp, cfg, rng, optimal_return=optimal_return).train(seed)
