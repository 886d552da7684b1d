import logging

import numpy as np

from esl_apps.agents.models.config import AgentConfig
from esl_apps.agents.models.policy import PolicySnapshot, PolicyTrace
from esl_apps.agents.services.convergence import check_convergence
from esl_apps.core.exceptions import ConfigError
from esl_apps.core.sampling import sample_index
from esl_apps.mdp.services.dynamics import evaluation_return, step
from esl_apps.mdp.services.planning import value_iteration

logger = logging.getLogger(__name__)


def optimal_return_of(mdp) -> float:
    policy, _ = value_iteration(mdp)
    return evaluation_return(mdp, policy)


class TabularAgent:
    """Episode loop, snapshot bookkeeping and the convergence test.

    Subclasses implement ``initial_policy``, ``act``, ``observe`` and
    ``end_episode``; every call to ``record`` appends one snapshot.
    """

    variants = ()

    def __init__(self, mdp, cfg: AgentConfig, rng: np.random.Generator, optimal_return: float = None):
        if cfg.variant not in self.variants:
            raise ConfigError(
                f"{type(self).__name__} cannot train variant {cfg.variant!r}",
                key="agent_variant",
            )
        self.mdp = mdp
        self.cfg = cfg
        self.rng = rng
        self.optimal_return = optimal_return_of(mdp) if optimal_return is None else optimal_return
        self.snapshots = []
        self.state_visits = np.zeros(mdp.n_states, dtype=np.int64)
        self.total_steps = 0
        self.episodes = 0
        self.converged = False
        self.updates_to_convergence = None

    @property
    def finished(self) -> bool:
        return self.converged and self.cfg.stop_on_convergence

    def record(self, probs) -> PolicySnapshot:
        index = len(self.snapshots)
        snapshot = PolicySnapshot(probs=probs, update_index=index)
        snapshot = snapshot.relabel(index, evaluation_return(self.mdp, snapshot))
        self.snapshots.append(snapshot)
        if not self.converged and check_convergence(
            self.snapshots, self.optimal_return, self.cfg.convergence_window
        ):
            self.converged = True
            self.updates_to_convergence = index
            logger.debug("%s converged at update %d", self.cfg.algorithm_id, index)
        return snapshot

    def initial_policy(self) -> np.ndarray:
        raise NotImplementedError

    def act(self, state: int) -> int:
        raise NotImplementedError

    def observe(self, state: int, action: int, reward: float, next_state: int):
        pass

    def end_episode(self):
        raise NotImplementedError

    def run_episode(self):
        mdp = self.mdp
        state = sample_index(mdp.mu, self.rng)
        for _ in range(mdp.max_steps):
            if state in mdp.goal_states or self.finished:
                break
            action = self.act(state)
            next_state, reward = step(mdp, state, action, self.rng)
            self.state_visits[state] += 1
            self.total_steps += 1
            self.observe(state, action, reward, next_state)
            state = next_state
        self.episodes += 1

    def train(self, seed: int = 0) -> PolicyTrace:
        self.record(self.initial_policy())
        for _ in range(self.cfg.total_episodes):
            if self.finished:
                break
            self.run_episode()
            if self.finished:
                break
            self.end_episode()
        logger.info(
            "%s finished after %d episodes with %d snapshots (converged=%s)",
            self.cfg.algorithm_id,
            self.episodes,
            len(self.snapshots),
            self.converged,
        )
        return self.trace(seed)

    def trace(self, seed: int = 0) -> PolicyTrace:
        return PolicyTrace(
            snapshots=tuple(self.snapshots),
            algorithm_id=self.cfg.algorithm_id,
            seed=seed,
            converged=self.converged,
            updates_to_convergence=self.updates_to_convergence,
            cadence=self.cadence,
            state_visits=self.state_visits,
            optimal_return=self.optimal_return,
            metadata={"episodes": self.episodes, "steps": self.total_steps},
        )

    @property
    def cadence(self) -> str:
        return "per_episode"
