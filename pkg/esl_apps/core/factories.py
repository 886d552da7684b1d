"""factory-boy factories for the immutable config and model types."""

import factory
import numpy as np

from esl_apps.agents.models.config import AgentConfig
from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.harness.models.experiment import ExperimentConfig
from esl_apps.mdp.models.gridworld import GridworldSpec
from esl_apps.mdp.models.tabular import TabularMdp
from esl_apps.metrics.models.backend import DistanceBackend


class GridworldSpecFactory(factory.Factory):
    class Meta:
        model = GridworldSpec

    width = 5
    height = 5
    start = (0, 0)
    goal = (4, 4)
    reward_kind = "dense"
    transition_kind = "deterministic"
    max_steps = 15
    gamma = 0.9


class AgentConfigFactory(factory.Factory):
    class Meta:
        model = AgentConfig

    variant = "q_decay"
    epsilon = 0.9
    total_episodes = 30
    convergence_window = 5


class DistanceBackendFactory(factory.Factory):
    class Meta:
        model = DistanceBackend

    kind = "exact_w1"
    rollouts = 20


class ExperimentConfigFactory(factory.Factory):
    class Meta:
        model = ExperimentConfig

    env = factory.SubFactory(GridworldSpecFactory)
    agent = factory.SubFactory(AgentConfigFactory)
    backend = factory.SubFactory(DistanceBackendFactory)
    trials = 2
    base_seed = 0
    workers = 1
    name = factory.Sequence(lambda n: f"experiment-{n}")


class ChainMdpFactory(factory.Factory):
    """Two-state chain: action 0 stays, action 1 moves; state 1 pays 1."""

    class Meta:
        model = TabularMdp

    transition = factory.LazyFunction(
        lambda: np.array(
            [
                [[1.0, 0.0], [0.0, 1.0]],
                [[0.0, 1.0], [1.0, 0.0]],
            ]
        )
    )
    reward = factory.LazyFunction(lambda: np.array([[0.0, 0.0], [1.0, 1.0]]))
    gamma = 0.9
    mu = factory.LazyFunction(lambda: np.array([1.0, 0.0]))
    max_steps = 10
    name = "chain"


class RandomMdpFactory(factory.Factory):
    """Dense random MDP; pass ``seed``, ``n_states`` and ``n_actions``."""

    class Meta:
        model = TabularMdp

    class Params:
        seed = 0
        n_states = 4
        n_actions = 2
        rng = factory.LazyAttribute(lambda o: np.random.default_rng(o.seed))

    transition = factory.LazyAttribute(
        lambda o: o.rng.dirichlet(np.ones(o.n_states), size=(o.n_states, o.n_actions))
    )
    reward = factory.LazyAttribute(lambda o: o.rng.uniform(-1.0, 1.0, size=(o.n_states, o.n_actions)))
    mu = factory.LazyAttribute(lambda o: o.rng.dirichlet(np.ones(o.n_states)))
    gamma = 0.9
    max_steps = 20
    name = "random"


def random_policy(n_states: int, n_actions: int, rng: np.random.Generator) -> PolicySnapshot:
    return PolicySnapshot(probs=rng.dirichlet(np.ones(n_actions), size=n_states))
