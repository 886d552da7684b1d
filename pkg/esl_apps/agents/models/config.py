from dataclasses import dataclass

from esl_apps.core.exceptions import ConfigError

VARIANTS = [
    ("q_greedy", "Q-learning, fixed epsilon-greedy"),
    ("q_decay", "Q-learning, decaying epsilon-greedy"),
    ("ucrl2", "UCRL2"),
    ("psrl", "Posterior sampling RL"),
]

SNAPSHOT_CADENCES = [
    ("per_episode", "One snapshot per training episode"),
    ("per_step", "One snapshot per Q-table update"),
]


@dataclass(frozen=True)
class AgentConfig:
    variant: str = "q_decay"
    epsilon: float = 0.9
    epsilon_decay: float = 0.9999
    epsilon_floor: float = 0.0001
    exploration_steps: int = 500
    learning_rate: float = 0.1
    q_init_low: float = -1.0
    q_init_high: float = 1.0
    delta: float = 0.1
    # multiplies both textbook UCRL2 radii; 1.0 gives the worst-case sets
    confidence_scale: float = 0.02
    evi_tolerance: float = 1e-6
    evi_max_iterations: int = 2000
    # Dirichlet pseudo-count per (s, a), spread evenly over next states
    prior_transition_mass: float = 0.1
    # position in the reward range: 0 is the lowest reward, 1 the highest
    prior_reward_mean: float = 0.5
    prior_reward_precision: float = 1.0
    reward_noise_precision: float = 1.0
    total_episodes: int = 200
    convergence_window: int = 5
    snapshot_cadence: str = "per_episode"
    snapshot_behavior_policy: bool = False
    stop_on_convergence: bool = True

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.variant not in dict(VARIANTS):
            raise ConfigError(f"unknown agent variant {self.variant!r}", key="agent_variant")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must lie in [0, 1]", key="agent_epsilon")
        if not 0.0 <= self.epsilon_floor <= 1.0:
            raise ConfigError("epsilon floor must lie in [0, 1]", key="agent_epsilon_floor")
        if not 0.0 < self.epsilon_decay <= 1.0:
            raise ConfigError("epsilon decay must lie in (0, 1]", key="agent_epsilon_decay")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)", key="agent_delta")
        # zero freezes the Q-table, which is a supported degenerate case
        if not 0.0 <= self.learning_rate <= 1.0:
            raise ConfigError("learning rate must lie in [0, 1]", key="agent_learning_rate")
        if self.q_init_low > self.q_init_high:
            raise ConfigError("q_init_low must not exceed q_init_high", key="agent_q_init_low")
        if self.total_episodes < 1:
            raise ConfigError("total_episodes must be >= 1", key="agent_total_episodes")
        if self.convergence_window < 1:
            raise ConfigError(
                "convergence_window must be >= 1", key="agent_convergence_window"
            )
        if self.snapshot_cadence not in dict(SNAPSHOT_CADENCES):
            raise ConfigError(
                f"unknown snapshot cadence {self.snapshot_cadence!r}",
                key="snapshot_cadence",
            )
        if not 0.0 <= self.prior_reward_mean <= 1.0:
            raise ConfigError("prior reward mean must lie in [0, 1]", key="agent_prior_reward_mean")
        if self.confidence_scale <= 0:
            raise ConfigError("confidence scale must be positive", key="agent_confidence_scale")
        if min(self.prior_transition_mass, self.prior_reward_precision, self.reward_noise_precision) <= 0:
            raise ConfigError("posterior prior parameters must be positive", key="agent_prior_transition_mass")

    @property
    def algorithm_id(self) -> str:
        if self.variant == "q_greedy":
            return f"q_greedy(eps={self.epsilon:g})"
        if self.variant == "q_decay":
            return f"q_decay(eps={self.epsilon:g})"
        if self.variant == "ucrl2":
            return f"ucrl2(delta={self.delta:g})"
        return "psrl"

    @property
    def is_q_learning(self) -> bool:
        return self.variant in ("q_greedy", "q_decay")
