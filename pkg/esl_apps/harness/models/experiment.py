from dataclasses import asdict, dataclass, field

from esl_apps.agents.models.config import AgentConfig
from esl_apps.core.exceptions import ConfigError
from esl_apps.mdp.models.gridworld import GridworldSpec
from esl_apps.metrics.models.backend import REFERENCE_MODES, DistanceBackend


@dataclass(frozen=True)
class ExperimentConfig:
    env: GridworldSpec = field(default_factory=GridworldSpec)
    agent: AgentConfig = field(default_factory=AgentConfig)
    backend: DistanceBackend = field(default_factory=DistanceBackend)
    trials: int = 40
    base_seed: int = 0
    reference: str = "optimal_policy"
    output_dir: str = "results"
    workers: int = 1
    name: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1", key="trials")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1", key="workers")
        if self.reference not in dict(REFERENCE_MODES):
            raise ConfigError(f"unknown reference mode {self.reference!r}", key="reference")

    def __str__(self):
        return self.name or f"{self.agent.algorithm_id} on {self.env.label}"

    @property
    def snapshot_cadence(self) -> str:
        return self.agent.snapshot_cadence

    def trial_seed(self, index: int) -> int:
        return self.base_seed + index

    def flat(self) -> dict:
        """Config as the flat key/value mapping config files use."""
        values = {
            "name": self.name,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "backend": self.backend.kind,
            "rollouts": self.backend.rollouts,
            "rollout_cap": self.backend.cap,
            "action_scale": self.backend.action_scale,
            "snapshot_cadence": self.agent.snapshot_cadence,
            "reference": self.reference,
            "output_dir": self.output_dir,
            "workers": self.workers,
        }
        for key, value in asdict(self.env).items():
            values[f"env_{key}"] = list(value) if isinstance(value, tuple) else value
        for key, value in asdict(self.agent).items():
            if key != "snapshot_cadence":
                values[f"agent_{key}"] = value
        return values
