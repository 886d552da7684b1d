from dataclasses import dataclass
from typing import Optional

from esl_apps.core.exceptions import ConfigError
from esl_apps.transport.services.pairwise import BACKENDS

REFERENCE_MODES = [
    ("optimal_policy", "Distance-to-optimal against an optimal policy"),
    ("final_policy", "Distance against the last policy of the trace"),
]


@dataclass(frozen=True)
class DistanceBackend:
    """How occupancy distances are obtained for a trace.

    ``rollouts`` and ``cap`` only apply to the sampled backends.
    """

    kind: str = "exact_w1"
    rollouts: int = 500
    cap: Optional[int] = None
    action_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in dict(BACKENDS):
            raise ConfigError(f"unknown backend {self.kind!r}", key="backend")
        if self.rollouts < 1:
            raise ConfigError("rollouts must be >= 1", key="rollouts")
        if self.cap is not None and self.cap < 0:
            raise ConfigError("rollout_cap must be non-negative", key="rollout_cap")
        if self.action_scale < 0:
            raise ConfigError("action_scale must be non-negative", key="action_scale")

    @property
    def is_sampled(self) -> bool:
        return self.kind in ("empirical_w1", "otdd")

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact_w1"

    @property
    def label(self) -> str:
        if not self.is_sampled:
            return self.kind
        cap = "max_steps" if self.cap is None else self.cap
        return f"{self.kind}(M={self.rollouts},T={cap})"
