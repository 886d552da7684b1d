from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from esl_apps.core.exceptions import ConstructionError


class Step(NamedTuple):
    state: int
    action: int
    reward: float
    next_state: int


@dataclass(frozen=True)
class Rollout:
    steps: Tuple[Step, ...]
    terminated_at_goal: bool
    initial_state: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(Step(*step) for step in self.steps))
        if self.steps and self.initial_state is None:
            object.__setattr__(self, "initial_state", self.steps[0].state)
        if self.steps and self.steps[0].state != self.initial_state:
            raise ConstructionError("first step does not leave the initial state")
        for current, following in zip(self.steps, self.steps[1:]):
            if current.next_state != following.state:
                raise ConstructionError("rollout steps do not chain")

    def __len__(self):
        return len(self.steps)

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def total_reward(self) -> float:
        return float(sum(step.reward for step in self.steps))

    @property
    def pairs(self):
        return [(step.state, step.action) for step in self.steps]

    @property
    def final_state(self):
        return self.steps[-1].next_state if self.steps else self.initial_state
