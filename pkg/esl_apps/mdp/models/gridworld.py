from dataclasses import dataclass
from typing import Tuple

from esl_apps.core.exceptions import ConstructionError

UP, RIGHT, DOWN, LEFT = 0, 1, 2, 3

ACTION_NAMES = ["up", "right", "down", "left"]

# (dx, dy) with the origin at the top-left cell
ACTION_MOVES = {
    UP: (0, -1),
    RIGHT: (1, 0),
    DOWN: (0, 1),
    LEFT: (-1, 0),
}

PERPENDICULAR = {
    UP: (LEFT, RIGHT),
    DOWN: (LEFT, RIGHT),
    RIGHT: (UP, DOWN),
    LEFT: (UP, DOWN),
}

REWARD_KINDS = [
    ("dense", "Negative Manhattan distance to the goal"),
    ("sparse", "Step cost with a bonus on entering the goal"),
]

TRANSITION_KINDS = [
    ("deterministic", "Deterministic moves"),
    ("slip", "Instructed move or a perpendicular slip"),
]

SPARSE_STEP_REWARD = -0.04
SPARSE_GOAL_REWARD = 1.0


@dataclass(frozen=True)
class GridworldSpec:
    width: int = 5
    height: int = 5
    start: Tuple[int, int] = (0, 0)
    goal: Tuple[int, int] = (4, 4)
    reward_kind: str = "dense"
    transition_kind: str = "deterministic"
    slip_prob_main: float = 0.8
    slip_prob_side: float = 0.1
    max_steps: int = 15
    gamma: float = 0.9
    reward_sign: int = -1

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(int(v) for v in self.start))
        object.__setattr__(self, "goal", tuple(int(v) for v in self.goal))
        self.validate()

    def validate(self):
        if self.width < 1 or self.height < 1:
            raise ConstructionError("grid width and height must be positive")
        for label, cell in (("start", self.start), ("goal", self.goal)):
            if len(cell) != 2 or not self.contains(cell):
                raise ConstructionError(
                    f"{label} cell {cell} lies outside the {self.width}x{self.height} grid"
                )
        if self.start == self.goal:
            raise ConstructionError("start and goal cells must differ")
        if self.reward_kind not in dict(REWARD_KINDS):
            raise ConstructionError(f"unknown reward kind {self.reward_kind!r}")
        if self.transition_kind not in dict(TRANSITION_KINDS):
            raise ConstructionError(f"unknown transition kind {self.transition_kind!r}")
        if self.transition_kind == "slip":
            if min(self.slip_prob_main, self.slip_prob_side) < 0:
                raise ConstructionError("slip probabilities must be non-negative")
            if abs(self.slip_prob_main + 2 * self.slip_prob_side - 1.0) > 1e-12:
                raise ConstructionError(
                    "slip_prob_main + 2 * slip_prob_side must equal 1"
                )
        if self.max_steps < 1:
            raise ConstructionError("max_steps must be >= 1")
        if not 0.0 <= self.gamma < 1.0:
            raise ConstructionError("gamma must lie in [0, 1)")
        if self.reward_sign not in (-1, 1):
            raise ConstructionError("reward_sign must be -1 or 1")

    def contains(self, cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def index(self, cell) -> int:
        x, y = cell
        return y * self.width + x

    def cell(self, index: int) -> Tuple[int, int]:
        return index % self.width, index // self.width

    @property
    def n_states(self) -> int:
        return self.width * self.height

    @property
    def label(self) -> str:
        size = f"[{self.width}x{self.height}]"
        kind = self.reward_kind
        if self.transition_kind == "slip":
            kind = f"stochastic {kind}"
        return f"{size} {kind}"


TASKS = {
    "5x5-dense": dict(width=5, height=5, goal=(4, 4), reward_kind="dense"),
    "5x5-sparse-hard": dict(width=5, height=5, goal=(4, 4), reward_kind="sparse"),
    "5x5-sparse-easy": dict(width=5, height=5, goal=(2, 2), reward_kind="sparse"),
    "15x15-dense": dict(width=15, height=15, goal=(14, 14), reward_kind="dense"),
    "15x15-sparse": dict(width=15, height=15, goal=(14, 14), reward_kind="sparse"),
    "5x5-slip-dense": dict(
        width=5, height=5, goal=(4, 4), reward_kind="dense", transition_kind="slip"
    ),
}

DIFFICULTY_TASKS = [
    "5x5-dense",
    "5x5-sparse-hard",
    "5x5-sparse-easy",
    "15x15-dense",
    "15x15-sparse",
]


def task_spec(name: str, **overrides) -> GridworldSpec:
    if name not in TASKS:
        raise ConstructionError(f"unknown task {name!r}; choose from {sorted(TASKS)}")
    return GridworldSpec(**{**TASKS[name], **overrides})
