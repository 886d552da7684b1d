from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Optional

import numpy as np

from esl_apps.core.exceptions import ConstructionError

STOCHASTIC_TOL = 1e-12


def _frozen(array, dtype=float) -> np.ndarray:
    array = np.array(array, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TabularMdp:
    """Finite MDP (S, A, T, R, gamma, mu) with an episode step cap.

    ``transition[s, a, s']`` and ``reward[s, a]`` hold the full model;
    ``state_coords[s]`` is the integer coordinate vector the ground metric
    is built from.
    """

    transition: np.ndarray
    reward: np.ndarray
    gamma: float
    mu: np.ndarray
    max_steps: int
    goal_states: FrozenSet[int] = frozenset()
    state_coords: Optional[np.ndarray] = None
    name: str = ""
    n_states: int = field(init=False)
    n_actions: int = field(init=False)

    def __post_init__(self):
        transition = _frozen(self.transition)
        reward = _frozen(self.reward)
        mu = _frozen(self.mu)

        if transition.ndim != 3 or transition.shape[0] != transition.shape[2]:
            raise ConstructionError(
                f"transition must have shape (S, A, S), got {transition.shape}"
            )
        n_states, n_actions, _ = transition.shape
        if reward.shape != (n_states, n_actions):
            raise ConstructionError(
                f"reward must have shape {(n_states, n_actions)}, got {reward.shape}"
            )
        if mu.shape != (n_states,):
            raise ConstructionError(f"mu must have shape ({n_states},), got {mu.shape}")
        if (transition < 0).any():
            raise ConstructionError("transition probabilities must be non-negative")
        row_error = np.abs(transition.sum(axis=2) - 1.0).max()
        if row_error > STOCHASTIC_TOL:
            raise ConstructionError(
                f"transition rows must sum to 1 (max deviation {row_error:.3e})"
            )
        if (mu < 0).any() or abs(mu.sum() - 1.0) > STOCHASTIC_TOL:
            raise ConstructionError("mu must be a probability distribution")
        if not 0.0 <= self.gamma < 1.0:
            raise ConstructionError(f"gamma must lie in [0, 1), got {self.gamma}")
        if int(self.max_steps) < 1:
            raise ConstructionError(f"max_steps must be >= 1, got {self.max_steps}")
        goals = frozenset(int(s) for s in self.goal_states)
        if any(not 0 <= s < n_states for s in goals):
            raise ConstructionError("goal states out of range")

        coords = self.state_coords
        if coords is None:
            coords = np.arange(n_states).reshape(-1, 1)
        coords = _frozen(coords, dtype=np.int64)
        if coords.shape[0] != n_states:
            raise ConstructionError("state_coords must have one row per state")

        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "reward", reward)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "max_steps", int(self.max_steps))
        object.__setattr__(self, "goal_states", goals)
        object.__setattr__(self, "state_coords", coords)
        object.__setattr__(self, "n_states", n_states)
        object.__setattr__(self, "n_actions", n_actions)

    def __str__(self):
        return f"{self.name or 'mdp'} (S={self.n_states}, A={self.n_actions})"

    @property
    def rho(self) -> float:
        return 1.0 - self.gamma

    @property
    def n_pairs(self) -> int:
        return self.n_states * self.n_actions

    @cached_property
    def goal_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_states, dtype=bool)
        mask[list(self.goal_states)] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def is_deterministic(self) -> bool:
        return bool(np.all((self.transition == 0.0) | (self.transition == 1.0)))

    def identical_to(self, other: "TabularMdp") -> bool:
        return (
            self.gamma == other.gamma
            and self.max_steps == other.max_steps
            and self.goal_states == other.goal_states
            and np.array_equal(self.transition, other.transition)
            and np.array_equal(self.reward, other.reward)
            and np.array_equal(self.mu, other.mu)
            and np.array_equal(self.state_coords, other.state_coords)
        )
