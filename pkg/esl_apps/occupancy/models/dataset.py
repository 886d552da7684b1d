from dataclasses import dataclass
from typing import Optional

import numpy as np

from esl_apps.core.exceptions import ConstructionError, UsageError

DATASET_SOURCES = [
    ("rollouts", "Samples collected from M rollouts capped at T steps"),
    ("exact_weighted", "Support of an exact occupancy with its weights"),
]


@dataclass(frozen=True, eq=False)
class PolicyDataset:
    """Multiset of (state, action) samples; actions act as labels."""

    states: np.ndarray
    actions: np.ndarray
    n_states: int
    n_actions: int
    weights: Optional[np.ndarray] = None
    source: str = "rollouts"
    n_rollouts: Optional[int] = None
    cap: Optional[int] = None

    def __post_init__(self):
        states = np.array(self.states, dtype=np.int64, copy=True).ravel()
        actions = np.array(self.actions, dtype=np.int64, copy=True).ravel()
        if states.size == 0:
            raise ConstructionError("a policy dataset needs at least one sample")
        if states.shape != actions.shape:
            raise ConstructionError("states and actions must have the same length")
        if states.min() < 0 or states.max() >= self.n_states:
            raise ConstructionError("dataset state index out of range")
        if actions.min() < 0 or actions.max() >= self.n_actions:
            raise ConstructionError("dataset action index out of range")
        if self.source not in dict(DATASET_SOURCES):
            raise ConstructionError(f"unknown dataset source {self.source!r}")

        if self.weights is None:
            weights = np.full(states.size, 1.0 / states.size)
        else:
            weights = np.array(self.weights, dtype=float, copy=True).ravel()
            if weights.shape != states.shape or (weights < 0).any() or weights.sum() <= 0:
                raise ConstructionError("dataset weights must be non-negative, one per sample")
            weights = weights / weights.sum()

        for array in (states, actions, weights):
            array.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.states.size

    @property
    def labels(self) -> np.ndarray:
        return np.unique(self.actions)

    @property
    def pair_index(self) -> np.ndarray:
        return self.states * self.n_actions + self.actions

    def pair_distribution(self):
        """Distinct (state, action) pairs and their total weight."""
        pairs, inverse = np.unique(self.pair_index, return_inverse=True)
        totals = np.bincount(inverse, weights=self.weights, minlength=pairs.size)
        return pairs // self.n_actions, pairs % self.n_actions, totals

    def label_weight(self, action: int) -> float:
        return float(self.weights[self.actions == action].sum())

    def state_distribution(self, action: int) -> np.ndarray:
        mask = self.actions == action
        if not mask.any():
            raise UsageError(f"action {action} does not occur in the dataset")
        counts = np.bincount(self.states[mask], weights=self.weights[mask], minlength=self.n_states)
        return counts / counts.sum()
