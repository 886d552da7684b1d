from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from esl_apps.core.exceptions import ConstructionError

ROW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PolicySnapshot:
    """A stochastic policy matrix ``probs[s, a]`` recorded after an update."""

    probs: np.ndarray
    update_index: int = 0
    episodic_return: float = float("nan")

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float, copy=True)
        if probs.ndim != 2:
            raise ConstructionError("policy probs must be a (S, A) matrix")
        if (probs < 0).any():
            raise ConstructionError("policy probabilities must be non-negative")
        deviation = np.abs(probs.sum(axis=1) - 1.0).max()
        if deviation > ROW_TOL:
            raise ConstructionError(
                f"policy rows must sum to 1 (max deviation {deviation:.3e})"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "update_index", int(self.update_index))
        object.__setattr__(self, "episodic_return", float(self.episodic_return))

    @classmethod
    def from_actions(cls, actions, n_actions: int, **kwargs) -> "PolicySnapshot":
        actions = np.asarray(actions, dtype=int)
        probs = np.zeros((actions.size, n_actions))
        probs[np.arange(actions.size), actions] = 1.0
        return cls(probs=probs, **kwargs)

    @classmethod
    def uniform(cls, n_states: int, n_actions: int, **kwargs) -> "PolicySnapshot":
        return cls(probs=np.full((n_states, n_actions), 1.0 / n_actions), **kwargs)

    @property
    def n_states(self) -> int:
        return self.probs.shape[0]

    @property
    def n_actions(self) -> int:
        return self.probs.shape[1]

    @property
    def is_deterministic(self) -> bool:
        return bool(np.all((self.probs == 0.0) | (self.probs == 1.0)))

    @property
    def actions(self) -> np.ndarray:
        return np.argmax(self.probs, axis=1)

    @property
    def fingerprint(self) -> bytes:
        return self.probs.tobytes()

    def same_policy(self, other: "PolicySnapshot") -> bool:
        return np.array_equal(self.probs, other.probs)

    def relabel(self, update_index: int, episodic_return: float) -> "PolicySnapshot":
        return PolicySnapshot(
            probs=self.probs,
            update_index=update_index,
            episodic_return=episodic_return,
        )


@dataclass(frozen=True, eq=False)
class PolicyTrace:
    snapshots: Tuple[PolicySnapshot, ...]
    algorithm_id: str
    seed: int
    converged: bool = False
    updates_to_convergence: Optional[int] = None
    cadence: str = "per_episode"
    state_visits: Optional[np.ndarray] = None
    optimal_return: float = float("nan")
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        snapshots = tuple(self.snapshots)
        if not snapshots:
            raise ConstructionError("a policy trace needs at least one snapshot")
        indices = [snapshot.update_index for snapshot in snapshots]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ConstructionError("snapshot update indices must strictly increase")
        object.__setattr__(self, "snapshots", snapshots)
        if self.state_visits is not None:
            visits = np.array(self.state_visits, dtype=np.int64, copy=True)
            visits.setflags(write=False)
            object.__setattr__(self, "state_visits", visits)

    def __len__(self):
        return len(self.snapshots)

    def __getitem__(self, index):
        return self.snapshots[index]

    def __iter__(self):
        return iter(self.snapshots)

    @property
    def n_updates(self) -> int:
        return len(self.snapshots) - 1

    @property
    def initial(self) -> PolicySnapshot:
        return self.snapshots[0]

    @property
    def final(self) -> PolicySnapshot:
        return self.snapshots[-1]

    @property
    def returns(self):
        return [snapshot.episodic_return for snapshot in self.snapshots]
