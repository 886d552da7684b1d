from dataclasses import dataclass
from typing import Optional

import numpy as np

from esl_apps.core.exceptions import ConstructionError

NORMALIZATION_TOL = 1e-9

OCCUPANCY_KINDS = [
    ("discounted", "Discounted visitation, truncated at T when estimated"),
    ("finite_horizon", "Visitation averaged over the first H steps"),
    ("episodic", "Visitation before termination, normalized by episode length"),
]


@dataclass(frozen=True, eq=False)
class OccupancyMeasure:
    """Normalized distribution over state-action pairs.

    ``weights`` is flat with pair index ``s * n_actions + a``.
    ``horizon`` is the truncation T for discounted estimates and H for
    the finite-horizon kinds.
    """

    weights: np.ndarray
    n_states: int
    n_actions: int
    kind: str = "discounted"
    gamma: Optional[float] = None
    horizon: Optional[int] = None
    exact: bool = True

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float, copy=True).ravel()
        if weights.size != self.n_states * self.n_actions:
            raise ConstructionError(
                f"expected {self.n_states * self.n_actions} weights, got {weights.size}"
            )
        if self.kind not in dict(OCCUPANCY_KINDS):
            raise ConstructionError(f"unknown occupancy kind {self.kind!r}")
        if (weights < -NORMALIZATION_TOL).any():
            raise ConstructionError("occupancy weights must be non-negative")
        weights = np.clip(weights, 0.0, None)
        total = weights.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ConstructionError(f"occupancy weights sum to {total!r}, expected 1")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    def __str__(self):
        origin = "exact" if self.exact else "empirical"
        return f"{origin} {self.kind} occupancy over {self.n_pairs} pairs"

    @property
    def n_pairs(self) -> int:
        return self.weights.size

    @property
    def matrix(self) -> np.ndarray:
        return self.weights.reshape(self.n_states, self.n_actions)

    @property
    def state_marginal(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.weights)

    def expectation(self, values: np.ndarray) -> float:
        return float(self.weights @ np.asarray(values, dtype=float).ravel())
