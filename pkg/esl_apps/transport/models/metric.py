from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from esl_apps.core.exceptions import ConstructionError


@dataclass(frozen=True, eq=False)
class GroundMetric:
    """Joint state-action metric d_SA = d_S + d_A.

    d_S is the Manhattan distance between state coordinates and d_A the
    discrete action metric scaled by ``action_scale``. Pair index is
    ``s * n_actions + a``.
    """

    state_cost: np.ndarray
    n_actions: int
    action_scale: float = 1.0
    cost: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        state_cost = np.array(self.state_cost, dtype=float, copy=True)
        if state_cost.ndim != 2 or state_cost.shape[0] != state_cost.shape[1]:
            raise ConstructionError("state cost must be a square matrix")
        if self.n_actions < 1:
            raise ConstructionError("n_actions must be >= 1")
        if self.action_scale < 0:
            raise ConstructionError("action_scale must be non-negative")
        n_actions = int(self.n_actions)
        action_cost = self.action_scale * (1.0 - np.eye(n_actions))
        cost = np.repeat(np.repeat(state_cost, n_actions, axis=0), n_actions, axis=1)
        cost += np.tile(action_cost, (state_cost.shape[0], state_cost.shape[0]))
        state_cost.setflags(write=False)
        cost.setflags(write=False)
        object.__setattr__(self, "state_cost", state_cost)
        object.__setattr__(self, "n_actions", n_actions)
        object.__setattr__(self, "action_scale", float(self.action_scale))
        object.__setattr__(self, "cost", cost)

    @classmethod
    def from_coords(cls, coords, n_actions: int, action_scale: float = 1.0) -> "GroundMetric":
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        return cls(cdist(coords, coords, "cityblock"), n_actions, action_scale)

    @classmethod
    def for_mdp(cls, mdp, action_scale: float = 1.0) -> "GroundMetric":
        return cls.from_coords(mdp.state_coords, mdp.n_actions, action_scale)

    @property
    def n_states(self) -> int:
        return self.state_cost.shape[0]

    @property
    def n_pairs(self) -> int:
        return self.cost.shape[0]

    @property
    def diameter(self) -> float:
        return float(self.cost.max())

    def pair_cost(self, rows, cols) -> np.ndarray:
        return self.cost[np.ix_(np.asarray(rows), np.asarray(cols))]

    def axiom_violations(self, rng: np.random.Generator, n_triples: int = 1000, tol: float = 1e-9):
        violations = []
        if not np.allclose(self.cost, self.cost.T, atol=tol):
            violations.append("symmetry")
        if np.abs(np.diag(self.cost)).max() > tol:
            violations.append("zero_diagonal")
        triples = rng.integers(0, self.n_pairs, size=(n_triples, 3))
        i, j, k = triples.T
        if (self.cost[i, k] > self.cost[i, j] + self.cost[j, k] + tol).any():
            violations.append("triangle_inequality")
        return violations
