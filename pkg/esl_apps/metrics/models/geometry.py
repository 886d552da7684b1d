from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from esl_apps.core.exceptions import ConstructionError

DISTANCE_TOL = 1e-9


def _vector(values) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True).ravel()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TrajectoryGeometry:
    """Distances along one training run in occupancy space.

    ``stepwise[k]`` is d(v_k, v_k+1), ``to_reference[k]`` is d(v_k, v_ref)
    and ``deltas[k] = to_reference[k] - to_reference[k + 1]``.
    """

    stepwise: np.ndarray
    to_reference: np.ndarray
    endpoint_distance: float
    reference_mode: str = "optimal_policy"
    reference_source: str = "value_iteration"
    backend: str = "exact_w1"
    returns: Optional[np.ndarray] = None
    reference: object = field(default=None, repr=False)
    policies: tuple = field(default=(), repr=False)
    deltas: np.ndarray = field(init=False)

    def __post_init__(self):
        stepwise = _vector(self.stepwise)
        to_reference = _vector(self.to_reference)
        if to_reference.size != stepwise.size + 1:
            raise ConstructionError(
                f"expected {stepwise.size + 1} distances to the reference, got {to_reference.size}"
            )
        if (stepwise < -DISTANCE_TOL).any() or (to_reference < -DISTANCE_TOL).any():
            raise ConstructionError("distances must be non-negative")
        deltas = to_reference[:-1] - to_reference[1:]
        # exact ties come back with rounding noise; they count as no progress
        deltas = np.where(np.abs(deltas) <= 1e-12, 0.0, deltas)
        object.__setattr__(self, "stepwise", stepwise)
        object.__setattr__(self, "to_reference", to_reference)
        object.__setattr__(self, "deltas", _vector(deltas))
        object.__setattr__(self, "endpoint_distance", float(self.endpoint_distance))
        if self.returns is not None:
            object.__setattr__(self, "returns", _vector(self.returns))
        policies = tuple(self.policies)
        if policies and len(policies) != to_reference.size:
            raise ConstructionError("one policy per distance to the reference is required")
        object.__setattr__(self, "policies", policies)

    @property
    def n_updates(self) -> int:
        return self.stepwise.size

    @property
    def path_length(self) -> float:
        return float(self.stepwise.sum())

    @property
    def final_to_reference(self) -> float:
        return float(self.to_reference[-1])

    def rows(self):
        """(k, x_k, y_k, delta_k, return) rows; y and delta are None at k = N."""
        for k in range(self.n_updates + 1):
            last = k == self.n_updates
            yield (
                k,
                float(self.to_reference[k]),
                None if last else float(self.stepwise[k]),
                None if last else float(self.deltas[k]),
                None if self.returns is None else float(self.returns[k]),
            )


@dataclass(frozen=True)
class IndexReport:
    esl: Optional[float] = None
    omr: Optional[float] = None
    eta_sub: Optional[float] = None
    regret_lhs: Optional[float] = None
    regret_rhs: Optional[float] = None
    bound_gap: Optional[float] = None
    flags: Tuple[str, ...] = ()

    @property
    def regret_analogue(self) -> Optional[float]:
        if self.regret_lhs is None or self.regret_rhs is None:
            return None
        return self.regret_rhs - self.regret_lhs

    def as_dict(self) -> dict:
        return {
            "esl": self.esl,
            "omr": self.omr,
            "eta_sub": self.eta_sub,
            "regret_lhs": self.regret_lhs,
            "regret_rhs": self.regret_rhs,
            "bound_gap": self.bound_gap,
            "flags": list(self.flags),
        }
