from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Optimal coupling between the supports of two measures.

    Rows follow ``source_index`` and columns ``target_index`` (pair indices
    into the ground metric). ``potentials`` holds the Kantorovich dual
    pair returned by the network simplex.
    """

    coupling: np.ndarray
    objective: float
    source_index: np.ndarray
    target_index: np.ndarray
    potentials: Optional[tuple] = None

    def marginal_errors(self, source_weights, target_weights) -> float:
        rows = np.abs(self.coupling.sum(axis=1) - source_weights).max(initial=0.0)
        cols = np.abs(self.coupling.sum(axis=0) - target_weights).max(initial=0.0)
        return float(max(rows, cols))
