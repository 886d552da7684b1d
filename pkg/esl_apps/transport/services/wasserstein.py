import logging

import numpy as np
import ot

from esl_apps.core.exceptions import SolverError, UsageError
from esl_apps.transport.models.metric import GroundMetric
from esl_apps.transport.models.plan import TransportPlan

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-9
NUM_ITER_MAX = 1_000_000
DEFAULT_SINKHORN_REG = 0.05


def measure_weights(measure, n_pairs: int) -> np.ndarray:
    weights = np.asarray(getattr(measure, "weights", measure), dtype=float).ravel()
    if weights.size != n_pairs:
        raise UsageError(f"measure has {weights.size} atoms but the metric has {n_pairs}")
    if (weights < 0).any() or abs(weights.sum() - 1.0) > NORMALIZATION_TOL:
        raise UsageError(f"measure is not normalized (total mass {weights.sum()!r})")
    return weights


def emd(a: np.ndarray, b: np.ndarray, cost: np.ndarray):
    """Network simplex on already-restricted supports; returns (coupling, log)."""
    a = np.ascontiguousarray(a / a.sum(), dtype=np.float64)
    b = np.ascontiguousarray(b / b.sum(), dtype=np.float64)
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    coupling, log = ot.emd(a, b, cost, numItermax=NUM_ITER_MAX, log=True)
    if log.get("warning"):
        raise SolverError(f"network simplex did not finish: {log['warning']}")
    return coupling, log


def wasserstein1(mu, nu, metric: GroundMetric):
    """Exact W1 between two occupancy measures under the joint ground metric."""
    a = measure_weights(mu, metric.n_pairs)
    b = measure_weights(nu, metric.n_pairs)
    rows, cols = np.flatnonzero(a), np.flatnonzero(b)
    cost = metric.pair_cost(rows, cols)
    coupling, log = emd(a[rows], b[cols], cost)
    objective = float(np.sum(coupling * cost))
    plan = TransportPlan(
        coupling=coupling,
        objective=objective,
        source_index=rows,
        target_index=cols,
        potentials=(log["u"], log["v"]),
    )
    return objective, plan


def dual_gap(plan: TransportPlan, metric: GroundMetric) -> float:
    """Optimality certificate from the Kantorovich potentials.

    Returns the larger of the primal-dual objective gap and the worst
    violation of u_i + v_j <= c_ij; zero for an optimal plan.
    """
    if plan.potentials is None:
        raise UsageError("plan carries no dual potentials")
    u, v = plan.potentials
    cost = metric.pair_cost(plan.source_index, plan.target_index)
    dual = float(plan.coupling.sum(axis=1) @ u + plan.coupling.sum(axis=0) @ v)
    violation = float(np.max(u[:, None] + v[None, :] - cost, initial=0.0))
    return max(abs(plan.objective - dual), max(violation, 0.0))


def sinkhorn_w1(mu, nu, metric: GroundMetric, reg: float = DEFAULT_SINKHORN_REG) -> float:
    """Entropic approximation of W1; an upper estimate, not an exact distance."""
    a = measure_weights(mu, metric.n_pairs)
    b = measure_weights(nu, metric.n_pairs)
    rows, cols = np.flatnonzero(a), np.flatnonzero(b)
    cost = metric.pair_cost(rows, cols)
    scale = cost.max() if cost.size and cost.max() > 0 else 1.0
    value = ot.sinkhorn2(a[rows], b[cols], cost / scale, reg)
    return float(np.asarray(value).ravel()[0]) * scale
