"""Invariant and bound checks over stored runs and over a task's own policies.

Record checks read the raw stored mappings, so a corrupted store is
checked as written. Every check returns an ``esl_message`` dictionary.
"""

import logging
import math
from typing import Callable, Dict, Iterable, List

import numpy as np

from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.core.app_utils import esl_message
from esl_apps.core.exceptions import VerificationError
from esl_apps.harness.models.record import RunRecord
from esl_apps.metrics.services.bounds import performance_difference_gap
from esl_apps.occupancy.services.exact import bellman_flow_residual, exact_discounted_occupancy
from esl_apps.transport.models.metric import GroundMetric
from esl_apps.transport.services.wasserstein import dual_gap, wasserstein1

logger = logging.getLogger(__name__)

BOUND_TOL = 1e-9

# entropic distances are not metrics, so the triangle check skips them
METRIC_BACKEND_PREFIXES = ("exact_w1", "empirical_w1", "otdd")


def _finite(value) -> bool:
    return value is not None and not (isinstance(value, float) and math.isnan(value))


def _nonnegative_distances(record: RunRecord, tol: float):
    geometry = record.geometry
    values = list(geometry["stepwise"]) + list(geometry["to_reference"]) + [geometry["endpoint_distance"]]
    worst = min(values)
    if worst < -tol:
        return f"negative distance {worst:.3e}"
    return None


def _triangle_inequality(record: RunRecord, tol: float):
    geometry = record.geometry
    if not geometry["backend"].startswith(METRIC_BACKEND_PREFIXES):
        return None
    x = np.asarray(geometry["to_reference"], dtype=float)
    y = np.asarray(geometry["stepwise"], dtype=float)
    slack = y - np.abs(x[:-1] - x[1:])
    if slack.size and slack.min() < -tol:
        k = int(np.argmin(slack))
        return f"|x_{k} - x_{k + 1}| exceeds y_{k} by {-slack[k]:.3e}"
    if y.sum() < geometry["endpoint_distance"] - tol:
        return "path length is shorter than the endpoint distance"
    return None


def _eta_at_least_one(record: RunRecord, tol: float):
    indices = record.indices
    if _finite(indices.get("eta_sub")) and indices["eta_sub"] < 1.0 - tol:
        return f"eta_sub = {indices['eta_sub']:.6f} < 1"
    final_reference = record.geometry.get("reference_source", "").startswith("final_policy")
    if final_reference and _finite(indices.get("esl")) and indices["esl"] < 1.0 - tol:
        return f"esl = {indices['esl']:.6f} < 1"
    return None


def _omr_in_unit_interval(record: RunRecord, tol: float):
    value = record.indices.get("omr")
    if _finite(value) and not (-tol <= value <= 1.0 + tol):
        return f"omr = {value:.6f} outside [0, 1]"
    return None


def _omr_tail_from_start(record: RunRecord, tol: float):
    y = np.asarray(record.geometry["stepwise"], dtype=float)
    deltas = np.asarray(record.geometry["deltas"], dtype=float)
    total = float(y.sum())
    recomputed = float(y[deltas > 0].sum()) / total if total > 0 else None
    stored = record.indices.get("omr")
    if recomputed is None and stored is None:
        return None
    if recomputed is None or stored is None or recomputed != stored:
        return f"omr from update 0 is {recomputed!r}, stored omr is {stored!r}"
    return None


def _eta_sub_bound(record: RunRecord, tol: float):
    gap = record.indices.get("bound_gap")
    if _finite(gap) and gap < -tol:
        return f"eta_sub bound violated by {-gap:.3e}"
    return None


def _regret_analogue(record: RunRecord, tol: float):
    lhs, rhs = record.indices.get("regret_lhs"), record.indices.get("regret_rhs")
    if _finite(lhs) and _finite(rhs) and lhs > rhs + tol:
        return f"summed value gap {lhs:.6f} exceeds {rhs:.6f}"
    return None


RECORD_CHECKS: Dict[str, Callable] = {
    "nonnegative_distances": _nonnegative_distances,
    "triangle_inequality": _triangle_inequality,
    "eta_at_least_one": _eta_at_least_one,
    "omr_in_unit_interval": _omr_in_unit_interval,
    "omr_tail_from_start": _omr_tail_from_start,
    "eta_sub_bound": _eta_sub_bound,
    "regret_analogue": _regret_analogue,
}


def _result(name: str, checked: int, failures: List[str]) -> dict:
    passed = checked - len(failures)
    return esl_message(
        success=not failures,
        message=f"{name}: {passed}/{checked} passed",
        data={"check": name, "checked": checked, "passed": passed, "failed": len(failures)},
        errors=failures,
    )


def verify_records(records: Iterable[RunRecord], tol: float = BOUND_TOL) -> List[dict]:
    """Run every record check over the non-failed runs."""
    runs = [record for record in records if not record.failed and record.geometry]
    results = []
    for name, check in RECORD_CHECKS.items():
        failures = []
        for record in runs:
            problem = check(record, tol)
            if problem:
                failures.append(f"{record.run_id} (seed {record.seed}): {problem}")
        results.append(_result(name, len(runs), failures))
    return results


def random_policy(mdp, rng: np.random.Generator) -> PolicySnapshot:
    """Half the draws are deterministic, half are Dirichlet rows."""
    if rng.random() < 0.5:
        return PolicySnapshot.from_actions(rng.integers(mdp.n_actions, size=mdp.n_states), mdp.n_actions)
    return PolicySnapshot(probs=rng.dirichlet(np.ones(mdp.n_actions), size=mdp.n_states))


def verify_model(mdp, rng: np.random.Generator, n_pairs: int = 50, tol: float = BOUND_TOL, action_scale: float = 1.0) -> List[dict]:
    """Bounds and normalizations over random policy pairs on one task."""
    metric = GroundMetric.for_mdp(mdp, action_scale)
    failures = {name: [] for name in ("performance_difference", "bellman_flow", "normalization", "plan_marginals", "dual_gap")}
    for index in range(n_pairs):
        policy, other = random_policy(mdp, rng), random_policy(mdp, rng)
        occ, other_occ = exact_discounted_occupancy(mdp, policy), exact_discounted_occupancy(mdp, other)
        gap = performance_difference_gap(mdp, policy, other, metric)
        if gap < -tol:
            failures["performance_difference"].append(f"pair {index}: slack {gap:.3e}")
        residual = bellman_flow_residual(mdp, occ)
        if residual > tol:
            failures["bellman_flow"].append(f"pair {index}: residual {residual:.3e}")
        mass = abs(occ.weights.sum() - 1.0)
        if mass > tol:
            failures["normalization"].append(f"pair {index}: mass off by {mass:.3e}")
        _, plan = wasserstein1(occ, other_occ, metric)
        error = plan.marginal_errors(occ.weights[plan.source_index], other_occ.weights[plan.target_index])
        if error > 1e-7:
            failures["plan_marginals"].append(f"pair {index}: marginal error {error:.3e}")
        certificate = dual_gap(plan, metric)
        if certificate > 1e-7:
            failures["dual_gap"].append(f"pair {index}: dual gap {certificate:.3e}")
    return [_result(name, n_pairs, problems) for name, problems in failures.items()]


def bound_gaps(records: Iterable[RunRecord]) -> List[float]:
    return [
        record.indices["bound_gap"]
        for record in records
        if not record.failed and _finite(record.indices.get("bound_gap"))
    ]


def assert_all(results: Iterable[dict]):
    results = list(results)
    failed = [result for result in results if not result["success"]]
    if failed:
        names = ", ".join(result["data"]["check"] for result in failed)
        raise VerificationError(
            f"{len(failed)} of {len(results)} checks failed: {names}",
            failures=[error for result in failed for error in result["errors"]],
        )
    return results
