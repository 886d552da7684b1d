import math
from typing import Optional

from esl_apps.core.exceptions import UsageError
from esl_apps.metrics.models.geometry import DISTANCE_TOL, IndexReport, TrajectoryGeometry
from esl_apps.metrics.services.bounds import check_eta_sub_bound, regret_analogue


def esl(geometry: TrajectoryGeometry, tol: float = DISTANCE_TOL) -> Optional[float]:
    """Path length over the distance from the first policy to the reference."""
    direct = float(geometry.to_reference[0])
    if direct <= tol:
        return None
    return geometry.path_length / direct


def eta_sub(geometry: TrajectoryGeometry, tol: float = DISTANCE_TOL) -> Optional[float]:
    """Path length over the distance between the first and the final policy."""
    if geometry.endpoint_distance <= tol:
        return None
    return geometry.path_length / geometry.endpoint_distance


def _movement_ratio(stepwise, deltas) -> Optional[float]:
    total = float(stepwise.sum())
    if total <= 0.0:
        return None
    return float(stepwise[deltas > 0].sum()) / total


def omr(geometry: TrajectoryGeometry) -> Optional[float]:
    """Share of the path spent on updates that move closer to the reference."""
    return _movement_ratio(geometry.stepwise, geometry.deltas)


def omr_admissible_range(n_updates: int) -> range:
    tail = math.ceil(0.9 * n_updates)
    return range(0, n_updates - tail + 1)


def omr_k(geometry: TrajectoryGeometry, i: int) -> Optional[float]:
    """Movement ratio of the tail of the trace starting at update i."""
    admissible = omr_admissible_range(geometry.n_updates)
    if i not in admissible:
        raise UsageError(
            f"update index {i} outside the admissible range "
            f"[0, {admissible.stop - 1}] for {geometry.n_updates} updates"
        )
    return _movement_ratio(geometry.stepwise[i:], geometry.deltas[i:])


def omr_curve(geometry: TrajectoryGeometry):
    return [(i, omr_k(geometry, i)) for i in omr_admissible_range(geometry.n_updates)]


def index_report(geometry: TrajectoryGeometry, mdp=None, metric=None) -> IndexReport:
    """All indices of one geometry; undefined values are None with a flag."""
    flags = []
    esl_value = esl(geometry)
    if esl_value is None:
        flags.append("esl_undefined_zero_distance")
    omr_value = omr(geometry)
    if omr_value is None:
        flags.append("omr_undefined_zero_path")
    eta_sub_value = eta_sub(geometry)
    if eta_sub_value is None:
        flags.append("eta_sub_undefined_zero_distance")

    bound_gap = None
    if esl_value is not None and eta_sub_value is not None:
        bound_gap = check_eta_sub_bound(
            esl_value,
            eta_sub_value,
            geometry.final_to_reference,
            geometry.endpoint_distance,
        )

    regret_lhs = regret_rhs = None
    if mdp is not None and geometry.reference_mode == "optimal_policy" and geometry.backend == "exact_w1":
        regret_lhs, regret_rhs = regret_analogue(geometry, mdp, metric)
    return IndexReport(
        esl=esl_value,
        omr=omr_value,
        eta_sub=eta_sub_value,
        regret_lhs=regret_lhs,
        regret_rhs=regret_rhs,
        bound_gap=bound_gap,
        flags=tuple(flags),
    )
