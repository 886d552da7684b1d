import logging

import numpy as np

from esl_apps.core.exceptions import UsageError
from esl_apps.mdp.services.dynamics import rollouts
from esl_apps.mdp.services.planning import value_iteration
from esl_apps.metrics.models.backend import REFERENCE_MODES, DistanceBackend
from esl_apps.metrics.models.geometry import TrajectoryGeometry
from esl_apps.occupancy.services.empirical import dataset_from_rollouts, empirical_occupancy
from esl_apps.occupancy.services.evaluation import policy_value
from esl_apps.occupancy.services.exact import exact_discounted_occupancy
from esl_apps.transport.models.metric import GroundMetric
from esl_apps.transport.services.otdd import LabelDistanceCache
from esl_apps.transport.services.pairwise import pairwise_distance_matrix

logger = logging.getLogger(__name__)

OPTIMALITY_TOL = 1e-9


def resolve_reference(mdp, trace, mode: str = "optimal_policy", tol: float = OPTIMALITY_TOL):
    """Reference policy for distance-to-optimal and how it was chosen.

    In ``optimal_policy`` mode a final policy that attains J* is itself
    optimal and is used as the reference; otherwise value iteration's
    policy is.
    """
    if mode not in dict(REFERENCE_MODES):
        raise UsageError(f"unknown reference mode {mode!r}")
    if mode == "final_policy":
        return trace.final, "final_policy"
    optimal, _ = value_iteration(mdp)
    if abs(policy_value(mdp, trace.final) - policy_value(mdp, optimal)) <= tol:
        return trace.final, "final_policy_optimal"
    return optimal, "value_iteration"


class MeasureBuilder:
    """Occupancy (or dataset) per distinct policy, built once per run."""

    def __init__(self, mdp, backend: DistanceBackend, rng: np.random.Generator = None):
        if backend.is_sampled and rng is None:
            raise UsageError(f"backend {backend.kind} needs a random stream")
        self.mdp = mdp
        self.backend = backend
        self.rng = rng
        self.items = []
        self._index = {}

    def index_of(self, policy) -> int:
        key = policy.fingerprint
        if key not in self._index:
            self._index[key] = len(self.items)
            self.items.append(self._build(policy))
        return self._index[key]

    def _build(self, policy):
        mdp, backend = self.mdp, self.backend
        if not backend.is_sampled:
            return exact_discounted_occupancy(mdp, policy)
        episodes = rollouts(mdp, policy, backend.rollouts, self.rng)
        if backend.kind == "empirical_w1":
            return empirical_occupancy(episodes, mdp, cap=backend.cap)
        cap = None if backend.cap is None else backend.cap + 1
        return dataset_from_rollouts(episodes, mdp.n_states, mdp.n_actions, cap=cap)


def trajectory_geometry(
    trace,
    mdp,
    reference=None,
    backend: DistanceBackend = None,
    rng: np.random.Generator = None,
    reference_mode: str = "optimal_policy",
    reference_source: str = None,
    workers: int = 1,
) -> TrajectoryGeometry:
    """Stepwise and to-reference distances of a policy trace.

    Duplicate policies share one measure, so repeated snapshots give
    exactly zero steps.
    """
    if len(trace) < 2:
        raise UsageError("trajectory geometry needs at least two snapshots")
    backend = backend or DistanceBackend()
    if reference is None:
        reference, reference_source = resolve_reference(mdp, trace, reference_mode)
    metric = GroundMetric.for_mdp(mdp, backend.action_scale)

    builder = MeasureBuilder(mdp, backend, rng)
    path = [builder.index_of(snapshot) for snapshot in trace]
    ref = builder.index_of(reference)

    pairs = [(a, b) for a, b in zip(path, path[1:])]
    pairs += [(k, ref) for k in path] + [(path[0], path[-1])]
    pairs = sorted({(min(a, b), max(a, b)) for a, b in pairs if a != b})
    if len(builder.items) < 2:
        distances = np.zeros((1, 1))
    else:
        distances = pairwise_distance_matrix(
            builder.items,
            backend.kind,
            metric,
            pairs=pairs,
            workers=workers,
            cache=LabelDistanceCache(),
        )

    stepwise = [distances[a, b] for a, b in zip(path, path[1:])]
    to_reference = [distances[k, ref] for k in path]
    geometry = TrajectoryGeometry(
        stepwise=stepwise,
        to_reference=to_reference,
        endpoint_distance=distances[path[0], path[-1]],
        reference_mode=reference_mode,
        reference_source=reference_source or reference_mode,
        backend=backend.label,
        returns=trace.returns,
        reference=reference,
        policies=tuple(trace),
    )
    logger.debug(
        "Geometry of %s: %d updates, %d distinct policies, path length %.4f",
        trace.algorithm_id,
        geometry.n_updates,
        len(builder.items),
        geometry.path_length,
    )
    return geometry
