import logging

import numpy as np

from esl_apps.core.exceptions import UsageError
from esl_apps.mdp.services.planning import lipschitz_constant
from esl_apps.occupancy.services.evaluation import policy_value
from esl_apps.occupancy.services.exact import exact_discounted_occupancy
from esl_apps.transport.models.metric import GroundMetric
from esl_apps.transport.services.wasserstein import wasserstein1

logger = logging.getLogger(__name__)


def check_eta_sub_bound(eta: float, eta_sub: float, d_final_optimal: float, d_first_final: float) -> float:
    """Slack of (eta - eta_sub) / eta <= 2 d(v_N, v*) / d(v_0, v_N); >= 0 when it holds."""
    if eta <= 0 or d_first_final <= 0:
        raise UsageError("the eta_sub bound needs positive eta and endpoint distance")
    return 2.0 * d_final_optimal / d_first_final - (eta - eta_sub) / eta


def regret_analogue(geometry, mdp, metric: GroundMetric = None):
    """(sum_k J* - J_k, L_R / rho * sum_k x_k) over every snapshot of the trace.

    ``geometry.reference`` must be an optimal policy and the distances
    exact W1 under ``metric``.
    """
    if geometry.reference_mode != "optimal_policy" or geometry.reference is None:
        raise UsageError("the regret analogue needs an optimal reference policy")
    if geometry.backend != "exact_w1":
        raise UsageError("the regret analogue needs exact W1 distances")
    if not geometry.policies:
        raise UsageError("the geometry carries no snapshots to evaluate")
    action_scale = 1.0 if metric is None else metric.action_scale
    optimal_value = policy_value(mdp, geometry.reference)
    cache = {}
    values = []
    for policy in geometry.policies:
        if policy.fingerprint not in cache:
            cache[policy.fingerprint] = policy_value(mdp, policy)
        values.append(cache[policy.fingerprint])
    lhs = float(np.sum(optimal_value - np.asarray(values)))
    rhs = lipschitz_constant(mdp, action_scale) / mdp.rho * float(geometry.to_reference.sum())
    return lhs, rhs


def performance_difference_gap(mdp, policy, other, metric: GroundMetric = None) -> float:
    """(L_R / rho) W1(v, v') - |J - J'|; non-negative when the bound holds."""
    metric = metric or GroundMetric.for_mdp(mdp)
    distance, _ = wasserstein1(
        exact_discounted_occupancy(mdp, policy),
        exact_discounted_occupancy(mdp, other),
        metric,
    )
    lhs = abs(policy_value(mdp, policy) - policy_value(mdp, other))
    return lipschitz_constant(mdp, metric.action_scale) / mdp.rho * distance - lhs


def crude_sample_constant(diameter: float, n_pairs: int) -> float:
    """diam * sqrt(K) / 2 bounds the expected W1 error of one empirical marginal at unit sample size."""
    return diameter * np.sqrt(n_pairs) / 2.0


def estimation_bound(n_rollouts: int, gamma: float, cap: int, diameter: float, n_pairs: int) -> float:
    """Expected |W1(estimate) - W1(truth)| bound: 2 E / sqrt(M) + gamma^(T+1) diam."""
    if n_rollouts < 1:
        raise UsageError("the estimation bound needs at least one rollout")
    constant = crude_sample_constant(diameter, n_pairs)
    return 2.0 * constant / np.sqrt(n_rollouts) + gamma ** (cap + 1) * diameter
