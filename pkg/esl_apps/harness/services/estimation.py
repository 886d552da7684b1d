import logging
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.core.exceptions import UsageError
from esl_apps.mdp.models.gridworld import task_spec
from esl_apps.mdp.services.dynamics import rollouts
from esl_apps.mdp.services.gridworld import build_gridworld
from esl_apps.mdp.services.planning import value_iteration
from esl_apps.metrics.services.bounds import estimation_bound
from esl_apps.occupancy.services.empirical import empirical_occupancy
from esl_apps.occupancy.services.exact import exact_discounted_occupancy
from esl_apps.transport.models.metric import GroundMetric
from esl_apps.transport.services.wasserstein import wasserstein1

logger = logging.getLogger(__name__)

DEFAULT_M_GRID = (10, 40, 160, 640)
DEFAULT_SOFTNESS = (0.1, 0.4, 0.7)
ESTIMATION_MAX_STEPS = 200


def estimation_task(name: str = "5x5-dense"):
    """Gridworld with a long horizon so truncation error is negligible next to sampling error."""
    return build_gridworld(task_spec(name, max_steps=ESTIMATION_MAX_STEPS))


def softened_policy(mdp, actions, epsilon: float) -> PolicySnapshot:
    """Mix a deterministic policy with uniform noise; goal rows stay on action 0."""
    if not 0.0 <= epsilon <= 1.0:
        raise UsageError(f"softening must lie in [0, 1], got {epsilon}")
    n_actions = mdp.n_actions
    probs = np.full((mdp.n_states, n_actions), epsilon / n_actions)
    probs[np.arange(mdp.n_states), actions] += 1.0 - epsilon
    probs[mdp.goal_mask] = 0.0
    probs[mdp.goal_mask, 0] = 1.0
    return PolicySnapshot(probs=probs)


def softened_policy_pairs(mdp, softness: Sequence[float] = DEFAULT_SOFTNESS):
    """Pairs of consecutive softenings of the optimal policy, plus one identical pair."""
    optimal, _ = value_iteration(mdp)
    policies = [softened_policy(mdp, optimal.actions, eps) for eps in softness]
    pairs = list(zip(policies, policies[1:]))
    pairs.append((policies[0], policies[0]))
    return pairs


def loglog_slope(m_grid, errors) -> float:
    return float(np.polyfit(np.log(np.asarray(m_grid, dtype=float)), np.log(np.asarray(errors)), 1)[0])


def estimation_error_experiment(
    mdp=None,
    policy_pairs=None,
    m_grid: Sequence[int] = DEFAULT_M_GRID,
    seeds: int = 20,
    base_seed: int = 0,
    cap: int = None,
    action_scale: float = 1.0,
) -> Tuple[pd.DataFrame, float]:
    """Mean |W1(estimated) - W1(exact)| per rollout count, and its log-log slope.

    Every pair is re-estimated from fresh rollouts for each seed and each
    M; the seed of a draw is (base_seed, seed, M, pair index).
    """
    m_grid = [int(m) for m in m_grid]
    if not m_grid or any(b <= a for a, b in zip(m_grid, m_grid[1:])):
        raise UsageError("the rollout grid must be non-empty and strictly increasing")
    if m_grid[0] < 1:
        raise UsageError("rollout counts must be >= 1")
    if seeds < 1:
        raise UsageError("seeds must be >= 1")
    mdp = mdp if mdp is not None else estimation_task()
    policy_pairs = policy_pairs if policy_pairs is not None else softened_policy_pairs(mdp)
    metric = GroundMetric.for_mdp(mdp, action_scale)
    cap = mdp.max_steps if cap is None else cap

    truths = []
    for left, right in policy_pairs:
        truth, _ = wasserstein1(
            exact_discounted_occupancy(mdp, left), exact_discounted_occupancy(mdp, right), metric
        )
        truths.append(truth)

    rows = []
    for m in m_grid:
        errors = []
        for seed in range(seeds):
            for index, ((left, right), truth) in enumerate(zip(policy_pairs, truths)):
                rng = np.random.default_rng([base_seed, seed, m, index])
                left_hat = empirical_occupancy(rollouts(mdp, left, m, rng), mdp, cap=cap)
                right_hat = empirical_occupancy(rollouts(mdp, right, m, rng), mdp, cap=cap)
                estimate, _ = wasserstein1(left_hat, right_hat, metric)
                errors.append(abs(estimate - truth))
        errors = np.asarray(errors)
        rows.append(
            {
                "m": m,
                "mean_error": float(errors.mean()),
                "std_error": float(errors.std()),
                "bound": estimation_bound(m, mdp.gamma, cap, metric.diameter, metric.n_pairs),
                "n_estimates": errors.size,
            }
        )
        logger.info("M=%d: mean estimation error %.5f over %d estimates", m, errors.mean(), errors.size)

    table = pd.DataFrame(rows)
    slope = loglog_slope(table["m"], table["mean_error"]) if len(table) > 1 else float("nan")
    return table, slope
