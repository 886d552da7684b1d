import logging
from typing import Optional

import numpy as np

from esl_apps.core.exceptions import SolverError, UsageError
from esl_apps.occupancy.services.exact import (
    exact_discounted_occupancy,
    policy_probs,
    policy_transition,
)

logger = logging.getLogger(__name__)

VALUE_ROUTES = ("value", "occupancy")


def state_values(mdp, policy) -> np.ndarray:
    probs = policy_probs(mdp, policy)
    kernel = policy_transition(mdp, probs)
    rewards = (probs * mdp.reward).sum(axis=1)
    try:
        return np.linalg.solve(np.eye(mdp.n_states) - mdp.gamma * kernel, rewards)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"policy evaluation system is singular for {mdp}") from exc


def policy_value(mdp, policy, route: str = "value") -> float:
    """Discounted objective J = E_mu[V_pi] = E_v[R] / (1 - gamma)."""
    if route == "value":
        return float(mdp.mu @ state_values(mdp, policy))
    if route == "occupancy":
        occupancy = exact_discounted_occupancy(mdp, policy)
        return occupancy.expectation(mdp.reward) / mdp.rho
    raise UsageError(f"unknown value route {route!r}; choose from {VALUE_ROUTES}")


def stationarity_rel_error(mdp, policy, occupancy, eval_rollouts) -> Optional[float]:
    """Percent gap between E_v[R] * E[H] and E[sum R] over evaluation episodes.

    Returns None when the mean evaluation return is zero.
    """
    policy_probs(mdp, policy)
    if not eval_rollouts:
        raise UsageError("stationarity check needs at least one evaluation rollout")
    mean_length = float(np.mean([len(episode) for episode in eval_rollouts]))
    mean_return = float(np.mean([episode.total_reward for episode in eval_rollouts]))
    if mean_return == 0.0:
        logger.warning("Mean evaluation return is zero; relative error undefined")
        return None
    expected_reward = occupancy.expectation(mdp.reward)
    return 100.0 * (expected_reward * mean_length - mean_return) / mean_return


def total_variation(p, q) -> float:
    p = getattr(p, "weights", p)
    q = getattr(q, "weights", q)
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
