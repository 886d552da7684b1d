import logging

import numpy as np

from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.core.exceptions import SolverError, UsageError
from esl_apps.mdp.models.tabular import TabularMdp
from esl_apps.occupancy.services.evaluation import state_values
from esl_apps.transport.models.metric import GroundMetric

logger = logging.getLogger(__name__)

TIE_TOL = 1e-8
MAX_SWEEPS = 100_000
MAX_POLISH_ROUNDS = 50


def q_values(mdp: TabularMdp, values: np.ndarray, reward=None, transition=None) -> np.ndarray:
    reward = mdp.reward if reward is None else reward
    transition = mdp.transition if transition is None else transition
    return reward + mdp.gamma * transition @ values


def greedy_actions(q: np.ndarray, goal_mask=None, tie_tol: float = TIE_TOL) -> np.ndarray:
    """Lowest-index argmax of each row, treating values within tie_tol as equal."""
    best = q.max(axis=1, keepdims=True)
    actions = np.argmax(q >= best - tie_tol, axis=1)
    if goal_mask is not None:
        actions[np.asarray(goal_mask, dtype=bool)] = 0
    return actions


def greedy_policy(q: np.ndarray, mdp: TabularMdp = None, tie_tol: float = TIE_TOL, **kwargs) -> PolicySnapshot:
    goal_mask = mdp.goal_mask if mdp is not None else None
    actions = greedy_actions(q, goal_mask=goal_mask, tie_tol=tie_tol)
    return PolicySnapshot.from_actions(actions, q.shape[1], **kwargs)


def value_iteration(mdp: TabularMdp, tol: float = 1e-10):
    """Optimal deterministic policy and its value vector.

    Sweeps until the sup-norm Bellman residual drops below ``tol``, then
    polishes with exact policy evaluation so the returned values are the
    fixed point of the returned policy.
    """
    if tol <= 0:
        raise UsageError("value iteration tolerance must be positive")

    values = np.zeros(mdp.n_states)
    for sweep in range(MAX_SWEEPS):
        updated = q_values(mdp, values).max(axis=1)
        residual = np.abs(updated - values).max()
        values = updated
        if residual < tol:
            break
    else:
        raise SolverError(f"value iteration did not reach tolerance {tol} on {mdp}")

    policy = greedy_policy(q_values(mdp, values), mdp)
    for _ in range(MAX_POLISH_ROUNDS):
        values = state_values(mdp, policy)
        improved = greedy_policy(q_values(mdp, values), mdp)
        if improved.same_policy(policy):
            break
        policy = improved

    logger.debug("Value iteration on %s converged after %d sweeps", mdp, sweep + 1)
    return policy, values


def lipschitz_constant(mdp: TabularMdp, action_scale: float = 1.0) -> float:
    """Largest reward change per unit of joint state-action distance."""
    cost = GroundMetric.for_mdp(mdp, action_scale).cost
    reward = mdp.reward.ravel()
    gaps = np.abs(reward[:, None] - reward[None, :])
    mask = cost > 0
    if not mask.any():
        return 0.0
    return float((gaps[mask] / cost[mask]).max())
