import logging

import numpy as np

from esl_apps.core.exceptions import SolverError, UsageError
from esl_apps.occupancy.models.measure import OccupancyMeasure

logger = logging.getLogger(__name__)


def policy_probs(mdp, policy) -> np.ndarray:
    probs = getattr(policy, "probs", policy)
    if probs.shape != (mdp.n_states, mdp.n_actions):
        raise UsageError(
            f"policy shape {probs.shape} does not match the MDP "
            f"({mdp.n_states}, {mdp.n_actions})"
        )
    return probs


def policy_transition(mdp, probs: np.ndarray) -> np.ndarray:
    """State-to-state kernel P[s, s'] = sum_a pi(a|s) T(s'|s, a)."""
    return np.einsum("sa,sat->st", probs, mdp.transition)


def exact_discounted_occupancy(mdp, policy) -> OccupancyMeasure:
    """Solve (I - gamma P^T) u = (1 - gamma) mu and spread u over pi."""
    probs = policy_probs(mdp, policy)
    kernel = policy_transition(mdp, probs)
    system = np.eye(mdp.n_states) - mdp.gamma * kernel.T
    try:
        state_measure = np.linalg.solve(system, mdp.rho * mdp.mu)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"occupancy system is singular for {mdp}") from exc
    weights = probs * state_measure[:, None]
    return OccupancyMeasure(
        weights=weights,
        n_states=mdp.n_states,
        n_actions=mdp.n_actions,
        kind="discounted",
        gamma=mdp.gamma,
    )


def exact_finite_horizon_occupancy(mdp, policy, horizon: int, stop_at_goal: bool = False) -> OccupancyMeasure:
    """Average state-action marginal over steps 1..H.

    With ``stop_at_goal`` the walk ends on goal entry and visits are
    normalized by the expected episode length instead of H.
    """
    if horizon < 1:
        raise UsageError(f"horizon must be >= 1, got {horizon}")
    probs = policy_probs(mdp, policy)
    kernel = policy_transition(mdp, probs)
    alive = ~mdp.goal_mask if stop_at_goal else np.ones(mdp.n_states, dtype=bool)

    distribution = np.array(mdp.mu, dtype=float)
    visits = np.zeros(mdp.n_states)
    for _ in range(horizon):
        distribution = distribution * alive
        visits += distribution
        distribution = distribution @ kernel

    total = visits.sum()
    if total <= 0:
        raise UsageError("the initial distribution starts every episode at a goal state")
    return OccupancyMeasure(
        weights=probs * (visits / total)[:, None],
        n_states=mdp.n_states,
        n_actions=mdp.n_actions,
        kind="episodic" if stop_at_goal else "finite_horizon",
        horizon=horizon,
    )


def _inflow(mdp, matrix: np.ndarray) -> np.ndarray:
    return np.einsum("sa,sat->t", matrix, mdp.transition)


def bellman_flow_residual(mdp, occupancy: OccupancyMeasure) -> float:
    """Max violation of sum_a v(s,a) = (1-gamma) mu(s) + gamma sum T(s|s',a) v(s',a)."""
    if occupancy.kind != "discounted":
        raise UsageError("the Bellman flow constraint applies to discounted occupancies")
    matrix = occupancy.matrix
    residual = matrix.sum(axis=1) - mdp.rho * mdp.mu - mdp.gamma * _inflow(mdp, matrix)
    return float(np.abs(residual).max())


def finite_horizon_flow_residual(mdp, policy, occupancy: OccupancyMeasure, horizon: int) -> float:
    """Max violation of the H-step flow balance.

    H * sum_a v(s,a) = mu(s) + H * sum T(s|s',a) v(s',a) - d_{H+1}(s), where
    d_{H+1} is the state marginal one step past the horizon.
    """
    if occupancy.kind != "finite_horizon":
        raise UsageError("the H-step flow balance applies to finite-horizon occupancies")
    kernel = policy_transition(mdp, policy_probs(mdp, policy))
    beyond = mdp.mu @ np.linalg.matrix_power(kernel, horizon)
    scaled = horizon * occupancy.matrix
    residual = scaled.sum(axis=1) - mdp.mu - _inflow(mdp, scaled) + beyond
    return float(np.abs(residual).max())


def recover_policy(occupancy: OccupancyMeasure) -> np.ndarray:
    """pi(a|s) = v(s,a) / sum_a' v(s,a'); unvisited states get the uniform row."""
    matrix = occupancy.matrix
    mass = matrix.sum(axis=1, keepdims=True)
    uniform = np.full_like(matrix, 1.0 / occupancy.n_actions)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(mass > 0, matrix / np.where(mass > 0, mass, 1.0), uniform)
