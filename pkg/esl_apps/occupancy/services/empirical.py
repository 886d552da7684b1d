import logging
from typing import Optional, Sequence

import numpy as np

from esl_apps.core.exceptions import UsageError
from esl_apps.occupancy.models.dataset import PolicyDataset
from esl_apps.occupancy.models.measure import OccupancyMeasure

logger = logging.getLogger(__name__)

POST_TERMINATION_MODES = [
    ("absorb", "Finished episodes keep emitting (goal, action 0)"),
    ("truncate", "Each step is normalized over the episodes still running"),
]

ABSORBING_ACTION = 0
MISSING = -1


def _pair_table(rollouts, n_actions: int, cap: int, absorb: bool) -> np.ndarray:
    """(N, cap + 1) table of pair indices per time step, MISSING where absent."""
    table = np.full((len(rollouts), cap + 1), MISSING, dtype=np.int64)
    for row, episode in enumerate(rollouts):
        pairs = [state * n_actions + action for state, action in episode.pairs[: cap + 1]]
        table[row, : len(pairs)] = pairs
        if absorb and episode.terminated_at_goal and len(pairs) < cap + 1:
            table[row, len(pairs):] = episode.final_state * n_actions + ABSORBING_ACTION
    return table


def empirical_occupancy(
    rollouts: Sequence,
    mdp,
    cap: Optional[int] = None,
    gamma: Optional[float] = None,
    kind: str = "discounted",
    mode: str = "absorb",
) -> OccupancyMeasure:
    """Occupancy estimated from sampled episodes.

    ``discounted`` weights the per-step empirical marginals t = 0..cap by
    gamma^t and renormalizes; ``episodic`` pools every visited pair before
    termination (or the cap) with equal weight. The cap defaults to
    ``mdp.max_steps``. In ``absorb`` mode a step past the end of an episode
    that ran out of steps carries no mass.
    """
    if not rollouts:
        raise UsageError("empirical occupancy needs at least one rollout")
    if mode not in dict(POST_TERMINATION_MODES):
        raise UsageError(f"unknown post-termination mode {mode!r}")
    gamma = mdp.gamma if gamma is None else gamma
    cap = mdp.max_steps if cap is None else int(cap)
    if cap < 0:
        raise UsageError("the truncation cap must be non-negative")
    n_pairs = mdp.n_states * mdp.n_actions

    if kind == "episodic":
        table = _pair_table(rollouts, mdp.n_actions, cap, absorb=False)
        visited = table[table != MISSING]
        if visited.size == 0:
            raise UsageError("the rollouts contain no steps")
        weights = np.bincount(visited, minlength=n_pairs) / visited.size
        return OccupancyMeasure(
            weights=weights,
            n_states=mdp.n_states,
            n_actions=mdp.n_actions,
            kind="episodic",
            horizon=cap + 1,
            exact=False,
        )
    if kind != "discounted":
        raise UsageError(f"unknown empirical occupancy kind {kind!r}")

    table = _pair_table(rollouts, mdp.n_actions, cap, absorb=mode == "absorb")
    weights = np.zeros(n_pairs)
    for t in range(cap + 1):
        column = table[:, t]
        column = column[column != MISSING]
        if column.size == 0:
            continue
        count = len(rollouts) if mode == "absorb" else column.size
        weights += gamma ** t * np.bincount(column, minlength=n_pairs) / count
    total = weights.sum()
    if total == 0.0:
        raise UsageError("the rollouts contain no steps")
    return OccupancyMeasure(
        weights=weights / total,
        n_states=mdp.n_states,
        n_actions=mdp.n_actions,
        kind="discounted",
        gamma=gamma,
        horizon=cap,
        exact=False,
    )


def dataset_from_rollouts(rollouts: Sequence, n_states: int, n_actions: int, cap: Optional[int] = None) -> PolicyDataset:
    if not rollouts:
        raise UsageError("a policy dataset needs at least one rollout")
    pairs = [pair for episode in rollouts for pair in episode.pairs[:cap]]
    if not pairs:
        raise UsageError("the rollouts contain no state-action pairs")
    states, actions = np.array(pairs, dtype=np.int64).T
    return PolicyDataset(
        states=states,
        actions=actions,
        n_states=n_states,
        n_actions=n_actions,
        source="rollouts",
        n_rollouts=len(rollouts),
        cap=cap,
    )


def dataset_from_occupancy(occupancy: OccupancyMeasure) -> PolicyDataset:
    support = occupancy.support
    return PolicyDataset(
        states=support // occupancy.n_actions,
        actions=support % occupancy.n_actions,
        n_states=occupancy.n_states,
        n_actions=occupancy.n_actions,
        weights=occupancy.weights[support],
        source="exact_weighted",
    )
