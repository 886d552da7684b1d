import logging

import numpy as np

from esl_apps.mdp.models.gridworld import (
    ACTION_MOVES,
    PERPENDICULAR,
    SPARSE_GOAL_REWARD,
    SPARSE_STEP_REWARD,
    GridworldSpec,
)
from esl_apps.mdp.models.tabular import TabularMdp

logger = logging.getLogger(__name__)

N_ACTIONS = 4


def _move(spec: GridworldSpec, cell, action):
    dx, dy = ACTION_MOVES[action]
    target = (cell[0] + dx, cell[1] + dy)
    # off-grid moves keep the agent in place
    return target if spec.contains(target) else cell


def _action_outcomes(spec: GridworldSpec, action):
    if spec.transition_kind == "deterministic":
        return [(action, 1.0)]
    side_a, side_b = PERPENDICULAR[action]
    return [
        (action, spec.slip_prob_main),
        (side_a, spec.slip_prob_side),
        (side_b, spec.slip_prob_side),
    ]


def build_gridworld(spec: GridworldSpec) -> TabularMdp:
    spec.validate()
    n_states = spec.n_states
    goal = spec.index(spec.goal)

    coords = np.array([spec.cell(s) for s in range(n_states)], dtype=np.int64)
    transition = np.zeros((n_states, N_ACTIONS, n_states))
    reward = np.zeros((n_states, N_ACTIONS))
    goal_distance = np.abs(coords - np.array(spec.goal)).sum(axis=1)

    for s in range(n_states):
        if s == goal:
            transition[s, :, s] = 1.0
            continue
        cell = spec.cell(s)
        for a in range(N_ACTIONS):
            for moved_action, prob in _action_outcomes(spec, a):
                if prob == 0.0:
                    continue
                s_next = spec.index(_move(spec, cell, moved_action))
                transition[s, a, s_next] += prob
            if spec.reward_kind == "dense":
                reward[s, a] = spec.reward_sign * goal_distance[s]
            else:
                p_goal = transition[s, a, goal]
                reward[s, a] = p_goal * SPARSE_GOAL_REWARD + (1.0 - p_goal) * SPARSE_STEP_REWARD

    mu = np.zeros(n_states)
    mu[spec.index(spec.start)] = 1.0

    mdp = TabularMdp(
        transition=transition,
        reward=reward,
        gamma=spec.gamma,
        mu=mu,
        max_steps=spec.max_steps,
        goal_states=frozenset([goal]),
        state_coords=coords,
        name=spec.label,
    )
    logger.debug("Built gridworld %s", mdp)
    return mdp
