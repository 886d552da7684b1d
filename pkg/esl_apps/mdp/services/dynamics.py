from typing import Tuple

import numpy as np

from esl_apps.agents.models.policy import PolicySnapshot
from esl_apps.core.exceptions import UsageError
from esl_apps.core.sampling import sample_index
from esl_apps.mdp.models.rollout import Rollout, Step
from esl_apps.mdp.models.tabular import TabularMdp
from esl_apps.occupancy.services.evaluation import policy_value


def _check_indices(mdp: TabularMdp, s: int, a: int):
    if not 0 <= s < mdp.n_states:
        raise UsageError(f"state {s} out of range [0, {mdp.n_states})")
    if not 0 <= a < mdp.n_actions:
        raise UsageError(f"action {a} out of range [0, {mdp.n_actions})")


def check_policy_shape(mdp: TabularMdp, policy: PolicySnapshot):
    if policy.probs.shape != (mdp.n_states, mdp.n_actions):
        raise UsageError(
            f"policy shape {policy.probs.shape} does not match the MDP "
            f"({mdp.n_states}, {mdp.n_actions})"
        )


def step(mdp: TabularMdp, s: int, a: int, rng: np.random.Generator) -> Tuple[int, float]:
    s, a = int(s), int(a)
    _check_indices(mdp, s, a)
    next_state = sample_index(mdp.transition[s, a], rng)
    return next_state, float(mdp.reward[s, a])


def rollout(mdp: TabularMdp, policy: PolicySnapshot, rng: np.random.Generator) -> Rollout:
    check_policy_shape(mdp, policy)
    s = start = sample_index(mdp.mu, rng)
    steps = []
    terminated = s in mdp.goal_states
    while not terminated and len(steps) < mdp.max_steps:
        a = sample_index(policy.probs[s], rng)
        s_next, r = step(mdp, s, a, rng)
        steps.append(Step(s, a, r, s_next))
        s = s_next
        terminated = s in mdp.goal_states
    return Rollout(steps=tuple(steps), terminated_at_goal=terminated, initial_state=start)


def rollouts(mdp: TabularMdp, policy: PolicySnapshot, count: int, rng: np.random.Generator):
    return [rollout(mdp, policy, rng) for _ in range(count)]


def greedy_rollout_return(mdp: TabularMdp, policy: PolicySnapshot) -> float:
    """Undiscounted return of the deterministic rollout of a deterministic policy."""
    check_policy_shape(mdp, policy)
    actions = policy.actions
    s = int(np.argmax(mdp.mu))
    total = 0.0
    for _ in range(mdp.max_steps):
        if s in mdp.goal_states:
            break
        a = actions[s]
        total += mdp.reward[s, a]
        s = int(np.argmax(mdp.transition[s, a]))
    return float(total)


def evaluation_return(mdp: TabularMdp, policy: PolicySnapshot) -> float:
    deterministic_start = np.count_nonzero(mdp.mu) == 1
    if mdp.is_deterministic and policy.is_deterministic and deterministic_start:
        return greedy_rollout_return(mdp, policy)
    return policy_value(mdp, policy)
