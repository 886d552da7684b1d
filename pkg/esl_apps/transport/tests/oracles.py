"""Dense linear-programming references for the transport tests."""

import numpy as np
from scipy.optimize import linprog


def lp_transport(a, b, cost) -> float:
    """min <C, X> over couplings of a and b, solved as a dense LP."""
    a, b, cost = np.asarray(a, float), np.asarray(b, float), np.asarray(cost, float)
    n, m = cost.shape
    rows = np.zeros((n, n * m))
    cols = np.zeros((m, n * m))
    for i in range(n):
        rows[i, i * m : (i + 1) * m] = 1.0
    for j in range(m):
        cols[j, j::m] = 1.0
    result = linprog(
        cost.ravel(),
        A_eq=np.vstack([rows, cols]),
        b_eq=np.concatenate([a / a.sum(), b / b.sum()]),
        bounds=(0, None),
        method="highs",
    )
    assert result.success, result.message
    return float(result.fun)


def nested_dataset_distance(ds_a, ds_b, state_cost) -> float:
    """Dataset distance with every sample its own atom and every label cost its own LP."""

    def conditional(dataset, label):
        mask = dataset.actions == label
        counts = np.bincount(dataset.states[mask], weights=dataset.weights[mask], minlength=dataset.n_states)
        return counts / counts.sum()

    label_cost = {}
    for a in np.unique(ds_a.actions):
        for b in np.unique(ds_b.actions):
            alpha, beta = conditional(ds_a, a), conditional(ds_b, b)
            rows, cols = np.flatnonzero(alpha), np.flatnonzero(beta)
            label_cost[a, b] = lp_transport(alpha[rows], beta[cols], state_cost[np.ix_(rows, cols)])

    cost = np.array(
        [
            [state_cost[s, t] + label_cost[a, b] for t, b in zip(ds_b.states, ds_b.actions)]
            for s, a in zip(ds_a.states, ds_a.actions)
        ]
    )
    return lp_transport(ds_a.weights, ds_b.weights, cost)
