import logging
import threading

import numpy as np

from esl_apps.core.exceptions import UsageError
from esl_apps.transport.services.wasserstein import emd

logger = logging.getLogger(__name__)


def label_feature_distribution(dataset, action: int) -> np.ndarray:
    """Empirical P(S | A = action) over all states of the dataset."""
    return dataset.state_distribution(action)


def _state_cost(d_s) -> np.ndarray:
    return np.asarray(getattr(d_s, "state_cost", d_s), dtype=float)


class LabelDistanceCache:
    """Inner W1 values between label-conditional state distributions."""

    def __init__(self):
        self._values = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._values)

    def distance(self, alpha: np.ndarray, beta: np.ndarray, state_cost: np.ndarray) -> float:
        key = (alpha.tobytes(), beta.tobytes())
        with self._lock:
            if key in self._values:
                self.hits += 1
                return self._values[key]
        rows, cols = np.flatnonzero(alpha), np.flatnonzero(beta)
        cost = state_cost[np.ix_(rows, cols)]
        coupling, _ = emd(alpha[rows], beta[cols], cost)
        value = float(np.sum(coupling * cost))
        with self._lock:
            self.misses += 1
            self._values[key] = value
            self._values[(key[1], key[0])] = value
        return value


def label_distance_matrix(ds_a, ds_b, d_s, cache: LabelDistanceCache = None):
    state_cost = _state_cost(d_s)
    cache = cache if cache is not None else LabelDistanceCache()
    labels_a, labels_b = ds_a.labels, ds_b.labels
    alphas = {a: label_feature_distribution(ds_a, a) for a in labels_a}
    betas = {b: label_feature_distribution(ds_b, b) for b in labels_b}
    matrix = np.array(
        [[cache.distance(alphas[a], betas[b], state_cost) for b in labels_b] for a in labels_a]
    )
    return labels_a, labels_b, matrix


def otdd(ds_a, ds_b, d_s, cache: LabelDistanceCache = None) -> float:
    """Nested W1 between labelled datasets.

    The joint cost between (s, a) and (s', b) is d_S(s, s') plus the W1
    distance between the state distributions of label a in ds_a and of
    label b in ds_b.
    """
    if len(ds_a) == 0 or len(ds_b) == 0:
        raise UsageError("otdd needs two nonempty datasets")
    state_cost = _state_cost(d_s)
    labels_a, labels_b, label_cost = label_distance_matrix(ds_a, ds_b, state_cost, cache)

    states_a, actions_a, weights_a = ds_a.pair_distribution()
    states_b, actions_b, weights_b = ds_b.pair_distribution()
    label_rows = np.searchsorted(labels_a, actions_a)
    label_cols = np.searchsorted(labels_b, actions_b)
    cost = state_cost[np.ix_(states_a, states_b)] + label_cost[np.ix_(label_rows, label_cols)]
    coupling, _ = emd(weights_a, weights_b, cost)
    return float(np.sum(coupling * cost))
