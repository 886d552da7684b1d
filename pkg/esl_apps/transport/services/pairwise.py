import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from esl_apps.core.exceptions import UsageError
from esl_apps.transport.models.metric import GroundMetric
from esl_apps.transport.services.otdd import LabelDistanceCache, otdd
from esl_apps.transport.services.wasserstein import sinkhorn_w1, wasserstein1

logger = logging.getLogger(__name__)

BACKENDS = [
    ("exact_w1", "Exact W1 between exact occupancy measures"),
    ("empirical_w1", "Exact W1 between occupancies estimated from rollouts"),
    ("otdd", "Dataset distance between rollout datasets"),
    ("sinkhorn", "Entropic approximation of W1 (approximate)"),
]

MEASURE_BACKENDS = ("exact_w1", "empirical_w1", "sinkhorn")


def distance(left, right, backend: str, metric: GroundMetric, cache: LabelDistanceCache = None) -> float:
    if backend in ("exact_w1", "empirical_w1"):
        return wasserstein1(left, right, metric)[0]
    if backend == "sinkhorn":
        return sinkhorn_w1(left, right, metric)
    if backend == "otdd":
        return otdd(left, right, metric, cache=cache)
    raise UsageError(f"unknown distance backend {backend!r}; choose from {dict(BACKENDS)}")


def trajectory_pairs(n_items: int, reference_index: Optional[int] = None) -> list:
    """Consecutive pairs plus every pair with the reference, deduplicated in order."""
    pairs = [(k, k + 1) for k in range(n_items - 1)]
    if reference_index is not None:
        pairs += [(k, reference_index) for k in range(n_items) if k != reference_index]
    seen, ordered = set(), []
    for i, j in pairs:
        key = (min(i, j), max(i, j))
        if key not in seen:
            seen.add(key)
            ordered.append(key)
    return ordered


def pairwise_distance_matrix(
    items: Sequence,
    backend: str,
    metric: GroundMetric,
    pairs: Optional[Iterable[Tuple[int, int]]] = None,
    workers: int = 1,
    cache: LabelDistanceCache = None,
) -> np.ndarray:
    """Symmetric matrix of distances between measures or datasets.

    Only ``pairs`` are evaluated when given; other off-diagonal entries
    are NaN. Entries are assembled in pair order whatever ``workers`` is.
    """
    n_items = len(items)
    if n_items < 2:
        raise UsageError("pairwise distances need at least two items")
    if backend not in dict(BACKENDS):
        raise UsageError(f"unknown distance backend {backend!r}")
    if pairs is None:
        pairs = [(i, j) for i in range(n_items) for j in range(i + 1, n_items)]
    pairs = [(int(i), int(j)) for i, j in pairs if i != j]
    cache = cache if cache is not None else LabelDistanceCache()

    def evaluate(pair):
        i, j = pair
        return distance(items[i], items[j], backend, metric, cache)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, pairs))
    else:
        values = [evaluate(pair) for pair in pairs]

    matrix = np.full((n_items, n_items), np.nan)
    np.fill_diagonal(matrix, 0.0)
    for (i, j), value in zip(pairs, values):
        matrix[i, j] = matrix[j, i] = value
    logger.debug("Evaluated %d %s distances over %d items", len(pairs), backend, n_items)
    return matrix
