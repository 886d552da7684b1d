import numpy as np


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def split_streams(seed: int, count: int = 2):
    """Independent generators derived from one trial seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    cumulative = np.cumsum(probs)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return min(index, len(probs) - 1)
