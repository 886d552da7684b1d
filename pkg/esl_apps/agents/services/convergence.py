from typing import Sequence

RETURN_TOL = 1e-9


def _returns(trace) -> list:
    return [getattr(item, "episodic_return", item) for item in trace]


def check_convergence(trace: Sequence, optimal_return: float, window: int = 5) -> bool:
    """True when the last ``window`` evaluation returns all match the optimum.

    ``trace`` may hold snapshots or plain returns.
    """
    if window < 1:
        raise ValueError("convergence window must be >= 1")
    returns = _returns(trace)
    if len(returns) < window:
        return False
    return all(abs(value - optimal_return) <= RETURN_TOL for value in returns[-window:])


def updates_to_convergence(trace: Sequence, optimal_return: float, window: int = 5):
    """Update index at which the window first fires on a finished trace, or None."""
    returns = _returns(trace)
    streak = 0
    for index, value in enumerate(returns):
        streak = streak + 1 if abs(value - optimal_return) <= RETURN_TOL else 0
        if streak >= window:
            return getattr(trace[index], "update_index", index)
    return None
