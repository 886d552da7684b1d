"""Occupancy-measure geometry of tabular RL training runs."""

__version__ = "0.1.0"
