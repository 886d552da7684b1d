import logging
from dataclasses import replace
from pathlib import Path
from typing import Dict, Sequence

import pandas as pd

from esl_apps.core.exceptions import ConfigError, UsageError
from esl_apps.harness.models.experiment import ExperimentConfig
from esl_apps.harness.services.aggregation import aggregate
from esl_apps.harness.services.estimation import DEFAULT_M_GRID, estimation_error_experiment, estimation_task
from esl_apps.harness.services.runner import run_experiment, slug
from esl_apps.mdp.models.gridworld import DIFFICULTY_TASKS, task_spec

logger = logging.getLogger(__name__)

SWEEP_KINDS = [
    ("difficulty", "Same agent across the five task-difficulty grids"),
    ("ucrl_delta", "UCRL2 confidence parameter"),
    ("rollout_count", "Rollouts per policy dataset for the OTDD backend"),
    ("estimation_error", "Empirical W1 error against exact W1 per rollout count"),
]

UCRL_DELTAS = (0.1, 0.3, 0.5, 0.7, 0.9)
ROLLOUT_COUNTS = (1, 3, 6, 9)


def _row(setting, cfg: ExperimentConfig, records) -> dict:
    row = aggregate(records, cfg.agent.algorithm_id)
    return {
        "setting": setting,
        **row.csv_row(),
        "n_trials": row.n_trials,
        "n_esl_defined": row.n_esl_defined,
        "n_failed": row.n_failed,
    }


def _run_settings(settings: Dict[str, ExperimentConfig], sweep_dir: Path, workers: int = None) -> pd.DataFrame:
    rows = []
    for setting, cfg in settings.items():
        path = sweep_dir / f"{slug(setting)}.jsonl"
        logger.info("Sweep setting %s -> %s", setting, path)
        records = run_experiment(cfg, path=path, workers=workers)
        rows.append(_row(setting, cfg, records))
    return pd.DataFrame(rows)


def task_difficulty_sweep(
    base: ExperimentConfig,
    tasks: Sequence[str] = DIFFICULTY_TASKS,
    trials: int = None,
    workers: int = None,
) -> pd.DataFrame:
    """Mean ESL of one agent per task, in the order ``tasks`` are given.

    Horizon, discount and dynamics come from ``base.env``; the grid,
    goal and reward shape from each named task.
    """
    if not tasks:
        raise UsageError("a difficulty sweep needs at least one task")
    settings = {}
    for task in tasks:
        env = task_spec(
            task,
            max_steps=base.env.max_steps,
            gamma=base.env.gamma,
            transition_kind=base.env.transition_kind,
        )
        settings[task] = replace(base, env=env, trials=trials or base.trials, name=f"{base.name or 'sweep'}-{task}")
    return _run_settings(settings, Path(base.output_dir) / "difficulty", workers)


def ucrl_delta_sweep(base: ExperimentConfig, deltas: Sequence[float] = UCRL_DELTAS, workers: int = None) -> pd.DataFrame:
    if base.agent.variant != "ucrl2":
        raise ConfigError("the confidence sweep needs agent_variant=ucrl2", key="agent_variant")
    settings = {
        f"delta={delta}": replace(base, agent=replace(base.agent, delta=delta), name=f"{base.name or 'sweep'}-delta={delta}")
        for delta in deltas
    }
    return _run_settings(settings, Path(base.output_dir) / "ucrl_delta", workers)


def rollout_count_sweep(base: ExperimentConfig, counts: Sequence[int] = ROLLOUT_COUNTS, workers: int = None) -> pd.DataFrame:
    kind = base.backend.kind if base.backend.is_sampled else "otdd"
    settings = {
        f"M={count}": replace(
            base,
            backend=replace(base.backend, kind=kind, rollouts=count),
            name=f"{base.name or 'sweep'}-M={count}",
        )
        for count in counts
    }
    return _run_settings(settings, Path(base.output_dir) / "rollout_count", workers)


def run_sweep(kind: str, base: ExperimentConfig, values: Sequence = None, workers: int = None) -> pd.DataFrame:
    """Per-setting table for one sweep kind; ``values`` replaces the default grid."""
    if kind == "difficulty":
        return task_difficulty_sweep(base, tasks=values or DIFFICULTY_TASKS, workers=workers)
    if kind == "ucrl_delta":
        return ucrl_delta_sweep(base, deltas=values or UCRL_DELTAS, workers=workers)
    if kind == "rollout_count":
        return rollout_count_sweep(base, counts=values or ROLLOUT_COUNTS, workers=workers)
    if kind == "estimation_error":
        mdp = estimation_task()
        table, slope = estimation_error_experiment(
            mdp,
            m_grid=values or DEFAULT_M_GRID,
            seeds=base.trials,
            base_seed=base.base_seed,
            action_scale=base.backend.action_scale,
        )
        table["slope"] = slope
        return table
    raise UsageError(f"unknown sweep kind {kind!r}; choose from {[name for name, _ in SWEEP_KINDS]}")
