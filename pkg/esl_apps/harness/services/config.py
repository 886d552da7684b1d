import logging
from dataclasses import fields
from pathlib import Path

import environ

from esl_apps.agents.models.config import AgentConfig
from esl_apps.core.exceptions import ConfigError, ConstructionError
from esl_apps.harness.models.experiment import ExperimentConfig
from esl_apps.mdp.models.gridworld import DIFFICULTY_TASKS, TASKS, GridworldSpec
from esl_apps.metrics.models.backend import DistanceBackend

logger = logging.getLogger(__name__)

NONE_VALUES = ("", "none", "null")

TOP_LEVEL_CASTS = {
    "name": str,
    "trials": int,
    "base_seed": int,
    "backend": str,
    "rollouts": int,
    "rollout_cap": "optional_int",
    "action_scale": float,
    "snapshot_cadence": str,
    "reference": str,
    "output_dir": str,
    "workers": int,
}


def _dataclass_casts(cls, prefix: str, skip=()) -> dict:
    casts = {}
    for item in fields(cls):
        if item.name in skip:
            continue
        default = item.default
        casts[f"{prefix}{item.name}"] = "cell" if isinstance(default, tuple) else type(default)
    return casts


CASTS = {
    **TOP_LEVEL_CASTS,
    **_dataclass_casts(GridworldSpec, "env_"),
    **_dataclass_casts(AgentConfig, "agent_", skip=("snapshot_cadence",)),
}


def _preset_env(task: str, **overrides) -> dict:
    values = {f"env_{key}": value for key, value in TASKS[task].items()}
    values.update({f"env_{key}": value for key, value in overrides.items()})
    return values


PRESET_AGENTS = {
    "eps0": {"agent_variant": "q_greedy", "agent_epsilon": 0.0},
    "eps1": {"agent_variant": "q_greedy", "agent_epsilon": 1.0},
    "decay": {"agent_variant": "q_decay", "agent_epsilon": 0.9},
    "ucrl2": {"agent_variant": "ucrl2", "agent_delta": 0.1},
    "psrl": {"agent_variant": "psrl"},
}

# benchmark step size for the Q-learning agents on 5x5 grids
BENCHMARK_LEARNING_RATE = 0.2


def _benchmark_agent(agent: str) -> dict:
    keys = dict(PRESET_AGENTS[agent])
    if keys["agent_variant"] in ("q_greedy", "q_decay"):
        keys["agent_learning_rate"] = BENCHMARK_LEARNING_RATE
    return keys


def _build_presets() -> dict:
    presets = {}
    for agent in PRESET_AGENTS:
        agent_keys = _benchmark_agent(agent)
        presets[f"deterministic-{agent}"] = {
            **_preset_env("5x5-dense", max_steps=40),
            **agent_keys,
            "agent_total_episodes": 200,
        }
        presets[f"slippery-{agent}"] = {
            **_preset_env("5x5-slip-dense", max_steps=40),
            **agent_keys,
            "agent_total_episodes": 500,
        }
        presets[f"sparse-{agent}"] = {
            **_preset_env("5x5-sparse-hard", max_steps=40),
            **agent_keys,
            "agent_total_episodes": 500,
        }
        presets[f"rollouts-{agent}"] = {
            **presets[f"slippery-{agent}"],
            "backend": "otdd",
            "rollouts": 6,
        }
    for task in DIFFICULTY_TASKS:
        presets[f"difficulty-{task}"] = {
            **_preset_env(task, max_steps=60),
            **_benchmark_agent("decay"),
            "agent_total_episodes": 500,
            "agent_convergence_window": 50,
        }
    # base config of the delta sweep
    presets["ucrl2-delta"] = {
        **_preset_env("5x5-dense", max_steps=15),
        **PRESET_AGENTS["ucrl2"],
        "agent_total_episodes": 200,
    }
    for name, values in presets.items():
        values.setdefault("name", name)
    return presets


PRESETS = _build_presets()


def _raw(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (tuple, list)):
        return ",".join(str(item) for item in value)
    return str(value)


def read_config_file(path) -> dict:
    """Raw key/value strings of a dotenv-style config file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}", key="config")
    file_env = type("ConfigFileEnv", (environ.Env,), {"ENVIRON": {}})
    file_env.read_env(str(path), overwrite=True, parse_comments=True)
    values = dict(file_env.ENVIRON)
    logger.debug("Read %d keys from %s", len(values), path)
    return values


def parse_overrides(overrides) -> dict:
    values = {}
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value", key=item)
        key, value = item.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _cast(env: environ.Env, key: str):
    cast = CASTS[key]
    raw = env.str(key)
    try:
        if cast == "optional_int":
            return None if raw.lower() in NONE_VALUES else env.int(key)
        if cast == "cell":
            return tuple(env.list(key, cast=int))
        if cast is bool:
            return env.bool(key)
        if cast is int:
            return env.int(key)
        if cast is float:
            return env.float(key)
        return raw
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"cannot parse {key}={raw!r}: {exc}", key=key) from exc


def build_config(values: dict) -> ExperimentConfig:
    unknown = sorted(set(values) - set(CASTS))
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r}", key=unknown[0])
    flat_env = type("FlatConfigEnv", (environ.Env,), {"ENVIRON": {k: _raw(v) for k, v in values.items()}})()
    typed = {key: _cast(flat_env, key) for key in values}

    env_values = {key[4:]: value for key, value in typed.items() if key.startswith("env_")}
    agent_values = {key[6:]: value for key, value in typed.items() if key.startswith("agent_")}
    if "snapshot_cadence" in typed:
        agent_values["snapshot_cadence"] = typed["snapshot_cadence"]
    backend_values = {
        "kind": typed.get("backend", "exact_w1"),
        "rollouts": typed.get("rollouts", 500),
        "cap": typed.get("rollout_cap"),
        "action_scale": typed.get("action_scale", 1.0),
    }
    top = {key: typed[key] for key in ("name", "trials", "base_seed", "reference", "output_dir", "workers") if key in typed}
    try:
        env = GridworldSpec(**env_values)
    except ConstructionError as exc:
        raise ConfigError(f"invalid environment: {exc}", key="env") from exc
    return ExperimentConfig(
        env=env,
        agent=AgentConfig(**agent_values),
        backend=DistanceBackend(**backend_values),
        **top,
    )


def load_config(path=None, preset: str = None, overrides=None, defaults: dict = None, **flags) -> ExperimentConfig:
    """Defaults < preset < config file < key=value overrides < explicit flags."""
    values = dict(defaults or {})
    if preset:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}", key="preset")
        values.update(PRESETS[preset])
    if path:
        values.update(read_config_file(path))
    values.update(parse_overrides(overrides))
    values.update({key: value for key, value in flags.items() if value is not None})
    return build_config(values)


def dump_config(cfg: ExperimentConfig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key}={_raw(value)}" for key, value in cfg.flat().items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
