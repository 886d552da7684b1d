import pytest

from esl_apps.core.exceptions import ConfigError
from esl_apps.harness.services.config import PRESETS, dump_config, load_config, parse_overrides


def test_defaults():
    cfg = load_config()
    assert cfg.trials == 40
    assert cfg.env.width == 5
    assert cfg.agent.variant == "q_decay"
    assert cfg.backend.kind == "exact_w1"


@pytest.mark.parametrize("name", ["deterministic-ucrl2", "slippery-psrl", "difficulty-15x15-sparse", "rollouts-decay"])
def test_presets_build(name):
    cfg = load_config(preset=name)
    assert cfg.name == name


def test_benchmark_presets():
    assert load_config(preset="deterministic-eps0").agent.epsilon == 0.0
    slip = load_config(preset="slippery-decay")
    assert slip.env.transition_kind == "slip"
    assert slip.env.max_steps == 40
    assert load_config(preset="rollouts-psrl").backend.kind == "otdd"
    assert set(PRESETS) >= {f"deterministic-{agent}" for agent in ("eps0", "eps1", "decay", "ucrl2", "psrl")}


def test_deterministic_presets_leave_room_to_explore():
    uniform = load_config(preset="deterministic-eps1")
    assert uniform.env.max_steps == 40
    assert uniform.agent.learning_rate == pytest.approx(0.2)
    assert load_config(preset="sparse-decay").env.max_steps == 40
    assert load_config(preset="deterministic-ucrl2").agent.learning_rate == pytest.approx(0.1)
    sweep = load_config(preset="ucrl2-delta")
    assert sweep.env.max_steps == 15
    assert sweep.agent.total_episodes == 200


def test_config_file_is_parsed(tmp_path):
    path = tmp_path / "ucrl.env"
    path.write_text(
        "# confidence sweep point\n"
        "agent_variant=ucrl2\n"
        "agent_delta=0.3\n"
        "env_goal=2,2\n"
        "rollout_cap=none\n"
        "agent_stop_on_convergence=false\n"
    )
    cfg = load_config(path)
    assert cfg.agent.variant == "ucrl2"
    assert cfg.agent.delta == pytest.approx(0.3)
    assert cfg.env.goal == (2, 2)
    assert cfg.backend.cap is None
    assert cfg.agent.stop_on_convergence is False


def test_precedence(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("trials=7\nbase_seed=3\n")
    cfg = load_config(path, preset="deterministic-decay", overrides=["trials=4"], base_seed=11)
    assert cfg.trials == 4
    assert cfg.base_seed == 11
    assert cfg.agent.total_episodes == 200


def test_defaults_sit_below_everything():
    cfg = load_config(overrides=["workers=2"], defaults={"workers": 5, "output_dir": "out"})
    assert cfg.workers == 2
    assert cfg.output_dir == "out"


@pytest.mark.parametrize(
    "overrides, key",
    [
        (["colour=blue"], "colour"),
        (["trials=many"], "trials"),
        (["trials=0"], "trials"),
        (["env_goal=9,9"], "env"),
        (["backend=w2"], "backend"),
        (["agent_variant=sarsa"], "agent_variant"),
        (["reference=best"], "reference"),
    ],
)
def test_bad_values_name_their_key(overrides, key):
    with pytest.raises(ConfigError) as excinfo:
        load_config(overrides=overrides)
    assert excinfo.value.key == key


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError) as excinfo:
        load_config(tmp_path / "nope.env")
    assert excinfo.value.key == "config"


def test_unknown_preset():
    with pytest.raises(ConfigError) as excinfo:
        load_config(preset="no-such-preset")
    assert excinfo.value.key == "preset"


def test_malformed_override():
    with pytest.raises(ConfigError):
        parse_overrides(["trials"])


def test_dumped_config_loads_back(tmp_path):
    cfg = load_config(preset="slippery-ucrl2", overrides=["trials=3", "rollout_cap=12"])
    assert load_config(dump_config(cfg, tmp_path / "cfg.env")) == cfg
