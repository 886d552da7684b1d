from dataclasses import replace

import numpy as np
import pytest

from esl_apps.core.exceptions import ConfigError, UsageError
from esl_apps.core.factories import AgentConfigFactory, DistanceBackendFactory, ExperimentConfigFactory
from esl_apps.harness.services.estimation import (
    estimation_error_experiment,
    estimation_task,
    loglog_slope,
    softened_policy,
    softened_policy_pairs,
)
from esl_apps.harness.services.sweeps import run_sweep


@pytest.fixture
def base(tmp_path):
    return ExperimentConfigFactory(name="base", trials=1, output_dir=str(tmp_path))


def test_difficulty_sweep_keeps_task_order(base, tmp_path):
    table = run_sweep("difficulty", base, values=["5x5-sparse-easy", "5x5-dense"])
    assert list(table["setting"]) == ["5x5-sparse-easy", "5x5-dense"]
    assert (tmp_path / "difficulty" / "5x5-dense.jsonl").is_file()
    assert set(table["n_trials"]) == {1}


def test_ucrl_sweep_needs_ucrl(base):
    with pytest.raises(ConfigError):
        run_sweep("ucrl_delta", base, values=[0.5])


def test_ucrl_sweep(base):
    cfg = replace(base, agent=AgentConfigFactory(variant="ucrl2", total_episodes=5))
    table = run_sweep("ucrl_delta", cfg, values=[0.2, 0.8])
    assert list(table["setting"]) == ["delta=0.2", "delta=0.8"]
    assert list(table["algo"]) == ["ucrl2(delta=0.2)", "ucrl2(delta=0.8)"]


def test_rollout_sweep_switches_to_datasets(base, tmp_path):
    table = run_sweep("rollout_count", base, values=[2])
    assert list(table["setting"]) == ["M=2"]
    assert (tmp_path / "rollout_count" / "M=2.jsonl").is_file()


def test_rollout_sweep_keeps_a_sampled_backend(base):
    cfg = replace(base, backend=DistanceBackendFactory(kind="empirical_w1"))
    assert list(run_sweep("rollout_count", cfg, values=[3])["setting"]) == ["M=3"]


def test_unknown_kind(base):
    with pytest.raises(UsageError):
        run_sweep("learning_rate", base)


class TestEstimation:
    def test_softened_policy_rows(self):
        mdp = estimation_task()
        policy = softened_policy(mdp, np.ones(mdp.n_states, dtype=int), 0.4)
        np.testing.assert_allclose(policy.probs.sum(axis=1), 1.0)
        assert policy.probs[0, 1] == pytest.approx(0.7)
        assert policy.probs[mdp.goal_mask][0, 0] == 1.0
        with pytest.raises(UsageError):
            softened_policy(mdp, np.zeros(mdp.n_states, dtype=int), 1.5)

    def test_policy_pairs(self):
        pairs = softened_policy_pairs(estimation_task())
        assert len(pairs) == 3
        assert pairs[-1][0] is pairs[-1][1]

    def test_slope_of_a_power_law(self):
        m = np.array([10, 40, 160])
        assert loglog_slope(m, 3.0 / np.sqrt(m)) == pytest.approx(-0.5)

    def test_small_grid(self):
        table, slope = estimation_error_experiment(m_grid=(5, 20), seeds=2)
        assert list(table.columns) == ["m", "mean_error", "std_error", "bound", "n_estimates"]
        assert list(table["n_estimates"]) == [6, 6]
        assert (table["mean_error"] <= table["bound"]).all()
        assert np.isfinite(slope)

    @pytest.mark.parametrize("grid", [(), (20, 10), (0, 5)])
    def test_bad_grids(self, grid):
        with pytest.raises(UsageError):
            estimation_error_experiment(m_grid=grid, seeds=1)

    def test_sweep_adds_the_slope(self, base):
        table = run_sweep("estimation_error", replace(base, trials=1), values=[4, 16])
        assert "slope" in table.columns
        assert list(table["m"]) == [4, 16]
