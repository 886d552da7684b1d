import pytest

from esl_apps.core.factories import ExperimentConfigFactory
from esl_apps.harness.services.runner import run_experiment


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    return ExperimentConfigFactory(
        name="small",
        trials=3,
        output_dir=str(tmp_path_factory.mktemp("results")),
    )


@pytest.fixture(scope="module")
def small_records(small_config):
    return run_experiment(small_config)
