import numpy as np
import pytest

from esl_apps.core.factories import ChainMdpFactory, GridworldSpecFactory
from esl_apps.mdp.services.gridworld import build_gridworld


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def chain_mdp():
    return ChainMdpFactory()


@pytest.fixture
def grid_mdp():
    """Deterministic dense 5x5 gridworld, 15 steps."""
    return build_gridworld(GridworldSpecFactory())


@pytest.fixture
def slip_mdp():
    return build_gridworld(GridworldSpecFactory(transition_kind="slip", max_steps=40))


@pytest.fixture
def output_dir(tmp_path, settings):
    settings.ESL_OUTPUT_DIR = str(tmp_path / "results")
    return tmp_path / "results"
