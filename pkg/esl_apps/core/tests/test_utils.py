from pathlib import Path

import numpy as np
import pytest

import esl_apps
from esl_apps.core.app_utils import esl_message
from esl_apps.core.exceptions import (
    ConfigError,
    EslError,
    RecordStoreError,
    UsageError,
    VerificationError,
)
from esl_apps.core.sampling import sample_index, split_streams


def test_message_defaults():
    assert esl_message() == {
        "success": False,
        "message": "",
        "data": {},
        "errors": [],
        "error_details": [],
    }


def test_message_copies_errors():
    errors = ["a"]
    message = esl_message(success=True, message="ok", errors=errors)
    errors.append("b")
    assert message["errors"] == ["a"]


def test_streams_are_reproducible_and_distinct():
    train, estimate = split_streams(7)
    again, _ = split_streams(7)
    assert train.random() == again.random()
    assert split_streams(7)[0].random() != split_streams(7)[1].random()


def test_sample_index_follows_probabilities():
    rng = np.random.default_rng(0)
    draws = [sample_index(np.array([0.2, 0.0, 0.8]), rng) for _ in range(5000)]
    assert 1 not in draws
    assert np.mean(np.array(draws) == 2) == pytest.approx(0.8, abs=0.03)


def test_error_hierarchy():
    assert issubclass(UsageError, ValueError)
    assert issubclass(RecordStoreError, OSError)
    for cls in (ConfigError, UsageError, RecordStoreError, VerificationError):
        assert issubclass(cls, EslError)


def test_store_error_locates_the_line():
    error = RecordStoreError("malformed record", path="runs.jsonl", line_number=4)
    assert str(error) == "runs.jsonl:4: malformed record"
    assert error.line_number == 4


def test_verification_error_carries_failures():
    error = VerificationError("1 of 7 checks failed", failures=["run-0 (seed 0): negative distance"])
    assert error.failures == ["run-0 (seed 0): negative distance"]


def test_package_version_is_the_distribution_version():
    setup_text = (Path(esl_apps.__file__).parents[1] / "setup.py").read_text()
    assert esl_apps.__version__ == "0.1.0"
    assert "version=VERSION" in setup_text
