import json

import pytest

from esl_apps.core.exceptions import RecordStoreError
from esl_apps.harness.models.record import RunRecord
from esl_apps.harness.services.store import RecordWriter, load_records, record_line, save_records


def test_round_trip(tmp_path, small_records):
    path = save_records(small_records, tmp_path / "nested" / "runs.jsonl")
    assert load_records(path) == small_records


def test_writer_truncates_and_counts(tmp_path, small_records):
    path = tmp_path / "runs.jsonl"
    path.write_text("stale\n")
    with RecordWriter(path) as writer:
        for record in small_records:
            writer.write(record)
    assert writer.count == len(small_records)
    assert len(load_records(path)) == len(small_records)


def test_blank_lines_are_skipped(tmp_path):
    record = RunRecord(run_id="a-0", seed=0, algorithm_id="a", failed=True, error="SolverError: x")
    path = tmp_path / "runs.jsonl"
    path.write_text("\n" + record_line(record) + "\n\n")
    assert load_records(path) == [record]


def test_empty_file(tmp_path):
    path = tmp_path / "runs.jsonl"
    path.write_text("")
    assert load_records(path) == []


def test_truncated_line_reports_its_number(tmp_path, small_records):
    path = save_records(small_records, tmp_path / "runs.jsonl")
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1] + [lines[-1][:40]]) + "\n")
    with pytest.raises(RecordStoreError) as excinfo:
        load_records(path)
    assert excinfo.value.line_number == len(small_records)


@pytest.mark.parametrize(
    "line",
    [
        "[1, 2]",
        json.dumps({"run_id": "a", "seed": 0, "algorithm_id": "a", "schema_version": 99}),
        json.dumps({"run_id": "a", "seed": 0, "algorithm_id": "a", "colour": 1, "schema_version": 1}),
    ],
)
def test_bad_records(tmp_path, line):
    path = tmp_path / "runs.jsonl"
    path.write_text(line + "\n")
    with pytest.raises(RecordStoreError) as excinfo:
        load_records(path)
    assert excinfo.value.line_number == 1


def test_missing_file(tmp_path):
    with pytest.raises(RecordStoreError):
        load_records(tmp_path / "nope.jsonl")
