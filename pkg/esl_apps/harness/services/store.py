import json
import logging
from pathlib import Path
from typing import Iterable, List

from esl_apps.core.exceptions import RecordStoreError
from esl_apps.harness.models.record import SCHEMA_VERSION, RunRecord

logger = logging.getLogger(__name__)


def record_line(record: RunRecord) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, allow_nan=False)


def save_records(records: Iterable[RunRecord], path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as handle:
            for record in records:
                handle.write(record_line(record) + "\n")
    except OSError as exc:
        raise RecordStoreError(f"cannot write records: {exc.strerror or exc}", path=path) from exc
    return path


class RecordWriter:
    """Append-only writer; the file is truncated when the writer opens."""

    def __init__(self, path):
        self.path = Path(path)
        self._handle = None
        self.count = 0

    def __enter__(self):
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = self.path.open("w", encoding="utf-8")
        except OSError as exc:
            raise RecordStoreError(f"cannot open record store: {exc.strerror or exc}", path=self.path) from exc
        return self

    def write(self, record: RunRecord):
        try:
            self._handle.write(record_line(record) + "\n")
            self._handle.flush()
        except OSError as exc:
            raise RecordStoreError(f"cannot append record: {exc.strerror or exc}", path=self.path) from exc
        self.count += 1

    def __exit__(self, exc_type, exc, tb):
        if self._handle is not None:
            self._handle.close()
        return False


def load_records(path) -> List[RunRecord]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise RecordStoreError(f"cannot read records: {exc.strerror or exc}", path=path) from exc

    records = []
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordStoreError(f"malformed record ({exc.msg})", path=path, line_number=line_number) from exc
        if not isinstance(data, dict):
            raise RecordStoreError("record is not an object", path=path, line_number=line_number)
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise RecordStoreError(
                f"unsupported schema version {version!r}", path=path, line_number=line_number
            )
        try:
            records.append(RunRecord.from_dict(data))
        except TypeError as exc:
            raise RecordStoreError(f"unexpected record fields ({exc})", path=path, line_number=line_number) from exc
    logger.debug("Loaded %d records from %s", len(records), path)
    return records
