import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

import pandas as pd

from esl_apps.core.exceptions import RecordStoreError, UsageError
from esl_apps.harness.models.record import AggregateRow, RunRecord

logger = logging.getLogger(__name__)


def records_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    """One row per record with the columns aggregation works on."""
    rows = [
        {
            "run_id": record.run_id,
            "algorithm_id": record.algorithm_id,
            "seed": record.seed,
            "failed": record.failed,
            "success": record.success,
            "converged": record.converged,
            "uc": record.updates_to_convergence if record.converged else None,
            "esl": record.reported_esl,
            "omr": record.omr,
            "eta_sub": record.eta_sub,
        }
        for record in records
    ]
    frame = pd.DataFrame(rows)
    for column in ("uc", "esl", "omr", "eta_sub"):
        frame[column] = pd.to_numeric(frame[column], errors="coerce")
    return frame


def _moments(values: pd.Series) -> Tuple[Optional[float], Optional[float], int]:
    # sorted so the sums do not depend on trial completion order
    values = values.dropna().sort_values(kind="mergesort").reset_index(drop=True)
    if values.empty:
        return None, None, 0
    return float(values.mean()), float(values.std(ddof=0)), int(values.size)


def aggregate(records: Iterable[RunRecord], algorithm_id: str = None) -> AggregateRow:
    """Table row over trials: ESL and OMR over defined values, UC over converged runs.

    ESL uses each record's reported value (η for converged runs, η_sub
    otherwise); SR counts every trial, failed ones included.
    """
    records = list(records)
    if not records:
        raise UsageError("cannot aggregate an empty set of records")
    frame = records_frame(records)
    if algorithm_id is None:
        ids = sorted(frame["algorithm_id"].unique())
        algorithm_id = ids[0] if len(ids) == 1 else "+".join(ids)

    esl_mean, esl_std, n_esl = _moments(frame["esl"])
    omr_mean, omr_std, n_omr = _moments(frame["omr"])
    uc_mean, uc_std, _ = _moments(frame.loc[frame["converged"], "uc"])
    n_trials = len(frame)
    row = AggregateRow(
        algorithm_id=algorithm_id,
        esl_mean=esl_mean,
        esl_std=esl_std,
        omr_mean=omr_mean,
        omr_std=omr_std,
        uc_mean=uc_mean,
        uc_std=uc_std,
        sr=100.0 * int(frame["success"].sum()) / n_trials,
        n_trials=n_trials,
        n_esl_defined=n_esl,
        n_omr_defined=n_omr,
        n_converged=int(frame["converged"].sum()),
        n_failed=int(frame["failed"].sum()),
    )
    if row.n_excluded:
        logger.info("%s: %d of %d trials have an undefined ESL", algorithm_id, row.n_excluded, n_trials)
    return row


def aggregate_by_algorithm(records: Iterable[RunRecord]) -> List[AggregateRow]:
    grouped = {}
    for record in records:
        grouped.setdefault(record.algorithm_id, []).append(record)
    return [aggregate(grouped[key], key) for key in sorted(grouped)]


def aggregate_frame(rows: Iterable[AggregateRow]) -> pd.DataFrame:
    return pd.DataFrame([row.csv_row() for row in rows], columns=list(AggregateRow.CSV_COLUMNS))


def write_aggregate_csv(rows: Iterable[AggregateRow], path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        aggregate_frame(rows).to_csv(path, index=False, float_format="%.6f")
    except OSError as exc:
        raise RecordStoreError(f"cannot write table: {exc.strerror or exc}", path=path) from exc
    return path


def write_aggregate_json(rows: Iterable[AggregateRow], path) -> Path:
    path = Path(path)
    payload = [row.as_dict() for row in rows]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise RecordStoreError(f"cannot write table: {exc.strerror or exc}", path=path) from exc
    return path


def write_table(frame: pd.DataFrame, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format="%.6f")
    except OSError as exc:
        raise RecordStoreError(f"cannot write table: {exc.strerror or exc}", path=path) from exc
    return path


TRAJECTORY_COLUMNS = ("run_id", "k", "x_k", "y_k", "delta_k", "return")


def trajectory_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    """Per-update rows of every non-failed run; y_k and delta_k are empty at k = N."""
    rows = []
    for record in records:
        geometry = record.geometry
        if record.failed or not geometry:
            continue
        x = geometry["to_reference"]
        y = geometry["stepwise"]
        deltas = geometry["deltas"]
        returns = geometry.get("returns") or [None] * len(x)
        for k, x_k in enumerate(x):
            last = k == len(y)
            rows.append(
                {
                    "run_id": record.run_id,
                    "k": k,
                    "x_k": x_k,
                    "y_k": None if last else y[k],
                    "delta_k": None if last else deltas[k],
                    "return": returns[k],
                }
            )
    return pd.DataFrame(rows, columns=list(TRAJECTORY_COLUMNS))
