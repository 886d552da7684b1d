import logging
from pathlib import Path
from typing import Iterable, List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from esl_apps.core.exceptions import RecordStoreError  # noqa: E402
from esl_apps.harness.models.record import RunRecord  # noqa: E402
from esl_apps.harness.services.runner import geometry_from_dict  # noqa: E402
from esl_apps.metrics.services.indices import omr_curve  # noqa: E402

logger = logging.getLogger(__name__)

# fixed ids and no timestamp so reruns write identical files
matplotlib.rcParams["svg.hashsalt"] = "esl-apps"
SVG_METADATA = {"Date": None}


def _save(fig, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
    except OSError as exc:
        raise RecordStoreError(f"cannot write plot: {exc.strerror or exc}", path=path) from exc
    finally:
        plt.close(fig)
    return path


def _runs(records: Iterable[RunRecord]) -> List[RunRecord]:
    return [record for record in records if not record.failed and record.geometry]


def plot_distance_to_reference(records, path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4))
    for record in _runs(records):
        x = record.geometry["to_reference"]
        ax.plot(np.arange(len(x)), x, linewidth=1.0, alpha=0.7)
    ax.set_xlabel("update k")
    ax.set_ylabel("distance to reference $x_k$")
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    return _save(fig, path)


def plot_stepwise_distance(records, path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4))
    for record in _runs(records):
        y = record.geometry["stepwise"]
        ax.plot(np.arange(len(y)), y, linewidth=1.0, alpha=0.7)
    ax.set_xlabel("update k")
    ax.set_ylabel("stepwise distance $y_k$")
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    return _save(fig, path)


def plot_omr_curve(records, path) -> Path:
    """Movement ratio of the tail starting at update i, one line per run."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for record in _runs(records):
        curve = omr_curve(geometry_from_dict(record.geometry))
        points = [(i, value) for i, value in curve if value is not None]
        if points:
            i, value = zip(*points)
            ax.plot(i, value, linewidth=1.0, alpha=0.7)
    ax.set_xlabel("first update i")
    ax.set_ylabel("OMR from update i")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    return _save(fig, path)


def plot_trajectory_scatter(records, path) -> Path:
    """(x_k, y_k) for every update, coloured by k."""
    fig, ax = plt.subplots(figsize=(6, 5))
    scatter = None
    for record in _runs(records):
        y = np.asarray(record.geometry["stepwise"])
        x = np.asarray(record.geometry["to_reference"])[: y.size]
        scatter = ax.scatter(x, y, c=np.arange(y.size), cmap="viridis", s=8)
    if scatter is not None:
        fig.colorbar(scatter, ax=ax, label="update k")
    ax.set_xlabel("distance to reference $x_k$")
    ax.set_ylabel("stepwise distance $y_k$")
    fig.tight_layout()
    return _save(fig, path)


def plot_state_visits(records, width: int, height: int, path) -> Path:
    """Visit counts summed over runs, drawn on the grid (row 0 at the top)."""
    visits = np.zeros(width * height)
    for record in _runs(records):
        counts = np.asarray(record.state_visits, dtype=float)
        if counts.size == visits.size:
            visits += counts
    fig, ax = plt.subplots(figsize=(5, 5))
    image = ax.imshow(visits.reshape(height, width), cmap="magma", origin="upper")
    fig.colorbar(image, ax=ax, label="visits")
    ax.set_xticks(range(width))
    ax.set_yticks(range(height))
    fig.tight_layout()
    return _save(fig, path)


def plot_bound_gaps(gaps, path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    gaps = np.asarray([gap for gap in gaps if gap is not None], dtype=float)
    if gaps.size:
        ax.hist(gaps, bins=min(30, max(5, gaps.size)))
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("eta_sub bound slack")
    ax.set_ylabel("runs")
    fig.tight_layout()
    return _save(fig, path)


def grid_shape(records) -> tuple:
    """(width, height) of a square grid matching the recorded visit vectors."""
    for record in _runs(records):
        side = int(round(np.sqrt(len(record.state_visits))))
        if side * side == len(record.state_visits):
            return side, side
    return 0, 0


def analysis_plots(records, out_dir) -> List[Path]:
    out_dir = Path(out_dir)
    records = list(records)
    paths = [
        plot_distance_to_reference(records, out_dir / "distance_to_reference.svg"),
        plot_stepwise_distance(records, out_dir / "stepwise_distance.svg"),
        plot_omr_curve(records, out_dir / "omr_curve.svg"),
        plot_trajectory_scatter(records, out_dir / "trajectory_scatter.svg"),
    ]
    width, height = grid_shape(records)
    if width:
        paths.append(plot_state_visits(records, width, height, out_dir / "state_visits.svg"))
    else:
        logger.warning("Visit counts do not match a square grid; skipping the heatmap")
    logger.debug("Wrote %d plots to %s", len(paths), out_dir)
    return paths
