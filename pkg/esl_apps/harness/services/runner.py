import logging
import re
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List

from esl_apps.agents.services.training import train
from esl_apps.core.exceptions import EslError
from esl_apps.core.sampling import split_streams
from esl_apps.harness.models.experiment import ExperimentConfig
from esl_apps.harness.models.record import RunRecord
from esl_apps.harness.services.store import RecordWriter
from esl_apps.mdp.services.dynamics import evaluation_return
from esl_apps.mdp.services.gridworld import build_gridworld
from esl_apps.mdp.services.planning import value_iteration
from esl_apps.metrics.models.geometry import TrajectoryGeometry
from esl_apps.metrics.services.geometry import resolve_reference, trajectory_geometry
from esl_apps.metrics.services.indices import index_report
from esl_apps.transport.models.metric import GroundMetric

logger = logging.getLogger(__name__)

SUCCESS_TOL = 1e-9


def slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.=-]+", "_", text).strip("_")


def experiment_slug(cfg: ExperimentConfig) -> str:
    return slug(cfg.name or f"{cfg.agent.algorithm_id}_{cfg.env.label}")


def records_path(cfg: ExperimentConfig) -> Path:
    return Path(cfg.output_dir) / f"{experiment_slug(cfg)}.jsonl"


def geometry_to_dict(geometry) -> dict:
    return {
        "stepwise": geometry.stepwise.tolist(),
        "to_reference": geometry.to_reference.tolist(),
        "deltas": geometry.deltas.tolist(),
        "endpoint_distance": geometry.endpoint_distance,
        "reference_mode": geometry.reference_mode,
        "reference_source": geometry.reference_source,
        "backend": geometry.backend,
        "returns": None if geometry.returns is None else geometry.returns.tolist(),
    }


def geometry_from_dict(data: dict) -> TrajectoryGeometry:
    return TrajectoryGeometry(
        stepwise=data["stepwise"],
        to_reference=data["to_reference"],
        endpoint_distance=data["endpoint_distance"],
        reference_mode=data["reference_mode"],
        reference_source=data["reference_source"],
        backend=data["backend"],
        returns=data.get("returns"),
    )


def run_trial(cfg: ExperimentConfig, index: int) -> RunRecord:
    """Train, measure and score one trial; failures come back as failed records."""
    seed = cfg.trial_seed(index)
    run_id = f"{experiment_slug(cfg)}-{seed}"
    started = time.perf_counter()
    try:
        mdp = build_gridworld(cfg.env)
        train_rng, estimation_rng = split_streams(seed)
        optimal_policy, _ = value_iteration(mdp)
        optimal_return = evaluation_return(mdp, optimal_policy)
        trace = train(mdp, cfg.agent, train_rng, seed=seed, optimal_return=optimal_return)
        reference, source = resolve_reference(mdp, trace, cfg.reference)
        geometry = trajectory_geometry(
            trace,
            mdp,
            reference=reference,
            backend=cfg.backend,
            rng=estimation_rng,
            reference_mode=cfg.reference,
            reference_source=source,
        )
        report = index_report(geometry, mdp, GroundMetric.for_mdp(mdp, cfg.backend.action_scale))
    except (EslError, ValueError, ArithmeticError) as exc:
        logger.exception("Trial %s failed", run_id)
        return RunRecord(
            run_id=run_id,
            seed=seed,
            algorithm_id=cfg.agent.algorithm_id,
            failed=True,
            error=f"{type(exc).__name__}: {exc}",
            wall_time=time.perf_counter() - started,
        )

    final_return = trace.final.episodic_return
    return RunRecord(
        run_id=run_id,
        seed=seed,
        algorithm_id=trace.algorithm_id,
        success=abs(final_return - optimal_return) <= SUCCESS_TOL,
        converged=trace.converged,
        updates_to_convergence=trace.updates_to_convergence,
        n_updates=trace.n_updates,
        cadence=trace.cadence,
        optimal_return=optimal_return,
        final_return=final_return,
        geometry=geometry_to_dict(geometry),
        indices=report.as_dict(),
        reported_esl=report.esl if trace.converged else report.eta_sub,
        state_visits=trace.state_visits.tolist(),
        wall_time=time.perf_counter() - started,
    )


def run_experiment(cfg: ExperimentConfig, path=None, workers: int = None) -> List[RunRecord]:
    """Run every trial of ``cfg`` and append each record to the store as it lands.

    Trial i uses seed ``base_seed + i``; records come back in trial order
    whatever the worker count.
    """
    path = Path(path) if path is not None else records_path(cfg)
    workers = workers or cfg.workers
    indices = range(cfg.trials)
    logger.info("Running %s: %d trials, %d workers, records in %s", cfg, cfg.trials, workers, path)

    records = []
    with RecordWriter(path) as writer:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for record in pool.map(run_trial, [cfg] * cfg.trials, indices):
                    writer.write(record)
                    records.append(record)
        else:
            for index in indices:
                record = run_trial(cfg, index)
                writer.write(record)
                records.append(record)
    failed = sum(record.failed for record in records)
    if failed:
        logger.warning("%d of %d trials of %s failed", failed, len(records), cfg)
    return records
