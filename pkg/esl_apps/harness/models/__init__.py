from esl_apps.harness.models.experiment import ExperimentConfig
from esl_apps.harness.models.record import SCHEMA_VERSION, AggregateRow, RunRecord

__all__ = ["AggregateRow", "ExperimentConfig", "RunRecord", "SCHEMA_VERSION"]
