from esl_apps.metrics.models.backend import REFERENCE_MODES, DistanceBackend
from esl_apps.metrics.models.geometry import IndexReport, TrajectoryGeometry

__all__ = ["DistanceBackend", "IndexReport", "REFERENCE_MODES", "TrajectoryGeometry"]
