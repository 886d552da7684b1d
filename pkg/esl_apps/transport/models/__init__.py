from esl_apps.transport.models.metric import GroundMetric
from esl_apps.transport.models.plan import TransportPlan

__all__ = ["GroundMetric", "TransportPlan"]
