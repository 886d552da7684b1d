from esl_apps.occupancy.models.dataset import PolicyDataset
from esl_apps.occupancy.models.measure import OccupancyMeasure

__all__ = ["OccupancyMeasure", "PolicyDataset"]
