from esl_apps.mdp.models.gridworld import GridworldSpec, task_spec
from esl_apps.mdp.models.rollout import Rollout, Step
from esl_apps.mdp.models.tabular import TabularMdp

__all__ = ["GridworldSpec", "Rollout", "Step", "TabularMdp", "task_spec"]
