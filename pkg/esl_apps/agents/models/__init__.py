from esl_apps.agents.models.config import AgentConfig
from esl_apps.agents.models.policy import PolicySnapshot, PolicyTrace

__all__ = ["AgentConfig", "PolicySnapshot", "PolicyTrace"]
