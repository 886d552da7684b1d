from esl_apps.agents.services.psrl import train_psrl
from esl_apps.agents.services.q_learning import train_q_learning
from esl_apps.agents.services.ucrl2 import train_ucrl2

TRAINERS = {
    "q_greedy": train_q_learning,
    "q_decay": train_q_learning,
    "ucrl2": train_ucrl2,
    "psrl": train_psrl,
}


def train(mdp, cfg, rng, seed: int = 0, optimal_return: float = None):
    """Train the agent named by ``cfg.variant`` and return its policy trace."""
    return TRAINERS[cfg.variant](mdp, cfg, rng, seed=seed, optimal_return=optimal_return)
