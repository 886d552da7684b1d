"""Process-level settings for esl-admin and the test suite.

Values come from the environment (or a ``.env`` file next to the
working directory) through django-environ.
"""

from pathlib import Path

import environ

BASE_DIR = Path(__file__).resolve().parent.parent

env = environ.Env(
    ESL_LOG_LEVEL=(str, "INFO"),
    ESL_OUTPUT_DIR=(str, "results"),
    ESL_WORKERS=(int, 1),
    ESL_TOLERANCE=(float, 1e-9),
    ESL_SECRET_KEY=(str, "esl-apps-local-only"),
)
environ.Env.read_env(BASE_DIR / ".env")

SECRET_KEY = env("ESL_SECRET_KEY")
DEBUG = False
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    "esl_apps.core",
    "esl_apps.mdp",
    "esl_apps.agents",
    "esl_apps.occupancy",
    "esl_apps.transport",
    "esl_apps.metrics",
    "esl_apps.harness",
    "esl_apps.cli",
]

DATABASES = {}
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
USE_TZ = True

ESL_OUTPUT_DIR = env("ESL_OUTPUT_DIR")
ESL_WORKERS = env("ESL_WORKERS")
ESL_TOLERANCE = env("ESL_TOLERANCE")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "esl_apps": {
            "handlers": ["console"],
            "level": env("ESL_LOG_LEVEL"),
            "propagate": False,
        },
    },
}
