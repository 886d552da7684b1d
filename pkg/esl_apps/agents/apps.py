from django.apps import AppConfig


class AgentsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "esl_apps.agents"
    verbose_name = "Tabular agents"
