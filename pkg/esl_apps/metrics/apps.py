from django.apps import AppConfig


class MetricsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "esl_apps.metrics"
    verbose_name = "Trajectory metrics"
