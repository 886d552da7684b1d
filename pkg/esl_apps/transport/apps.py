from django.apps import AppConfig


class TransportConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "esl_apps.transport"
    verbose_name = "Optimal transport"
