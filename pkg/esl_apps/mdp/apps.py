from django.apps import AppConfig


class MdpConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "esl_apps.mdp"
    verbose_name = "Tabular MDPs"
