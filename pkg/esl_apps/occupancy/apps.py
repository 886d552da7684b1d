from django.apps import AppConfig


class OccupancyConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "esl_apps.occupancy"
    verbose_name = "Occupancy measures"
