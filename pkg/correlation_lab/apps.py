from django.apps import AppConfig


class CorrelationLabConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'correlation_lab'
    verbose_name = 'Bell correlation lab'
