from django.apps import AppConfig


class MetricsConfig(AppConfig):
    name = 'metrics'
    verbose_name = 'Group-wise metrics'
