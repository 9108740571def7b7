from django.apps import AppConfig


class DegradationConfig(AppConfig):
    name = 'degradation'
    verbose_name = 'Controlled model degradation'
