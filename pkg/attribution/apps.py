from django.apps import AppConfig


class AttributionAppConfig(AppConfig):
    name = 'attribution'
    verbose_name = 'Gradient attribution methods'
