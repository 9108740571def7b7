from django.apps import AppConfig


class DistancesConfig(AppConfig):
    name = 'distances'
    verbose_name = 'Explanation distances and sanity checks'
