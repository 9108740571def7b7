from django.apps import AppConfig


class CrosstrainingConfig(AppConfig):
    name = 'crosstraining'
    verbose_name = 'k-fold cross-training'
