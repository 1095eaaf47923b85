from django.apps import AppConfig


class ExponentialConfig(AppConfig):
    name = 'exponential'
