from django.apps import AppConfig


class GaussianConfig(AppConfig):
    name = 'gaussian'
