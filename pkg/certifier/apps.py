from django.apps import AppConfig


class CertifierConfig(AppConfig):
    name = 'certifier'
