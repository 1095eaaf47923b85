from django.apps import AppConfig


class LemmasConfig(AppConfig):
    name = 'lemmas'
