from django.urls import path
from . import views

app_name = "lemmas"

urlpatterns = [
    path(
        "lemmas/",
        views.LemmaSuiteAPIView.as_view(),
        name="lemma-suite"
    ),
]
