from django.urls import path
from . import views

app_name = "certifier"

urlpatterns = [
    path(
        "certify/",
        views.CertifyAPIView.as_view(),
        name="certify"
    ),
]
