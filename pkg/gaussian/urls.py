from django.urls import path
from . import views

app_name = "gaussian"

urlpatterns = [
    path(
        "gaussian/proxy/",
        views.GaussianProxyAPIView.as_view(),
        name="gaussian-proxy"
    ),
]
