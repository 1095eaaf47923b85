from django.urls import path
from . import views

app_name = "exponential"

urlpatterns = [
    path(
        "exponential/proxy/",
        views.ExponentialProxyAPIView.as_view(),
        name="exponential-proxy"
    ),
]
