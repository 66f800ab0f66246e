from django.urls import path, include

urlpatterns = [
    path('', include('correlation_lab.urls')),
]

handler400 = 'correlation_lab.views.error_400_view'
handler404 = 'correlation_lab.views.error_404_view'
handler500 = 'correlation_lab.views.error_500_view'
