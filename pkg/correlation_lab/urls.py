from django.urls import path

from . import views

urlpatterns = [
    path('api/curves/', views.curves_api, name='curves_api'),
    path('api/chsh/', views.chsh_api, name='chsh_api'),
    path('api/spin/', views.spin_api, name='spin_api'),
    path('api/fourlists/', views.fourlists_api, name='fourlists_api'),
    path('api/signalling/', views.signalling_api, name='signalling_api'),
    path('api/feasibility/', views.feasibility_api, name='feasibility_api'),
]
