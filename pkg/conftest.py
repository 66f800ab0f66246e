import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'Bell_Correlation_Lab.settings')
django.setup()
