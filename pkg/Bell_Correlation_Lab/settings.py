from pathlib import Path
from decouple import config, Csv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/5.2/howto/deployment/checklist/

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='correlation-lab-insecure-development-key')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1,testserver', cast=Csv())


# Application definition

INSTALLED_APPS = [
    'correlation_lab',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
    'correlation_lab.middleware.ApiTimingMiddleware',
]

ROOT_URLCONF = 'Bell_Correlation_Lab.urls'

TEMPLATES = []

WSGI_APPLICATION = 'Bell_Correlation_Lab.wsgi.application'


# Database
# Runs are persisted as flat files only; the database is left for Django internals.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / config('DATABASE_NAME', default='db.sqlite3'),
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'
TIME_ZONE = config('TIME_ZONE', default='UTC')
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Security Settings (for production)
if not DEBUG:
    SECURE_CONTENT_TYPE_NOSNIFF = True
    X_FRAME_OPTIONS = 'DENY'


# Logging goes to stderr so tables written to stdout stay machine readable
LOG_LEVEL = config('LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'correlation_lab': {
            'handlers': ['stderr'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}


# Correlation lab settings
CORRELATION_LAB = {
    # Monte Carlo
    'DEFAULT_SEED': config('CORRELATION_LAB_SEED', default=20240601, cast=int),
    'DEFAULT_TRIALS': config('CORRELATION_LAB_TRIALS', default=100000, cast=int),
    'SIGNALLING_WORKERS': config('CORRELATION_LAB_WORKERS', default=1, cast=int),

    # Tables
    'CURVE_POINTS': 181,  # puts theta = pi/2 on a grid node

    # Spin algebra
    'J_MAX': config('CORRELATION_LAB_J_MAX', default='25/2'),

    # Analysis thresholds
    'FEASIBILITY_TOLERANCE': config('CORRELATION_LAB_TOLERANCE', default=1e-9, cast=float),
    'SIGNIFICANCE_SIGMA': 4.0,

    # Web API
    'API_MAX_TRIALS': config('CORRELATION_LAB_API_MAX_TRIALS', default=200000, cast=int),
}
