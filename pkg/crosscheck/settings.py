"""
Django settings for the crosscheck project.

The project has no web surface: Django provides settings, app loading, the
management-command CLI (``manage.py xai ...``) and the test runner.
Docs:
- https://docs.djangoproject.com/en/5.0/topics/settings/
- https://docs.djangoproject.com/en/5.0/ref/settings/
"""

from pathlib import Path

from decouple import config
from dotenv import load_dotenv


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / ".env")

# No HTTP surface, the key only satisfies Django's startup checks.
SECRET_KEY = config("SECRET_KEY_DJANGO", default="crosscheck-insecure-local-key")

DEBUG = config("DJANGO_DEBUG", cast=bool, default=False)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "django.contrib.auth",
    "rest_framework",
    "engine",
    "attribution",
    "distances",
    "dataset",
    "crosstraining",
    "evaluation",
    "degradation",
    "pipeline",
]

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# ----------------------------------------------------
# Toolkit configuration

XAI_OUTPUT_DIR = config("XAI_OUTPUT_DIR", default=str(BASE_DIR / "runs"))
XAI_N_JOBS = config("XAI_N_JOBS", cast=int, default=1)

# Stage timing thresholds (in seconds) used by pipeline.monitoring
XAI_SLOW_STAGE_SECONDS = config("XAI_SLOW_STAGE_SECONDS", cast=float, default=30.0)
XAI_CRITICAL_STAGE_SECONDS = config("XAI_CRITICAL_STAGE_SECONDS", cast=float, default=300.0)

XAI_LOG_LEVEL = config("XAI_LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "root": {"handlers": ["console"], "level": XAI_LOG_LEVEL},
}

SENTRY_DSN = config("SENTRY_DSN", default="")

if SENTRY_DSN:
    import sentry_sdk

    sentry_sdk.init(
        dsn=SENTRY_DSN,
        send_default_pii=False,
        traces_sample_rate=config("SENTRY_TRACES_SAMPLE_RATE", cast=float, default=1.0),
    )
