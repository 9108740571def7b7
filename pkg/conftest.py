"""Pytest wiring: load the project's Django test settings before collection."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "crosscheck.test_settings")
django.setup()
