import os
import sys

import django

# Mirror sandbox/manage.py so pytest can collect the Django-based test suite.
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "sandbox"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "sandbox.settings")
django.setup()
