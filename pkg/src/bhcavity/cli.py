"""``bhcavity`` console script: a settings bootstrap in front of the Django management commands."""
from django.conf import settings as django_settings
from django.core.management import execute_from_command_line
import os
import sys


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "%(asctime)s bhcavity %(name)s: %(levelname)s %(process)d %(message)s",
            "datefmt": "%Y-%m-%dT%H:%M:%S",
        },
    },
    "handlers": {"console": {"class": "logging.StreamHandler", "formatter": "verbose"}},
    "loggers": {
        "bhcavity": {
            "level": "INFO",
        }
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
}


def default_settings():
    return {
        "INSTALLED_APPS": ["bhcavity.config.BHCavityConfig"],
        "DATABASES": {},
        "LOGGING": LOGGING,
        "BHCAVITY": {
            "CHECKPOINT_DIR": os.environ.get("BHCAVITY_CHECKPOINT_DIR", ""),
            "WORKERS": int(os.environ.get("BHCAVITY_WORKERS", "1")),
        },
    }


def main(argv=None):
    argv = list(sys.argv if argv is None else argv)
    if not django_settings.configured and "DJANGO_SETTINGS_MODULE" not in os.environ:
        django_settings.configure(**default_settings())
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
