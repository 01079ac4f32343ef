from django.apps import AppConfig
from django.core.exceptions import ImproperlyConfigured
from django.utils.translation import gettext_lazy as _
import logging

logger = logging.getLogger(__name__)


class BHCavityConfig(AppConfig):
    name = "bhcavity"
    label = "bhcavity"
    # Translators: Backend Library Name
    verbose_name = _("BH Cavity")

    def ready(self):
        from .constants import FORMAT_JSON, FORMAT_PICKLE
        from .formats.pickle import PickleRenderer, PickleParser
        from . import format, settings

        checkpoint_format = settings.get("CHECKPOINT_FORMAT", FORMAT_JSON)
        allow_incoming_pickle = settings.get("ALLOW_INCOMING_PICKLE", False)
        if checkpoint_format == FORMAT_PICKLE:
            if not allow_incoming_pickle:
                raise ImproperlyConfigured(
                    "Can not set CHECKPOINT_FORMAT to Pickle unless the ALLOW_INCOMING_PICKLE is enabled."
                )
            logger.warning(
                "CHECKPOINT_FORMAT is set to Pickle. This is insecure and probable isn't a good idea."
            )
        if allow_incoming_pickle:
            format.register(FORMAT_PICKLE, PickleRenderer(), PickleParser())
