from rest_framework import renderers
from rest_framework.parsers import JSONParser


class JSONRenderer(renderers.JSONRenderer):
    # DRF's encoder already turns numpy arrays into lists via ``tolist()``.
    # NaN in a checkpoint means a broken state, so refuse to write it.
    strict = True
    compact = True


__all__ = ["JSONRenderer", "JSONParser"]
