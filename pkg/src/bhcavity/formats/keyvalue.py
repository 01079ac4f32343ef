from rest_framework import renderers, parsers
from rest_framework.exceptions import ParseError


def _render_value(value):
    if isinstance(value, (list, tuple)):
        return ",".join(_render_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


class KeyValueRenderer(renderers.BaseRenderer):
    """Flat ``key = value`` text, one pair per line.

    ``renderer_context["comments"]`` lines are written first, prefixed with ``#``.
    """

    media_type = "text/plain"
    format = "kv"
    charset = "utf-8"

    def render(self, data, accepted_media_type=None, renderer_context=None):
        renderer_context = renderer_context or {}
        lines = ["# %s" % c for c in renderer_context.get("comments", [])]
        for key, value in data.items():
            lines.append("%s = %s" % (key, _render_value(value)))
        return ("\n".join(lines) + "\n").encode(self.charset)


class KeyValueParser(parsers.BaseParser):
    media_type = "text/plain"

    def parse(self, stream, media_type=None, parser_context=None):
        data = {}
        for lineno, raw in enumerate(stream.read().decode("utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError("Line %d is not a `key = value` pair: %r" % (lineno, raw))
            key, value = line.split("=", 1)
            data[key.strip()] = value.strip()
        return data


__all__ = ["KeyValueRenderer", "KeyValueParser"]
