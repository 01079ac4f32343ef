from io import BytesIO
from .exceptions import CheckpointError, UnknownFormatError

_delim = b":"
_formats = {}


def _bytes(seq):
    return seq.encode() if hasattr(seq, "encode") else seq


def register(code, renderer, parser):
    _formats[_bytes(code)] = {
        "renderer": renderer,
        "parser": parser,
    }


def unregister(code):
    _formats.pop(_bytes(code), None)


def is_registered(code):
    return _bytes(code) in _formats


def get_renderer(code):
    code = _bytes(code)
    if code not in _formats:
        raise UnknownFormatError(
            "Could not find renderer for format %s" % code.decode()
        )
    return _formats[code]["renderer"]


def get_parser(code):
    code = _bytes(code)
    if code not in _formats:
        raise UnknownFormatError("Could not find parser for format %s" % code.decode())
    return _formats[code]["parser"]


def render(code, data):
    code = _bytes(code)
    body = get_renderer(code).render(data)
    return code + _delim + _bytes(body)


def parse(data):
    data = _bytes(data)
    code, body = data.split(_delim, 1)
    return get_parser(code).parse(BytesIO(body))


def dump(code, data, header):
    """Render ``data`` behind a version header line, e.g. ``b"BHCMPS/1\\n"``."""
    return header + render(code, data)


def load(blob, header):
    if not blob.startswith(header):
        found = blob.split(b"\n", 1)[0][:32]
        raise CheckpointError(
            "Unsupported checkpoint header %r (expected %r)" % (found, header.strip())
        )
    return parse(blob[len(header):])


__all__ = [
    "register",
    "unregister",
    "is_registered",
    "render",
    "parse",
    "dump",
    "load",
]
