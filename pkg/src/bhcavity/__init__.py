from .constants import FORMAT_JSON, FORMAT_KEYVALUE, FORMAT_MSGPACK, FORMAT_PICKLE
from .formats.json import JSONRenderer, JSONParser
from .formats.keyvalue import KeyValueRenderer, KeyValueParser
from .formats.msgpack import MsgPackRenderer, MsgPackParser
from . import format

format.register(FORMAT_JSON, JSONRenderer(), JSONParser())
format.register(FORMAT_MSGPACK, MsgPackRenderer(), MsgPackParser())
format.register(FORMAT_KEYVALUE, KeyValueRenderer(), KeyValueParser())


__all__ = [
    "FORMAT_JSON",
    "FORMAT_KEYVALUE",
    "FORMAT_MSGPACK",
    "FORMAT_PICKLE",
]
