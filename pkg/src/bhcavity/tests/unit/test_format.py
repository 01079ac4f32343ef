from django.test import SimpleTestCase
from bhcavity.constants import CHECKPOINT_HEADER, FORMAT_PICKLE
from bhcavity.exceptions import CheckpointError, UnknownFormatError
from bhcavity.formats.pickle import PickleRenderer, PickleParser
import bhcavity.format
import numpy as np
import pickle


class JSONFormatTest(SimpleTestCase):
    def test_render(self):
        msg = bhcavity.format.render("json", {"sweeps": 3})
        self.assertEqual(msg, b'json:{"sweeps":3}')

    def test_parse(self):
        data = bhcavity.format.parse(b'json:{"sweeps":3}')
        self.assertEqual(data, {"sweeps": 3})

    def test_render_rejects_nan(self):
        with self.assertRaises(ValueError):
            bhcavity.format.render("json", {"energy": float("nan")})


class MsgPackFormatTest(SimpleTestCase):
    def test_render(self):
        msg = bhcavity.format.render("msgpack", {"foo": "bar"})
        self.assertEqual(msg, b"msgpack:\x81\xa3foo\xa3bar")

    def test_parse(self):
        data = bhcavity.format.parse(b"msgpack:\x81\xa3foo\xa3bar")
        self.assertEqual(data, {"foo": "bar"})

    def test_numpy_arrays_become_lists(self):
        msg = bhcavity.format.render("msgpack", {"charges": np.arange(3)})
        self.assertEqual(bhcavity.format.parse(msg), {"charges": [0, 1, 2]})


class KeyValueFormatTest(SimpleTestCase):
    def test_render(self):
        msg = bhcavity.format.render("kv", {"m": 6, "j_over_u": [0.05, 0.1], "overlaps": None})
        self.assertEqual(msg, b"kv:m = 6\nj_over_u = 0.05,0.1\noverlaps = \n")

    def test_parse_skips_comments(self):
        data = bhcavity.format.parse(b"kv:# u1(x) = sin(pi x / d)\nj20 = 0.5\n\nu_int = 1.25\n")
        self.assertEqual(data, {"j20": "0.5", "u_int": "1.25"})


class PickleFormatTest(SimpleTestCase):
    def test_default(self):
        with self.assertRaises(UnknownFormatError):
            bhcavity.format.render("pickle", {})

    def test_registration(self):
        self.assertFalse(bhcavity.format.is_registered(FORMAT_PICKLE))
        bhcavity.format.register(FORMAT_PICKLE, PickleRenderer(), PickleParser())
        self.assertTrue(bhcavity.format.is_registered("pickle"))
        self.assertTrue(bhcavity.format.is_registered(b"pickle"))
        bhcavity.format.unregister(FORMAT_PICKLE)
        self.assertFalse(bhcavity.format.is_registered(FORMAT_PICKLE))

    def test_render(self):
        bhcavity.format.register(FORMAT_PICKLE, PickleRenderer(), PickleParser())
        msg = bhcavity.format.render("pickle", {"foo": "bar"})
        self.assertTrue(msg.startswith(b"pickle:"))
        self.assertEqual(pickle.loads(msg.replace(b"pickle:", b"")), {"foo": "bar"})
        bhcavity.format.unregister(FORMAT_PICKLE)

    def test_parse(self):
        bhcavity.format.register(FORMAT_PICKLE, PickleRenderer(), PickleParser())
        data = bhcavity.format.parse(
            b"pickle:\x80\x03}q\x00X\x03\x00\x00\x00fooq\x01X\x03\x00\x00\x00barq\x02s."
        )
        self.assertEqual(data, {"foo": "bar"})
        bhcavity.format.unregister(FORMAT_PICKLE)


class UnknownFormatTest(SimpleTestCase):
    def test_render(self):
        with self.assertRaises(UnknownFormatError):
            bhcavity.format.render("xml", {})

    def test_parse(self):
        with self.assertRaises(UnknownFormatError):
            bhcavity.format.parse(b"xml:<foo>bar</foo>")


class VersionHeaderTest(SimpleTestCase):
    def test_dump(self):
        blob = bhcavity.format.dump("json", {"sweeps": 2}, CHECKPOINT_HEADER)
        self.assertEqual(blob, b'BHCMPS/1\njson:{"sweeps":2}')
        self.assertEqual(bhcavity.format.load(blob, CHECKPOINT_HEADER), {"sweeps": 2})

    def test_load_wrong_header(self):
        with self.assertRaises(CheckpointError):
            bhcavity.format.load(b'BHCMPS/0\njson:{"sweeps":2}', CHECKPOINT_HEADER)
