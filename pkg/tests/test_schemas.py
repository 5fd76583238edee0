import unittest

from jsonschema import FormatChecker
from jsonschema import validate as _validate
from jsonschema.exceptions import ValidationError

from tsp_core import schema
from tsp_core.config import default_config

# The default FormatChecker, uses the date-time checker
fc = FormatChecker(["date-time"])

valid_timestamp = "1937-01-01T12:00:27.87+00:20"


class ScenarioSchemaTest(unittest.TestCase):
    def setUp(self):
        self.schema = schema.get_json_schema("scenario")

    def validate(self, obj):
        _validate(obj, self.schema, format_checker=fc)

    def test_defaults(self):
        self.validate(default_config().to_flat())

    def test_partial(self):
        self.validate({"layout.cells": 19, "array.antennas": 64})

    def test_unknown_key(self):
        with self.assertRaises(ValidationError):
            self.validate({"layout.planets": 3})

    def test_enum(self):
        with self.assertRaises(ValidationError):
            self.validate({"ic.bs_estimator": "omp"})

    def test_range(self):
        with self.assertRaises(ValidationError):
            self.validate({"channel.correlation": 1.5})
        with self.assertRaises(ValidationError):
            self.validate({"channel.pathloss_exponent": 2})

    def test_schema_errors(self):
        errors = schema.schema_errors({"array.antennas": 0, "sim.signal_level": "yes"}, "scenario")
        self.assertEqual(len(errors), 2)
        self.assertTrue(errors[0].startswith("array.antennas"))


class ManifestSchemaTest(unittest.TestCase):
    def setUp(self):
        self.schema = schema.get_json_schema("manifest")
        self.manifest = {
            "experiment": "table2",
            "started": valid_timestamp,
            "seed": 0,
            "drops": 10,
            "workers": 1,
            "config": default_config().to_flat(),
            "versions": {"tsp-sim": "0.1.0"},
            "wall_time": 1.5,
            "metrics": ["mscee.tsp"],
        }

    def validate(self, obj):
        _validate(obj, self.schema, format_checker=fc)

    def test_manifest(self):
        self.validate(self.manifest)

    def test_timestamp_invalid_string(self):
        with self.assertRaises(ValidationError):
            self.validate({**self.manifest, "started": "yesterday"})

    def test_missing_field(self):
        manifest = dict(self.manifest)
        del manifest["seed"]
        with self.assertRaises(ValidationError):
            self.validate(manifest)

    def test_versions_are_strings(self):
        with self.assertRaises(ValidationError):
            self.validate({**self.manifest, "versions": {"numpy": 1}})


if __name__ == "__main__":
    unittest.main()
