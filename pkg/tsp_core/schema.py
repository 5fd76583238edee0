import json
import os
from functools import lru_cache
from typing import List

from jsonschema import Draft7Validator, FormatChecker


def _schema_dir() -> str:
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "schemas")


@lru_cache(maxsize=None)
def get_json_schema(name: str) -> dict:
    with open(os.path.join(_schema_dir(), name + ".json")) as f:
        data = json.load(f)
    return data


def schema_errors(obj: dict, name: str) -> List[str]:
    """
    Returns every validation failure of ``obj`` against the named schema,
    sorted by path so that messages are stable between runs.
    """
    validator = Draft7Validator(get_json_schema(name), format_checker=FormatChecker())
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(map(str, e.path)))
    messages = []
    for e in errors:
        where = ".".join(str(p) for p in e.path)
        messages.append(f"{where}: {e.message}" if where else e.message)
    return messages
