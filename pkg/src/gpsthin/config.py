"""Pipeline configuration: strict JSON schema, exact numbers only.

Numbers are integers or ``"p/q"`` strings.  A field element is a number or
a list of numbers (its coordinates, lowest level first).  Float literals
anywhere are schema errors, reported with their JSON pointer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Any

import jsonschema

from .errors import SchemaViolation, UnknownKey

MODES = ("validate", "build", "certify", "enumerate")

_RATIONAL = {"oneOf": [{"type": "integer"},
                       {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"}]}
_ELEMENT = {"oneOf": [_RATIONAL, {"type": "array", "items": _RATIONAL, "minItems": 1}]}
_MATRIX = {"type": "array", "minItems": 2, "items": {"type": "array", "minItems": 2, "items": _ELEMENT}}
_POS_INT = {"type": "integer", "minimum": 1}


def _obj(props: dict, required=()) -> dict:
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


SCHEMA = _obj({
    "mode": {"enum": list(MODES)},
    "field": _obj({
        "base_poly": {"type": "array", "items": _RATIONAL, "minItems": 2},
        "base_root": {"type": "integer", "minimum": 0},
        "base_root_interval": {"type": "array", "items": _RATIONAL, "minItems": 2, "maxItems": 2},
        "steps": {"type": "array", "items": _ELEMENT},
    }, ["base_poly"]),
    "gps": _obj({
        "n": {"type": "integer", "minimum": 2},
        "alpha": _ELEMENT,
        "beta": _ELEMENT,
        "middle": {"type": "array", "items": _ELEMENT},
        "last": _ELEMENT,
    }, ["n", "alpha", "beta", "middle", "last"]),
    "generators": _obj({
        "hat": {"type": "array", "items": _MATRIX},
        "s": _MATRIX,
        "centralizer": {"type": "array", "items": _MATRIX},
        "sample": _obj({
            "height_bound": _POS_INT,
            "hat_count": {"type": "integer", "minimum": 0},
            "s_height_bound": _POS_INT,
            "centralizer_count": {"type": "integer", "minimum": 0},
            "entry_bound": _POS_INT,
        }),
    }),
    "unit": _obj({
        "search_bound": _POS_INT,
        "tier": {"enum": ["auto", "continued_fraction", "brute_force"]},
        "value": _ELEMENT,
    }),
    "words": _obj({"max_word_length": {"type": "integer", "minimum": 0}}),
    "enumerate": _obj({"beta_candidates": {"type": "array", "items": _ELEMENT}}),
    "output": {"type": "string"},
}, ["mode", "field"])


@dataclass
class PipelineConfig:
    mode: str
    base_poly: list
    base_root: int | None
    base_root_interval: list | None
    steps: list
    gps: dict | None
    generators: dict
    unit_search_bound: int = 50
    unit_tier: str = "auto"
    unit_value: Any = None  # a user-supplied unit, certified instead of searched for
    max_word_length: int = 4
    beta_candidates: list = field(default_factory=list)
    output: str | None = None
    raw: Any = None  # the parsed document, echoed into reports

    def sample(self, key: str, default):
        return self.generators.get("sample", {}).get(key, default)


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _floats(obj, path=()):
    if isinstance(obj, Decimal):
        yield _pointer(path)
    elif isinstance(obj, dict):
        for k, v in obj.items():
            yield from _floats(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _floats(v, path + (i,))


def parse_config(data: bytes | str) -> PipelineConfig:
    """Validate a JSON config, collecting every error before raising."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SchemaViolation([("", f"not UTF-8: {e}")]) from None
    try:
        doc = json.loads(data, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise SchemaViolation([("", f"invalid JSON: {e}")]) from None

    errors = [(p, "float literal; use an integer or a \"p/q\" string") for p in _floats(doc)]
    unknown = False
    validator = jsonschema.Draft202012Validator(SCHEMA)
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path))):
        if isinstance(err.instance, Decimal):
            continue  # already reported as a float
        if err.validator == "additionalProperties":
            unknown = True
        errors.append((_pointer(err.absolute_path), err.message))
    if isinstance(doc, dict) and doc.get("mode") in ("validate", "build", "certify") and "gps" not in doc:
        errors.append(("/gps", f"mode {doc['mode']!r} needs a gps section"))
    fld = doc.get("field") if isinstance(doc, dict) else None
    if isinstance(fld, dict) and "base_root" in fld and "base_root_interval" in fld:
        errors.append(("/field", "give base_root or base_root_interval, not both"))
    if errors:
        raise (UnknownKey if unknown else SchemaViolation)(errors)

    gps = doc.get("gps")
    if gps is not None and len(gps["middle"]) != gps["n"] - 1:
        raise SchemaViolation([("/gps/middle", f"expected {gps['n'] - 1} entries for n = {gps['n']}")])
    unit = doc.get("unit", {})
    return PipelineConfig(
        mode=doc["mode"],
        base_poly=doc["field"]["base_poly"],
        base_root=doc["field"].get("base_root"),
        base_root_interval=doc["field"].get("base_root_interval"),
        steps=doc["field"].get("steps", []),
        gps=gps,
        generators=doc.get("generators", {}),
        unit_search_bound=unit.get("search_bound", 50),
        unit_tier=unit.get("tier", "auto"),
        unit_value=unit.get("value"),
        max_word_length=doc.get("words", {}).get("max_word_length", 4),
        beta_candidates=doc.get("enumerate", {}).get("beta_candidates", []),
        output=doc.get("output"),
        raw=doc,
    )


CANONICAL = {
    "mode": "certify",
    "field": {"base_poly": [0, 1]},
    "gps": {"n": 3, "alpha": 1, "beta": 2, "middle": [1, 1], "last": 1},
    "unit": {"search_bound": 50},
    "words": {"max_word_length": 4},
}
