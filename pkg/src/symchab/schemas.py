"""JSON schemas for CLI inputs and a validator reporting JSON-pointer paths."""

from __future__ import annotations

from jsonschema import Draft202012Validator

_INT_STR = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+$"}]}
_RAT_STR = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_VAL_STR = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^(-?\d+(/\d+)?|inf)$"}]}

_TERM = {
    "type": "object",
    "required": ["exp"],
    "properties": {
        "exp": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "num": _INT_STR,
        "den": _INT_STR,
        "val": _VAL_STR,
    },
    "oneOf": [{"required": ["num"]}, {"required": ["val"]}],
    "additionalProperties": False,
}

SERIES = {
    "type": "object",
    "required": ["prime", "dim", "terms"],
    "properties": {
        "prime": {"type": "integer", "minimum": 2},
        "dim": {"type": "integer", "minimum": 1, "maximum": 4},
        "terms": {"type": "array", "items": _TERM, "minItems": 1},
        "tail": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["polynomial", "pure"]},
                "k": {"type": "array", "items": {"type": ["integer", "null"], "minimum": 1}},
                "known": {"type": "array", "items": {"type": ["integer", "null"], "minimum": 0}},
            },
            "additionalProperties": False,
        },
        "pure": {"type": "boolean"},
    },
    "additionalProperties": False,
}

_POINT = {"type": "array", "items": _RAT_STR, "minItems": 1, "maxItems": 4}

SYSTEM = {
    "type": "object",
    "required": ["members"],
    "properties": {
        "members": {"type": "array", "items": SERIES, "minItems": 1, "maxItems": 4},
        "domain": {"type": "array", "items": _RAT_STR},
    },
    "additionalProperties": False,
}

TROP = {
    "type": "object",
    "required": ["series"],
    "properties": {
        "series": SERIES,
        "domain": {"type": "array", "items": _RAT_STR},
        "w": {"type": "array", "items": {"type": "array", "items": _RAT_STR}},
    },
    "additionalProperties": False,
}

POLYTOPES = {
    "type": "array",
    "items": {"type": "array", "items": _POINT, "minItems": 1},
    "minItems": 1,
    "maxItems": 4,
}

DEFORM = {
    "type": "object",
    "required": ["system", "witnesses"],
    "properties": {
        "system": SYSTEM,
        "witnesses": {"type": "array", "items": {"type": "array", "items": _POINT}},
        "samples": {"type": "array", "items": _POINT},
        "max_steps": {"type": "integer", "minimum": 1, "maximum": 64},
    },
    "additionalProperties": False,
}

CURVE = {
    "type": "object",
    "required": ["genus", "p", "h"],
    "properties": {
        "genus": {"type": "integer", "minimum": 1},
        "p": {"type": "integer", "minimum": 2},
        "h": {"type": "array", "items": {"type": "integer"}, "minItems": 2},
        "g": {"type": "array", "items": {"type": "integer"}},
        "rank_assumption": {"type": ["integer", "null"], "minimum": 0},
        "assumption_A": {"type": "boolean"},
        "orders": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
        },
    },
    "additionalProperties": False,
}

SCHEMAS = {
    "series": SERIES,
    "system": SYSTEM,
    "trop": TROP,
    "polytopes": POLYTOPES,
    "deform": DEFORM,
    "curve": CURVE,
}

for _s in SCHEMAS.values():
    Draft202012Validator.check_schema(_s)


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def validate(doc, schema_id: str) -> list[tuple[str, str]]:
    """Violations as (JSON pointer, message), sorted; empty iff ``doc`` is valid.

    >>> validate({"genus": 3, "h": [0, 0, 0, 0, 0, 0, 0, 1]}, "curve")
    [('/p', "'p' is a required property")]
    """
    if schema_id not in SCHEMAS:
        raise KeyError(f"unknown schema {schema_id!r}")
    out = []
    for err in Draft202012Validator(SCHEMAS[schema_id]).iter_errors(doc):
        path = list(err.absolute_path)
        if err.validator == "required" and isinstance(err.instance, dict):
            for key in err.validator_value:
                if key not in err.instance:
                    out.append((_pointer(path + [key]), f"{key!r} is a required property"))
        else:
            out.append((_pointer(path), err.message))
    return sorted(set(out))
