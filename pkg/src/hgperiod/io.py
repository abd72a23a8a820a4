"""JSON input/output for weighted arrangements.

Rationals are strings "num" or "num/den" so that they round-trip exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .errors import ParseError, SchemaError
from .geometry import Arrangement, LinearForm, build_arrangement

SCHEMA_VERSION = 1

RATIONAL = {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}
FORM = {
    "type": "object",
    "required": ["coeffs"],
    "properties": {
        "coeffs": {"type": "array", "items": RATIONAL, "minItems": 1},
        "const": RATIONAL,
    },
}
WEIGHT = {
    "type": "object",
    "required": ["re"],
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "additionalProperties": False,
}
SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "weighted affine arrangement",
    "type": "object",
    "required": ["dimension", "hyperplanes"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "dimension": {"type": "integer", "minimum": 1},
        "hyperplanes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "allOf": [FORM],
                "required": ["coeffs", "weight"],
                "properties": {"weight": WEIGHT},
            },
        },
        "f0": FORM,
        "name": {"type": "string"},
    },
}


def parse_rational(text: str) -> Fraction:
    text = text.replace(" ", "")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise SchemaError(f"rational {text!r} has zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _form(doc: dict, n: int, where: str) -> LinearForm:
    coeffs = doc["coeffs"]
    if len(coeffs) != n:
        raise SchemaError(f"{where}: expected {n} coefficients, got {len(coeffs)}")
    return LinearForm(tuple(parse_rational(c) for c in coeffs), parse_rational(doc.get("const", "0")))


def load_document(doc: dict) -> tuple:
    """(arrangement, f0 or None) from a decoded JSON document."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"{path or '<root>'}: {exc.message}") from None
    n = doc["dimension"]
    forms, weights = [], []
    for k, h in enumerate(doc["hyperplanes"]):
        forms.append(_form(h, n, f"hyperplanes/{k}"))
        w = h["weight"]
        weights.append(complex(w["re"], w.get("im", 0.0)))
    f0 = _form(doc["f0"], n, "f0") if "f0" in doc else None
    return build_arrangement(n, forms, weights), f0


def load(path) -> tuple:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return load_document(doc)


def form_to_json(f: LinearForm) -> dict:
    return {"coeffs": [format_rational(c) for c in f.homogeneous], "const": format_rational(f.constant)}


def to_document(A: Arrangement, f0: LinearForm | None = None, name: str | None = None) -> dict:
    doc = {"version": SCHEMA_VERSION, "dimension": A.dimension, "hyperplanes": []}
    if name:
        doc["name"] = name
    for f, w in zip(A.forms, A.weights):
        entry = form_to_json(f)
        entry["weight"] = {"re": w.real, "im": w.imag}
        doc["hyperplanes"].append(entry)
    if f0 is not None:
        doc["f0"] = form_to_json(f0)
    return doc


def complex_json(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}
