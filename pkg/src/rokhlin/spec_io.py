"""ActionSpec JSON: schema, parsing, canonical serialization and digests.

Canonical JSON has sorted keys, two-space indentation with scalar-only
lists kept on one line, rationals as "p/q" strings and floats printed with
17 significant digits, so equal values always produce equal bytes.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction

import jsonschema
import numpy as np

from .action import (
    ActionSpec,
    CharValues,
    ExplicitMatrices,
    IntegerPolynomial,
    LevelRep,
    ModelLevel,
    ModelTail,
    MultVector,
)
from .cyclotomic import CyclotomicNumber, format_fraction, parse_fraction, totient
from .errors import SpecValidationError
from .groups import ClassFunction, GroupModel, make_abelian, make_cyclic, make_table

_RATIONAL = {"type": "string", "pattern": r"^\s*-?\d+(/\d+)?\s*$"}
_CYCLO = {
    "type": "object",
    "required": ["conductor", "coeffs"],
    "properties": {
        "conductor": {"type": "integer", "minimum": 1},
        "coeffs": {"type": "array", "items": _RATIONAL},
    },
    "additionalProperties": False,
}
_NAT = {"type": "integer", "minimum": 0}
_MULTS_BODY = {
    "type": "object",
    "required": ["type", "mults"],
    "properties": {"type": {"const": "mults"}, "mults": {"type": "array", "items": _NAT}},
    "additionalProperties": False,
}
_CHAR_BODY = {
    "type": "object",
    "required": ["type", "values"],
    "properties": {"type": {"const": "char"}, "values": {"type": "array", "items": _CYCLO}},
    "additionalProperties": False,
}


def _by_type(field: str, variants: dict) -> dict:
    """Discriminated union keyed on ``field`` with readable error paths."""
    return {
        "type": "object",
        "required": [field],
        "properties": {field: {"enum": list(variants)}},
        "allOf": [
            {"if": {"properties": {field: {"const": k}}, "required": [field]}, "then": v}
            for k, v in variants.items()
        ],
    }


_REMAINDER = {"oneOf": [{"type": "null"}, _by_type("type", {"mults": _MULTS_BODY, "char": _CHAR_BODY})]}
_BODY = _by_type(
    "type",
    {
        "mults": _MULTS_BODY,
        "char": _CHAR_BODY,
        "model": {
            "required": ["r", "s"],
            "properties": {"type": {}, "r": _NAT, "s": _NAT, "remainder": _REMAINDER},
            "additionalProperties": False,
        },
        "matrices": {
            "required": ["generators"],
            "properties": {
                "type": {},
                "generators": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                    },
                },
            },
            "additionalProperties": False,
        },
    },
)
_GROUP = _by_type(
    "kind",
    {
        "cyclic": {
            "required": ["n"],
            "properties": {"kind": {}, "n": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
        "abelian": {
            "required": ["orders"],
            "properties": {
                "kind": {},
                "orders": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
            },
            "additionalProperties": False,
        },
        "table": {
            "required": ["classes", "exponent", "irreducibles"],
            "properties": {
                "kind": {},
                "classes": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["size"],
                        "properties": {"size": {"type": "integer", "minimum": 1}},
                        "additionalProperties": False,
                    },
                },
                "exponent": {"type": "integer", "minimum": 1},
                "irreducibles": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["dim", "values"],
                        "properties": {
                            "dim": {"type": "integer", "minimum": 1},
                            "values": {"type": "array", "items": _CYCLO},
                        },
                        "additionalProperties": False,
                    },
                },
            },
            "additionalProperties": False,
        },
    },
)
_TAIL = {
    "oneOf": [
        {"type": "null"},
        {
            "type": "object",
            "required": ["period"],
            "properties": {"period": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["model"],
            "properties": {
                "model": {
                    "type": "object",
                    "required": ["r", "s"],
                    "properties": {
                        "r": {"type": "array", "items": _RATIONAL},
                        "s": {"type": "array", "items": _RATIONAL},
                        "character": _NAT,
                    },
                    "additionalProperties": False,
                }
            },
            "additionalProperties": False,
        },
    ]
}

SPEC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["group", "levels"],
    "properties": {
        "group": _GROUP,
        "levels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["dim", "body"],
                "properties": {"dim": {"type": "integer", "minimum": 1}, "body": _BODY},
                "additionalProperties": False,
            },
        },
        "tail": _TAIL,
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(SPEC_SCHEMA)


def format_path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _schema_errors(obj) -> list[SpecValidationError]:
    errs = []
    for e in _VALIDATOR.iter_errors(obj):
        # descend into the most specific failure of a oneOf / if-then
        leaf = e
        while leaf.context:
            leaf = max(leaf.context, key=lambda x: len(x.absolute_path))
        errs.append(SpecValidationError(format_path(leaf.absolute_path), leaf.message))
    errs.sort(key=lambda x: x.path)
    return errs


# parsing --------------------------------------------------------------------


def _cyclo(obj, path: str) -> CyclotomicNumber:
    n = obj["conductor"]
    if len(obj["coeffs"]) != totient(n):
        raise SpecValidationError(f"{path}.coeffs", f"conductor {n} needs {totient(n)} coefficients")
    return CyclotomicNumber(n, [parse_fraction(c) for c in obj["coeffs"]])


def _parse_group(obj) -> GroupModel:
    kind = obj["kind"]
    if kind == "cyclic":
        return make_cyclic(obj["n"])
    if kind == "abelian":
        g = make_abelian(obj["orders"])
        return g
    irr = [
        (r["dim"], [_cyclo(v, f"group.irreducibles[{i}].values[{j}]") for j, v in enumerate(r["values"])])
        for i, r in enumerate(obj["irreducibles"])
    ]
    return make_table([c["size"] for c in obj["classes"]], obj["exponent"], irr)


def _parse_char(group: GroupModel, values, path: str) -> CharValues:
    vals = tuple(_cyclo(v, f"{path}[{j}]") for j, v in enumerate(values))
    if len(vals) != group.num_classes:
        raise SpecValidationError(path, f"expected {group.num_classes} values, got {len(vals)}")
    return CharValues(ClassFunction(group, vals))


def _parse_simple(group: GroupModel, body, path: str):
    if body["type"] == "mults":
        return MultVector(tuple(body["mults"]))
    return _parse_char(group, body["values"], f"{path}.values")


def _parse_body(group: GroupModel, body, d: int, path: str):
    t = body["type"]
    if t in ("mults", "char"):
        return _parse_simple(group, body, path)
    if t == "model":
        rem = body.get("remainder")
        rem = None if rem is None else _parse_simple(group, rem, f"{path}.remainder")
        return ModelLevel(body["r"], body["s"], rem)
    gens = []
    for k, flat in enumerate(body["generators"]):
        if len(flat) != d * d:
            raise SpecValidationError(f"{path}.generators[{k}]", f"expected {d * d} entries for dim {d}, got {len(flat)}")
        arr = np.array([complex(re, im) for re, im in flat], dtype=complex).reshape(d, d)
        gens.append(arr)
    return ExplicitMatrices(tuple(gens))


def _poly(coeffs, path: str) -> IntegerPolynomial:
    try:
        return IntegerPolynomial(tuple(parse_fraction(c) for c in coeffs))
    except ValueError as exc:
        raise SpecValidationError(path, str(exc)) from None


def spec_from_obj(obj) -> ActionSpec:
    errs = _schema_errors(obj)
    if errs:
        raise errs[0]
    group = _parse_group(obj["group"])
    levels = []
    for i, lv in enumerate(obj["levels"]):
        path = f"levels[{i}]"
        d = lv["dim"]
        body = _parse_body(group, lv["body"], d, f"{path}.body")
        try:
            levels.append(LevelRep(group, d, body))
        except SpecValidationError as exc:
            raise type(exc)(f"{path}.{exc.path}", exc.message) from None
    tail = obj.get("tail")
    if tail is None:
        return ActionSpec(group, tuple(levels), None)
    if "period" in tail:
        k = tail["period"]
        if k > len(levels):
            raise SpecValidationError("tail.period", f"period {k} exceeds the {len(levels)} listed levels")
        return ActionSpec(group, tuple(levels[: len(levels) - k]), tuple(levels[len(levels) - k :]))
    m = tail["model"]
    mt = ModelTail(_poly(m["r"], "tail.model.r"), _poly(m["s"], "tail.model.s"), m.get("character", 0))
    return ActionSpec(group, tuple(levels), mt)


def parse_spec(text: str) -> ActionSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecValidationError("", f"invalid JSON: {exc}") from None
    return spec_from_obj(obj)


def spec_schema_validate(text: str) -> list[SpecValidationError]:
    """All diagnostics for ``text``; an empty list means the spec is valid."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        return [SpecValidationError("", f"invalid JSON: {exc}")]
    errs = _schema_errors(obj)
    if errs:
        return errs
    try:
        spec_from_obj(obj)
    except SpecValidationError as exc:
        return [exc]
    except ValueError as exc:
        return [SpecValidationError("", str(exc))]
    return []


# serialization ----------------------------------------------------------------


def cyclo_obj(x: CyclotomicNumber) -> dict:
    return x.to_json()


def _group_obj(g: GroupModel) -> dict:
    if g.kind == "cyclic":
        return {"kind": "cyclic", "n": g.orders[0]}
    if g.kind == "abelian":
        return {"kind": "abelian", "orders": list(g.orders)}
    return {
        "kind": "table",
        "classes": [{"size": s} for s in g.class_sizes],
        "exponent": g.exponent,
        "irreducibles": [
            {"dim": r, "values": [cyclo_obj(v) for v in vals]}
            for r, vals in zip(g.irreducible_dims, g.irreducible_values)
        ],
    }


def matrix_obj(m: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(m, dtype=complex).ravel()]


def _body_obj(body) -> dict:
    if isinstance(body, MultVector):
        return {"type": "mults", "mults": list(body.mults)}
    if isinstance(body, CharValues):
        return {"type": "char", "values": [cyclo_obj(v) for v in body.values.values]}
    if isinstance(body, ModelLevel):
        rem = None if body.remainder is None else _body_obj(body.remainder)
        return {"type": "model", "r": body.r, "s": body.s, "remainder": rem}
    return {"type": "matrices", "generators": [matrix_obj(m) for m in body.generators]}


def spec_to_obj(spec: ActionSpec) -> dict:
    levels = [{"dim": lv.dim, "body": _body_obj(lv.body)} for lv in spec.levels_listed()]
    if spec.is_periodic:
        tail = {"period": len(spec.tail)}
    elif isinstance(spec.tail, ModelTail):
        mt = spec.tail
        tail = {
            "model": {
                "r": [format_fraction(c) for c in mt.r.coeffs],
                "s": [format_fraction(c) for c in mt.s.coeffs],
                "character": mt.character,
            }
        }
    else:
        tail = None
    return {"group": _group_obj(spec.group), "levels": levels, "tail": tail}


def serialize_spec(spec: ActionSpec) -> str:
    return canonical_dumps(spec_to_obj(spec))


def report_digest(spec: ActionSpec) -> str:
    return hashlib.sha256(canonical_dumps(spec_to_obj(spec), indent=None).encode()).hexdigest()


# canonical JSON ---------------------------------------------------------------


def _scalar(x) -> str:
    if x is None:
        return "null"
    if x is True:
        return "true"
    if x is False:
        return "false"
    if isinstance(x, Fraction):
        return json.dumps(format_fraction(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError("non-finite float in canonical JSON")
        if x == 0:
            x = 0.0
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _inline(items) -> bool:
    return all(not isinstance(v, (dict, list, tuple)) for v in items) or all(
        isinstance(v, (list, tuple)) and all(not isinstance(w, (dict, list, tuple)) for w in v) and len(v) <= 2
        for v in items
    )


def canonical_dumps(obj, indent: int | None = 2) -> str:
    """Deterministic JSON text; ``indent=None`` gives the compact form."""

    def enc(x, depth: int) -> str:
        if isinstance(x, CyclotomicNumber):
            x = x.to_json()
        if isinstance(x, dict):
            if not x:
                return "{}"
            keys = sorted(x)
            if indent is None:
                return "{" + ",".join(f"{json.dumps(str(k))}:{enc(x[k], depth + 1)}" for k in keys) + "}"
            pad = " " * (indent * (depth + 1))
            body = ",\n".join(f"{pad}{json.dumps(str(k))}: {enc(x[k], depth + 1)}" for k in keys)
            return "{\n" + body + "\n" + " " * (indent * depth) + "}"
        if isinstance(x, (list, tuple)):
            if not x:
                return "[]"
            if indent is None:
                return "[" + ",".join(enc(v, depth + 1) for v in x) + "]"
            if _inline(x):
                return "[" + ", ".join(enc(v, depth + 1) for v in x) + "]"
            pad = " " * (indent * (depth + 1))
            body = ",\n".join(pad + enc(v, depth + 1) for v in x)
            return "[\n" + body + "\n" + " " * (indent * depth) + "]"
        return _scalar(x)

    out = enc(obj, 0)
    return out if indent is None else out + "\n"
