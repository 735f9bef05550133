"""JSON descriptors for sets, weights and results."""

from __future__ import annotations

import math
from dataclasses import fields, is_dataclass

import jsonschema
import numpy as np

from .domains import Circle, IntervalUnion, Preimage, SampledSet
from .errors import SchemaError, WChebError
from .polynomials import Poly
from .solver import ChebyshevResult
from .weights import (AbsPolyPower, Constant, Pullback, Restricted, Scaled, Tabulated,
                      eps_weight, usc_regularize)

_number = {"type": "number"}
_complex = {"oneOf": [_number, {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}]}
_poly = {"type": "array", "items": _complex, "minItems": 1}

SET_SCHEMA = {
    "type": "object",
    "required": ["type"],
    "properties": {
        "type": {"enum": ["interval", "circle", "sampled", "preimage"]},
        "intervals": {"type": "array", "items": {"type": "array", "items": _number,
                                                  "minItems": 2, "maxItems": 2}, "minItems": 1},
        "center": _complex,
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "points": {"type": "array", "items": _complex, "minItems": 1},
        "p": _poly,
        "base": {"type": "object"},
    },
}

WEIGHT_SCHEMA = {
    "type": "object",
    "required": ["type"],
    "properties": {
        "type": {"enum": ["constant", "abs_poly_power", "pullback", "tabulated", "restricted",
                          "scaled", "eps", "usc"]},
        "value": {"type": "number", "minimum": 0},
        "factors": {"type": "array", "items": {"type": "object", "required": ["p", "alpha"],
                                               "properties": {"p": _poly, "alpha": _number}}},
        "p": _poly,
        "base": {"type": "object"},
        "points": {"type": "array", "items": _complex},
        "values": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "off_grid": {"enum": ["zero", "error", "nearest"]},
        "to": {"type": "object"},
        "eps": {"type": "number", "exclusiveMinimum": 0},
        "n": {"type": "integer", "minimum": 0},
        "density": {"type": "integer", "minimum": 2},
    },
}

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["command"],
    "properties": {
        "command": {"enum": ["solve", "certify", "widom", "bounds", "preimage", "sharpness",
                             "capacity"]},
        "set": SET_SCHEMA,
        "weight": WEIGHT_SCHEMA,
        "w2": WEIGHT_SCHEMA,
        "n": {"oneOf": [{"type": "integer", "minimum": 0},
                        {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}]},
        "p": _poly,
        "P_d": _poly,
        "z": {"type": "array", "items": _complex},
        "eps": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
        "use_poly_approx": {"type": "boolean"},
        "degrees": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "result": {"type": "object"},
        "options": {
            "type": "object",
            "properties": {
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "grid": {"type": "integer", "minimum": 2},
                "quad": {"type": "integer", "minimum": 8},
                "max_iter": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
            },
            "additionalProperties": False,
        },
    },
}


def validate(doc, schema=PROBLEM_SCHEMA, where="problem"):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"{where}/{path}: {exc.message}", path=path) from None


# -- decoding ---------------------------------------------------------------


def to_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def to_poly(coeffs) -> Poly:
    return Poly([to_complex(c) for c in coeffs])


def _need(d, key, where):
    if key not in d:
        raise SchemaError(f"{where}: missing field {key!r}", path=f"{where}/{key}")
    return d[key]


def parse_set(d, where="set"):
    validate(d, SET_SCHEMA, where)
    kind = d["type"]
    try:
        if kind == "interval":
            return IntervalUnion([tuple(iv) for iv in _need(d, "intervals", where)])
        if kind == "circle":
            return Circle(to_complex(d.get("center", 0)), float(d.get("radius", 1.0)))
        if kind == "sampled":
            return SampledSet([to_complex(z) for z in _need(d, "points", where)])
        p = to_poly(_need(d, "p", where))
        return Preimage(p, parse_set(_need(d, "base", where), where + "/base"))
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{where}: {exc}", path=where) from None


def parse_weight(d, K=None, where="weight"):
    validate(d, WEIGHT_SCHEMA, where)
    kind = d["type"]
    try:
        if kind == "constant":
            return Constant(float(d.get("value", 1.0)))
        if kind == "abs_poly_power":
            return AbsPolyPower([(to_poly(f["p"]), float(f["alpha"])) for f in _need(d, "factors", where)])
        if kind == "pullback":
            return Pullback(to_poly(_need(d, "p", where)),
                            parse_weight(_need(d, "base", where), None, where + "/base"))
        if kind == "tabulated":
            pts = [to_complex(z) for z in _need(d, "points", where)]
            return Tabulated(pts, _need(d, "values", where), d.get("off_grid", "zero"))
        if kind == "restricted":
            return Restricted(parse_weight(_need(d, "base", where), K, where + "/base"),
                              parse_set(_need(d, "to", where), where + "/to"))
        if kind == "scaled":
            return Scaled(parse_weight(_need(d, "base", where), K, where + "/base"),
                          float(_need(d, "value", where)))
        if kind == "eps":
            return eps_weight(float(_need(d, "eps", where)), int(_need(d, "n", where)))
        base = parse_weight(_need(d, "base", where), K, where + "/base")
        if K is None:
            raise SchemaError(f"{where}: usc weight needs a set", path=where)
        return usc_regularize(base, K.sample(int(d.get("density", 2000))))
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{where}: {exc}", path=where) from None


def parse_result(d) -> ChebyshevResult:
    T = to_poly(_need(d, "T", "result"))
    ext = tuple((to_complex(e[:2]), float(e[2])) for e in d.get("extremal_points", []))
    return ChebyshevResult(T, from_float(d.get("norm", math.nan)), ext, int(d.get("iterations", 0)),
                           bool(d.get("converged", True)), from_float(d.get("residual", math.nan)),
                           d.get("method", "stored"), from_float(d.get("level", math.nan)))


# -- encoding ---------------------------------------------------------------


def from_float(v):
    # float() also reads the "NaN" / "Infinity" strings written by _num
    return float(v)


def _num(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "NaN" if math.isnan(x) else ("Infinity" if x > 0 else "-Infinity")


def pair(z):
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def encode_poly(P: Poly):
    return [pair(c) for c in P.coeffs]


def encode_result(r: ChebyshevResult):
    return {
        "T": encode_poly(r.T),
        "n": r.n,
        "norm": _num(r.norm),
        "extremal_points": [pair(z) + [_num(v)] for z, v in r.extremal_points],
        "iterations": int(r.iterations),
        "converged": bool(r.converged),
        "residual": _num(r.residual),
        "method": r.method,
        "level": _num(r.level),
    }


def to_jsonable(obj):
    """Recursively turn dataclasses, numpy values and polynomials into JSON data."""
    if isinstance(obj, ChebyshevResult):
        return encode_result(obj)
    if isinstance(obj, Poly):
        return encode_poly(obj)
    if isinstance(obj, WChebError):
        return {"error": obj.reason, "message": str(obj)}
    if is_dataclass(obj):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
        return out
    if hasattr(obj, "_asdict"):
        return {k: to_jsonable(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return pair(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return repr(obj)
