"""JSON wire formats for functions, series, atlases, and Weyl elements.

Rationals travel as strings "p/q" (or "p") so no precision is lost; inputs
are validated against the schemas shipped in dqkit/schemas before parsing.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any, Dict

import jsonschema

from .coeffring import AnyRep, Box, PolyRep, SumRep, TrigRep
from .formal import FormalFunction
from .frechet import Atlas
from .intervals import QQi
from .star import SymplecticStructure
from .trace import TraceValue
from .weyl import WeylElement


class ValidationError(Exception):
    """Input JSON failed schema validation or semantic checks."""


def _load_schema(name: str) -> Dict[str, Any]:
    with resources.files("dqkit.schemas").joinpath(f"{name}.json").open() as fh:
        return json.load(fh)


_SCHEMA_CACHE: Dict[str, Dict[str, Any]] = {}


def validate(obj: Any, schema_name: str):
    if schema_name not in _SCHEMA_CACHE:
        _SCHEMA_CACHE[schema_name] = _load_schema(schema_name)
    try:
        jsonschema.validate(obj, _SCHEMA_CACHE[schema_name])
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ValidationError(f"{schema_name}: {exc.message} (at /{path})") from exc


def rat_to_str(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def rat_from_str(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational literal {s!r}") from exc


# -- smooth representations ------------------------------------------------

def smoothrep_to_json(f: AnyRep) -> Dict[str, Any]:
    if isinstance(f, PolyRep):
        return {"kind": "poly", "dim": f.dim,
                "terms": [{"exp": list(e), "coeff": rat_to_str(c)}
                          for e, c in sorted(f.terms.items())]}
    if isinstance(f, TrigRep):
        return {"kind": "trig", "dim": f.dim,
                "modes": [{"k": list(k), "re": rat_to_str(c.re),
                           "im": rat_to_str(c.im)}
                          for k, c in sorted(f.modes.items())]}
    if isinstance(f, SumRep):
        return {"kind": "sum",
                "parts": [smoothrep_to_json(p) for p in (f.parts or (PolyRep(f.dim),))]}
    raise TypeError(f"not a smooth representation: {type(f)!r}")


def smoothrep_from_json(obj: Dict[str, Any]) -> AnyRep:
    validate(obj, "function")
    return _smoothrep_from_checked(obj)


def _smoothrep_from_checked(obj: Dict[str, Any]) -> AnyRep:
    kind = obj["kind"]
    if kind == "poly":
        terms = {tuple(t["exp"]): rat_from_str(t["coeff"]) for t in obj["terms"]}
        return PolyRep(obj["dim"], terms)
    if kind == "trig":
        modes = {tuple(m["k"]): QQi(rat_from_str(m["re"]), rat_from_str(m["im"]))
                 for m in obj["modes"]}
        return TrigRep(obj["dim"], modes)
    parts = [_smoothrep_from_checked(p) for p in obj["parts"]]
    if not parts:
        raise ValidationError("sum needs at least one part")
    acc = SumRep.of(parts[0])
    for p in parts[1:]:
        acc = acc + SumRep.of(p)
    return acc


# -- formal functions ------------------------------------------------------

def formal_to_json(f: FormalFunction) -> Dict[str, Any]:
    return {"N": f.N, "coeffs": [smoothrep_to_json(c) for c in f.coeffs]}


def formal_from_json(obj: Dict[str, Any]) -> FormalFunction:
    validate(obj, "formal")
    for c in obj["coeffs"]:
        validate(c, "function")
    coeffs = [_smoothrep_from_checked(c) for c in obj["coeffs"]]
    if len(coeffs) != obj["N"] + 1:
        raise ValidationError("coeffs length must be N+1")
    return FormalFunction(coeffs, obj["N"])


# -- boxes and atlases -----------------------------------------------------

def box_to_json(b: Box) -> Dict[str, Any]:
    return {"lo": [rat_to_str(v) for v in b.lo],
            "hi": [rat_to_str(v) for v in b.hi]}


def box_from_json(obj: Dict[str, Any]) -> Box:
    validate(obj, "box")
    return Box([rat_from_str(v) for v in obj["lo"]],
               [rat_from_str(v) for v in obj["hi"]])


def atlas_to_json(a: Atlas) -> Dict[str, Any]:
    return {"manifold": a.manifold,
            "charts": [box_to_json(c) for c in a.charts]}


def atlas_from_json(obj: Dict[str, Any]) -> Atlas:
    validate(obj, "atlas")
    charts = [Box([rat_from_str(v) for v in c["lo"]],
                  [rat_from_str(v) for v in c["hi"]]) for c in obj["charts"]]
    try:
        return Atlas(charts, obj["manifold"])
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


# -- symplectic structures -------------------------------------------------

def omega_to_json(S: SymplecticStructure) -> Dict[str, Any]:
    return {"omega_lower": [[rat_to_str(v) for v in row]
                            for row in S.omega_lower]}


def omega_from_json(obj: Dict[str, Any]) -> SymplecticStructure:
    validate(obj, "omega")
    rows = [[rat_from_str(v) for v in row] for row in obj["omega_lower"]]
    try:
        return SymplecticStructure(rows)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


# -- Weyl elements ---------------------------------------------------------

def weyl_to_json(a: WeylElement) -> Dict[str, Any]:
    terms = []
    for (k, I, J), c in sorted(a.terms.items()):
        terms.append({"k": k, "y": list(I), "dx": list(J),
                      "coeff": smoothrep_to_json(c)})
    return {"dim": a.dim, "W": a.W, "terms": terms}


def weyl_from_json(obj: Dict[str, Any]) -> WeylElement:
    validate(obj, "weyl")
    terms = {}
    for t in obj["terms"]:
        validate(t["coeff"], "function")
        key = (t["k"], tuple(t["y"]), tuple(t["dx"]))
        terms[key] = _smoothrep_from_checked(t["coeff"])
    try:
        return WeylElement(obj["dim"], obj["W"], terms)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


# -- trace values ----------------------------------------------------------

def trace_to_json(t: TraceValue) -> Dict[str, Any]:
    return {"coeffs": [{"re": rat_to_str(c.re), "im": rat_to_str(c.im),
                        "twopi_pow": t.twopi_pow} for c in t.coeffs]}
