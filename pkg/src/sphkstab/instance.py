"""JSON instance documents: schema, parsing, and serialization.

Rationals are JSON integers or strings such as ``"3/2"``; reals (the soliton
vector field, tolerances) are decimal strings or JSON numbers.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import jsonschema

from . import _linalg as la
from .cones import ValuationConeData
from .errors import InputError
from .kstab import SphericalDatum, make_datum
from .polytope import from_halfspaces, from_vertices
from .rootsys import RootSystemData, build_root_system, from_simple_roots, product_root_system, torus

RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?\d+\s*(/\s*[+-]?\d+\s*)?$"},
    ]
}
REAL = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$"},
    ]
}
VECTOR = {"type": "array", "items": RATIONAL}
VECTORS = {"type": "array", "items": VECTOR}

SIMPLE_FACTOR = {
    "type": "object",
    "properties": {
        "type": {"type": "string", "enum": list("ABCDEFG")},
        "rank": {"type": "integer", "minimum": 1},
    },
    "required": ["type", "rank"],
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "spherical K-stability instance",
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "note": {"type": "string"},
        "root_system": {
            "type": "object",
            "properties": {
                "type": {"type": "string", "enum": list("ABCDEFG")},
                "rank": {"type": "integer", "minimum": 1},
                "components": {"type": "array", "items": SIMPLE_FACTOR},
                "center": {"type": "integer", "minimum": 0},
                "simple_roots": VECTORS,
                "form": VECTORS,
            },
            "additionalProperties": False,
        },
        "polytope": {
            "type": "object",
            "properties": {
                "vertices": {"type": "array", "items": VECTOR, "minItems": 1},
                "halfspaces": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "properties": {"normal": VECTOR, "offset": RATIONAL},
                        "required": ["normal", "offset"],
                        "additionalProperties": False,
                    },
                },
            },
            "oneOf": [{"required": ["vertices"]}, {"required": ["halfspaces"]}],
            "additionalProperties": False,
        },
        "density": {
            "type": "object",
            "properties": {
                "phi_p": {
                    "oneOf": [
                        {"const": "auto"},
                        {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "properties": {
                                    "root": VECTOR,
                                    "multiplicity": {"type": "integer", "minimum": 1},
                                },
                                "required": ["root"],
                                "additionalProperties": False,
                            },
                        },
                    ]
                },
                "two_rho_p": VECTOR,
            },
            "additionalProperties": False,
        },
        "valuation": {
            "type": "object",
            "properties": {
                "rays": VECTORS,
                "lineality_basis": VECTORS,
                "m_minus_basis": VECTORS,
            },
            "required": ["rays", "lineality_basis", "m_minus_basis"],
            "additionalProperties": False,
        },
        "zeta": {
            "type": "object",
            "properties": {"lift": {"type": "array", "items": REAL}},
            "required": ["lift"],
            "additionalProperties": False,
        },
        "options": {
            "type": "object",
            "properties": {
                "tolerance": REAL,
                "level": {"type": "integer", "minimum": 1},
                "max_iter": {"type": "integer", "minimum": 1},
                "lattice_basis": VECTORS,
                "base_point": VECTOR,
            },
            "additionalProperties": False,
        },
    },
    "required": ["root_system", "polytope", "valuation"],
    "additionalProperties": False,
}


@dataclass
class Instance:
    datum: SphericalDatum
    options: dict = field(default_factory=dict)
    document: dict = field(default_factory=dict)

    @property
    def tolerance(self) -> float:
        return float(self.options.get("tolerance", 1e-10))

    @property
    def lattice_basis(self):
        lb = self.options.get("lattice_basis")
        return None if lb is None else [_vec(v, "/options/lattice_basis") for v in lb]

    @property
    def base_point(self):
        bp = self.options.get("base_point")
        return None if bp is None else _vec(bp, "/options/base_point")


def _rat(x: Any, path: str) -> Fraction:
    try:
        return la.frac(x)
    except (ZeroDivisionError, ValueError, TypeError) as exc:
        raise InputError(f"malformed rational {x!r} ({exc})", path) from None


def _vec(xs, path: str) -> tuple:
    return tuple(_rat(x, f"{path}/{i}") for i, x in enumerate(xs))


def _vecs(rows, path: str) -> list:
    return [_vec(r, f"{path}/{i}") for i, r in enumerate(rows)]


def _real(x: Any, path: str) -> float:
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise InputError(f"malformed real {x!r}", path) from None
    if v != v or v in (float("inf"), float("-inf")):
        raise InputError("reals must be finite", path)
    return v


def _root_system(sec: dict) -> RootSystemData:
    path = "/root_system"
    has_type = "type" in sec or "rank" in sec
    has_comp = "components" in sec
    has_explicit = "simple_roots" in sec or "form" in sec
    if sum((has_type, has_comp, has_explicit)) != 1:
        if not (has_type or has_comp or has_explicit) and "center" in sec:
            return torus(sec["center"])
        raise InputError("give exactly one of type/rank, components, or simple_roots/form", path)
    if has_explicit:
        if "form" not in sec or "simple_roots" not in sec:
            raise InputError("simple_roots and form must be given together", path)
        if "center" in sec:
            raise InputError("center is implied by the form when simple roots are explicit", path)
        form = _vecs(sec["form"], f"{path}/form")
        roots = _vecs(sec["simple_roots"], f"{path}/simple_roots")
        if not form:
            raise InputError("form must be nonempty", f"{path}/form")
        return from_simple_roots(roots, form)
    center = sec.get("center", 0)
    if has_type:
        if "type" not in sec or "rank" not in sec:
            raise InputError("type and rank must be given together", path)
        return build_root_system(sec["type"], sec["rank"], center)
    parts = [build_root_system(c["type"], c["rank"]) for c in sec["components"]]
    if center:
        parts.append(torus(center))
    if not parts:
        raise InputError("empty root system", path)
    return product_root_system(parts)


def _raise_schema(err: jsonschema.ValidationError) -> None:
    path = "/" + "/".join(str(p) for p in err.absolute_path)
    raise InputError(err.message, path)


def parse_document(doc: Any) -> Instance:
    """Validate a decoded JSON document and build the datum."""
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object", "/")
    val = doc.get("valuation")
    if isinstance(val, dict) and "lineality_basis" not in val:
        raise InputError("lineality_basis required (may be empty list)", "/valuation/lineality_basis")
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(list(e.absolute_path)), e.message))
    if errors:
        # report the deepest error: it names the offending field
        _raise_schema(max(errors, key=lambda e: len(list(e.absolute_path))))
    rs = _root_system(doc["root_system"])
    n = rs.ambient_dim

    poly_sec = doc["polytope"]
    if "vertices" in poly_sec:
        verts = _vecs(poly_sec["vertices"], "/polytope/vertices")
        for i, v in enumerate(verts):
            if len(v) != n:
                raise InputError(f"expected {n} coordinates", f"/polytope/vertices/{i}")
        polytope = from_vertices(verts)
    else:
        hs = []
        for i, h in enumerate(poly_sec["halfspaces"]):
            normal = _vec(h["normal"], f"/polytope/halfspaces/{i}/normal")
            if len(normal) != n:
                raise InputError(f"expected {n} coordinates", f"/polytope/halfspaces/{i}/normal")
            hs.append((normal, _rat(h["offset"], f"/polytope/halfspaces/{i}/offset")))
        polytope = from_halfspaces(hs)

    v = doc["valuation"]
    rays = _vecs(v["rays"], "/valuation/rays")
    lin = _vecs(v["lineality_basis"], "/valuation/lineality_basis")
    mm = _vecs(v["m_minus_basis"], "/valuation/m_minus_basis")
    vc = ValuationConeData.build(rays, lin, mm, dim=n)

    dens = doc.get("density", {})
    phi = dens.get("phi_p", "auto")
    phi_p = None
    if phi != "auto":
        phi_p = []
        for i, item in enumerate(phi):
            root = _vec(item["root"], f"/density/phi_p/{i}/root")
            if len(root) != n:
                raise InputError(f"expected {n} coordinates", f"/density/phi_p/{i}/root")
            if root not in rs.positive_roots:
                raise InputError("not a positive root of the root system", f"/density/phi_p/{i}/root")
            phi_p += [root] * item.get("multiplicity", 1)
    trp = _vec(dens["two_rho_p"], "/density/two_rho_p") if "two_rho_p" in dens else None

    zeta = None
    if "zeta" in doc:
        zeta = tuple(_real(x, f"/zeta/lift/{i}") for i, x in enumerate(doc["zeta"]["lift"]))
        if len(zeta) != n:
            raise InputError(f"expected {n} coordinates", "/zeta/lift")

    options = dict(doc.get("options", {}))
    if "tolerance" in options:
        t = _real(options["tolerance"], "/options/tolerance")
        if t <= 0:
            raise InputError("tolerance must be positive", "/options/tolerance")
    for key in ("lattice_basis",):
        if key in options:
            for i, b in enumerate(_vecs(options[key], f"/options/{key}")):
                if len(b) != n:
                    raise InputError(f"expected {n} coordinates", f"/options/{key}/{i}")
    if "base_point" in options and len(options["base_point"]) != n:
        raise InputError(f"expected {n} coordinates", "/options/base_point")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        datum = make_datum(rs, polytope, vc, phi_p=phi_p, two_rho_p=trp, zeta_lift=zeta,
                           name=doc.get("name", ""))
    return Instance(datum, options, doc)


def parse_instance(text: str) -> Instance:
    """Parse UTF-8 JSON text into an :class:`Instance`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"JSON syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_document(doc)


def dumps(doc: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def rational_list(v) -> list[str]:
    return la.fmt_vec(v)


def rational_lists(vs) -> list[list[str]]:
    return [la.fmt_vec(v) for v in vs]
