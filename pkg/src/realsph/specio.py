"""Space specifications: JSON parsing, validation, serialization and
construction of the Lie-theoretic objects they describe.

Matrix entries may be integers or strings "p/q"; serialization always
writes strings, so parse(serialize(parse(x))) == parse(x).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from . import linalg as la
from . import liealg
from .errors import InconsistencyError, SpecError
from .linalg import RationalMatrix

BUNDLED = ("sl2-so11", "sl2-so2", "sl3-so12", "group-sl2", "so23-gl2", "sl5-sp4")

_matrix = {"type": "array", "items": {"type": "array", "items": {"type": ["integer", "string"]}}}
_signs = {"type": "array", "items": {"type": "array", "items": {"enum": [1, -1]}}}
_subset = {"type": "array", "items": {"type": "string"}}

SCHEMA: dict = {
    "type": "object",
    "required": ["name", "g", "h", "a", "positive", "lattice"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "g": {"$ref": "#/$defs/algebra"},
        "h": {
            "type": "object",
            "properties": {
                "basis": {"type": "array", "items": _matrix},
                "sp": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                "preserving": _matrix,
            },
            "minProperties": 1, "maxProperties": 1, "additionalProperties": False,
        },
        "a": {"type": "array", "items": _matrix, "minItems": 1},
        "positive": _matrix,
        "X0": _matrix,
        "lattice": {"type": "array", "items": {"type": "array", "items": {"type": ["integer", "string"]}}},
        "torsion": {
            "type": "object",
            "required": ["F_M", "F", "base_point"],
            "additionalProperties": False,
            "properties": {
                "F_M": _signs, "F": _signs, "base_point": {"type": "array", "items": {"enum": [1, -1]}},
                "complex_group": {"type": "boolean"},
                "F_of_I_default": {"enum": ["trivial", "full"]},
                "orbit_h": {"type": "array", "items": {"type": "object", "required": ["label", "h"],
                                                       "properties": {"label": {"type": "string"},
                                                                      "h": {"$ref": "#/properties/h"}}}},
                "F_of_I": {"type": "array", "items": {"type": "object", "required": ["I", "F"],
                                                      "properties": {"I": _subset, "F": _signs}}},
                "fibers": {"type": "array", "items": {"type": "object", "required": ["I"],
                                                      "properties": {"I": _subset,
                                                                     "W_I_sizes": {"type": "array", "items": {"type": "integer"}},
                                                                     "sF_sizes": {"type": "array", "items": {"type": "integer"}}}}},
                "classes": {"type": "array", "items": {"type": "object", "required": ["I", "classes"],
                                                       "properties": {"I": _subset,
                                                                      "classes": {"type": "array", "items": _signs}}}},
            },
        },
        "symmetric": {
            "type": "object", "required": ["type", "rank", "W_H"], "additionalProperties": False,
            "properties": {"type": {"enum": ["A", "B", "C", "D", "BC"]}, "rank": {"type": "integer", "minimum": 1},
                           "W_H": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}},
        },
        "elliptic": {
            "type": "object", "additionalProperties": False,
            "properties": {"family": {"enum": ["SO_n_np1_GL", "SL_odd_Sp"]}, "n": {"type": "integer"},
                           "params": {"type": "array"}, "variant": {"enum": ["paper", "corrected"]},
                           "witnesses": {"type": "array", "items": _matrix}},
        },
    },
    "$defs": {
        "algebra": {
            "type": "object",
            "properties": {
                "sl": {"type": "integer", "minimum": 2},
                "preserving": _matrix,
                "within": {"$ref": "#/$defs/algebra"},
                "direct_sum": {"type": "array", "items": {"$ref": "#/$defs/algebra"}, "minItems": 2},
                "basis": {"type": "array", "items": _matrix},
            },
            "additionalProperties": False,
        }
    },
}


def _q(x) -> Fraction:
    try:
        return la.frac(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError("bad rational entry %r" % (x,)) from exc


def _mat(m) -> RationalMatrix:
    rows = [[_q(x) for x in r] for r in m]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise SpecError("ragged matrix")
    return RationalMatrix.of(rows)


def _canon(obj):
    """Normalize numbers inside matrices to 'p/q' strings, recursively."""
    if isinstance(obj, dict):
        return {k: _canon(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_canon(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return obj if isinstance(obj, int) else la.fmt(obj)
    if isinstance(obj, str):
        try:
            return la.fmt(Fraction(obj))
        except ValueError:
            return obj
    return obj


_MATRIX_KEYS = {"a", "positive", "X0", "preserving", "basis", "lattice", "witnesses"}


def _canon_spec(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if k in _MATRIX_KEYS:
            out[k] = _strings(v)
        elif isinstance(v, dict):
            out[k] = _canon_spec(v)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out[k] = [_canon_spec(x) for x in v]
        else:
            out[k] = v
    return out


def _strings(v):
    if isinstance(v, list):
        return [_strings(x) for x in v]
    if isinstance(v, dict):
        return _canon_spec(v)
    return la.fmt(_q(v))


@dataclass
class SpaceSpec:
    data: dict

    @property
    def name(self) -> str:
        return self.data["name"]

    def __eq__(self, other):
        return isinstance(other, SpaceSpec) and self.data == other.data


def parse(obj: dict | str) -> SpaceSpec:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SpecError("invalid JSON: %s" % exc) from exc
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SpecError("schema violation at %s: %s" % ("/".join(map(str, exc.absolute_path)) or "<root>", exc.message)) from exc
    return SpaceSpec(_canon_spec(obj))


def serialize(spec: SpaceSpec) -> str:
    return json.dumps(spec.data, sort_keys=True, indent=1)


def load(path_or_name: str) -> SpaceSpec:
    p = Path(path_or_name)
    if p.exists():
        return parse(p.read_text())
    if path_or_name in BUNDLED:
        return parse(resources.files("realsph").joinpath("data", path_or_name + ".json").read_text())
    raise SpecError("no such spec file or bundled example: %s" % path_or_name)


# ---------------------------------------------------------- construction

def build_algebra(d: dict) -> liealg.MatrixLieAlgebra:
    if "sl" in d:
        return liealg.sl(d["sl"])
    if "preserving" in d:
        within = build_algebra(d["within"]) if "within" in d else None
        return liealg.preserving(_mat(d["preserving"]), within=within)
    if "direct_sum" in d:
        parts = [build_algebra(x) for x in d["direct_sum"]]
        g = parts[0]
        for p in parts[1:]:
            g = liealg.direct_sum(g, p)
        return g
    if "basis" in d:
        return liealg.MatrixLieAlgebra([_mat(m) for m in d["basis"]])
    raise SpecError("algebra needs one of sl, preserving, direct_sum, basis")


def build_subalgebra(g, d: dict) -> liealg.Subspace:
    if "basis" in d:
        mats = [_mat(m) for m in d["basis"]]
    elif "sp" in d:
        n2, amb = d["sp"]
        mats = list(liealg.sp(n2, amb).basis)
    else:
        h = _intersect_with(g, list(liealg.preserving(_mat(d["preserving"])).basis))
        if not h.is_subalgebra():
            raise InconsistencyError("g cap so(J) is not closed under the bracket")
        return h
    for m in mats:
        if (m.rows, m.cols) != (g.n, g.n) or not g.contains(m):
            raise SpecError("h is not contained in g")
    h = g.subspace(mats)
    if not h.is_subalgebra():
        raise SpecError("h is not a subalgebra")
    return h


def _intersect_with(g, mats) -> liealg.Subspace:
    """g cap span(mats) as a subspace of g."""
    n = g.n
    cols_g = [b.flat() for b in g.basis]
    cols_m = [m.flat() for m in mats]
    # solve sum x_i g_i = sum y_j m_j
    rows = [[cols_g[i][e] for i in range(len(cols_g))] + [-cols_m[j][e] for j in range(len(cols_m))] for e in range(n * n)]
    ker = la.nullspace(rows, len(cols_g) + len(cols_m))
    return liealg.Subspace(g, [tuple(k[:g.dim]) for k in ker])


@dataclass
class Built:
    spec: SpaceSpec
    g: Any
    h: Any
    par: Any
    datum: Any
    roots: Any
    a_given: list = field(default_factory=list)


def build_at_orbit(spec: SpaceSpec, h_spec: dict, bound: int = 2) -> Built:
    """The same space with the stabilizer of another open-orbit base point."""
    d = {k: v for k, v in spec.data.items() if k not in ("X0",)}
    d["h"] = h_spec
    return build(SpaceSpec(d), bound)


def build(spec: SpaceSpec, bound: int = 2) -> Built:
    from .spherical import build_datum, make_parabolic, spherical_roots

    d = spec.data
    g = build_algebra(d["g"])
    h = build_subalgebra(g, d["h"])
    amats = [_mat(m) for m in d["a"]]
    for m in amats:
        if not g.contains(m):
            raise SpecError("a is not contained in g")
    a = g.subspace(amats)
    if a.dim != len(amats):
        raise SpecError("a basis is linearly dependent")
    pos = _mat(d["positive"])
    if not a.contains(pos):
        raise SpecError("positive element is not in a")
    par = make_parabolic(g, a, g.coords(pos))
    # lattice: values on the given a matrices -> values on the canonical basis
    given = [g.coords(m) for m in amats]
    lattice = []
    for vals in d["lattice"]:
        if len(vals) != len(amats):
            raise SpecError("lattice functional needs %d values" % len(amats))
        vals = [_q(v) for v in vals]
        out = []
        for b in a.basis:
            c = la.solve([[gv[i] for gv in given] for i in range(g.dim)], list(b))
            out.append(sum((ci * vi for ci, vi in zip(c, vals)), Fraction(0)))
        lattice.append(tuple(out))
    X0 = g.coords(_mat(d["X0"])) if "X0" in d else None
    datum = build_datum(g, h, par, lattice, name=d["name"], X0=X0, bound=bound)
    roots = spherical_roots(datum)
    return Built(spec, g, h, par, datum, roots, amats)


def subset_from_names(roots, names) -> frozenset:
    return frozenset(roots.index(n) for n in names)
