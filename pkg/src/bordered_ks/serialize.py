"""JSON round trip for table bimodules.

Schema (version 1)::

    {"schema": "bordered-ks/da-bimodule", "version": 1,
     "name": str, "out_alg": {"kind": "KS"|"B"|"Cl"|"Clbot", "m": int}, "in_alg": {...},
     "out_hom": hom, "in_hom": hom,           # "identity" or {"name", "matrix", "target"}
     "generators": [{"name", "left", "right", "hom", "grading"}],
     "arrows": [{"source", "inputs": [path], "out": path, "target"}],
     "families": [{"source", "target", "out", "inputs", "k_slot", "u_out": [path], "u_in": [path], "k_min"}],
     "passthrough": null | {"gens": [[vertex, name]], "avoid": int},
     "bounds": null | {...},                   # set when arrows were enumerated from a lazy bimodule
     "metadata": {...}}

Paths are written with the algebra's own notation: ``(0|1|0)`` for the
Khovanov-Seidel algebra, space separated arrow names such as ``R1 L1`` for
the others, ``I3`` for an idempotent.  Refined gradings are integer lists
holding the coordinates times 4; integer gradings are plain integers.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from typing import Any

from .constructions.algebras import OSzAlgebras, build_osz_algebras
from .dastruct import (
    DAError,
    DABimodule,
    Family,
    Gen,
    Passthrough,
    TableBimodule,
    input_pool,
    nonzero_arrows,
)
from .grading import GradingHom, GradingVector, RefinedGrading
from .pathalg import AlgebraError, Path, PresentedAlgebra, identity_grading

SCHEMA = "bordered-ks/da-bimodule"
VERSION = 1


class SchemaError(ValueError):
    """Malformed or inconsistent serialized data; ``where`` names the field."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@lru_cache(maxsize=None)
def algebras(m: int) -> OSzAlgebras:
    """Shared algebra objects, so that loaded bimodules can be tensored and compared."""
    return build_osz_algebras(m)


def get_algebra(kind: str, m: int) -> PresentedAlgebra:
    O = algebras(m)
    table = {"KS": O.A, "B": O.B, "Cl": O.Cl, "Clbot": O.Clbot}
    if kind not in table:
        raise SchemaError("algebra.kind", f"unknown algebra {kind!r}")
    return table[kind]


_ALG_NAMES = [
    (re.compile(r"A(\d+)"), "KS", 1),
    (re.compile(r"B\((\d+),1\)"), "B", 0),
    (re.compile(r"Cl\((\d+),1\)"), "Cl", 0),
    (re.compile(r"Clbot\((\d+),1\)"), "Clbot", 0),
]


def describe_algebra(alg: PresentedAlgebra) -> dict:
    for pat, kind, offset in _ALG_NAMES:
        hit = pat.fullmatch(alg.name)
        if hit:
            return {"kind": kind, "m": int(hit.group(1)) + offset}
    raise SchemaError("algebra", f"cannot serialize algebra {alg.name}")


def _grading_to_json(g) -> Any:
    if isinstance(g, GradingVector):
        return list(g.scaled)
    return g


def _grading_from_json(data, where: str):
    if isinstance(data, int):
        return data
    if isinstance(data, list) and all(isinstance(v, int) for v in data):
        return RefinedGrading(tuple(data))
    raise SchemaError(where, f"bad grading {data!r}")


def _hom_to_json(h) -> Any:
    if isinstance(h, GradingHom):
        return {"name": h.name, "matrix": [list(r) for r in h.matrix], "target": h.target}
    if h is identity_grading:
        return "identity"
    raise SchemaError("hom", "only GradingHom or identity grading maps can be serialized")


def _hom_from_json(data, where: str):
    if data == "identity":
        return identity_grading
    try:
        rows = tuple(tuple(int(c) for c in r) for r in data["matrix"])
        return GradingHom(data["name"], rows, len(rows[0]), data.get("target", "refined"))
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise SchemaError(where, "bad grading homomorphism") from exc


def _metadata_to_json(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        if isinstance(v, GradingVector):
            out[k] = list(v.scaled)
        else:
            out[k] = v
    return out


def to_json(M: DABimodule, max_inputs: int = 3, basis_len: int = 4, k_max: int = 0, u_elements=()) -> dict:
    """Serialize M.  Table bimodules are exact; other bimodules are enumerated within bounds."""
    out_alg, in_alg = M.out_alg, M.in_alg
    doc: dict[str, Any] = {
        "schema": SCHEMA,
        "version": VERSION,
        "name": M.name,
        "out_alg": describe_algebra(out_alg),
        "in_alg": describe_algebra(in_alg),
        "out_hom": _hom_to_json(M.out_hom),
        "in_hom": _hom_to_json(M.in_hom),
        "generators": [
            {"name": g.name, "left": g.left, "right": g.right, "hom": g.hom, "grading": _grading_to_json(g.grading)}
            for g in M.gens
        ],
        "arrows": [],
        "families": [],
        "passthrough": None,
        "bounds": None,
        "metadata": _metadata_to_json(M.metadata),
    }
    if isinstance(M, TableBimodule):
        rows = M.explicit_arrows()
        for f in M.families:
            doc["families"].append({
                "source": f.source,
                "target": f.target,
                "out": out_alg.path_str(f.out),
                "inputs": [in_alg.path_str(a) for a in f.inputs],
                "k_slot": f.slot,
                "u_out": sorted(out_alg.path_str(p) for p in f.u_out.terms),
                "u_in": sorted(in_alg.path_str(p) for p in f.u_in.terms),
                "k_min": f.k_min,
            })
        if M.passthrough is not None:
            doc["passthrough"] = {"gens": [list(p) for p in M.passthrough.gens], "avoid": M.passthrough.avoid}
    else:
        pool = input_pool(in_alg, basis_len, u_elements, k_max)
        rows = list(nonzero_arrows(M, max_inputs, pool))
        doc["bounds"] = {"max_inputs": max_inputs, "basis_len": basis_len, "k_max": k_max}
    seen = set()
    for x, seq, out, y in rows:
        key = (x, seq, out, y)
        if key in seen:
            continue
        seen.add(key)
        doc["arrows"].append({
            "source": x,
            "inputs": [in_alg.path_str(a) for a in seq],
            "out": out_alg.path_str(out),
            "target": y,
        })
    doc["arrows"].sort(key=lambda a: (a["source"], len(a["inputs"]), a["inputs"], a["target"], a["out"]))
    return doc


def dumps(M: DABimodule, **bounds) -> str:
    return json.dumps(to_json(M, **bounds), indent=1, sort_keys=True)


def _path(alg: PresentedAlgebra, text, where: str) -> Path:
    if not isinstance(text, str):
        raise SchemaError(where, f"expected a path string, got {text!r}")
    try:
        p = alg.parse_path(text)
    except (AlgebraError, KeyError, ValueError) as exc:
        raise SchemaError(where, f"cannot parse path {text!r}: {exc}") from exc
    q = alg.reduce(p)
    if q != p:
        raise SchemaError(where, f"path {text!r} is not in normal form")
    return p


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(where, f"missing field {key!r}")
    return obj[key]


def from_json(doc: dict) -> TableBimodule:
    """Rebuild a TableBimodule; every arrow and family is re-validated."""
    if _field(doc, "schema", "$") != SCHEMA:
        raise SchemaError("schema", f"expected {SCHEMA!r}")
    if _field(doc, "version", "$") != VERSION:
        raise SchemaError("version", f"unsupported version {doc['version']!r}")
    algs = []
    for key in ("out_alg", "in_alg"):
        spec = _field(doc, key, "$")
        try:
            algs.append(get_algebra(_field(spec, "kind", key), int(_field(spec, "m", key))))
        except AlgebraError as exc:
            raise SchemaError(key, str(exc)) from exc
    out_alg, in_alg = algs
    gens = []
    for n, g in enumerate(_field(doc, "generators", "$")):
        where = f"generators[{n}]"
        gens.append(Gen(
            str(_field(g, "name", where)),
            int(_field(g, "left", where)),
            int(_field(g, "right", where)),
            int(_field(g, "hom", where)),
            _grading_from_json(_field(g, "grading", where), where + ".grading"),
        ))
    arrows = []
    for n, a in enumerate(_field(doc, "arrows", "$")):
        where = f"arrows[{n}] ({a.get('source')} -> {a.get('target')})" if isinstance(a, dict) else f"arrows[{n}]"
        inputs = tuple(_path(in_alg, t, where + ".inputs") for t in _field(a, "inputs", where))
        out = _path(out_alg, _field(a, "out", where), where + ".out")
        arrows.append((str(_field(a, "source", where)), inputs, out, str(_field(a, "target", where)), where))
    families = []
    for n, f in enumerate(doc.get("families") or []):
        where = f"families[{n}]"
        u_out = out_alg.element([_path(out_alg, t, where + ".u_out") for t in _field(f, "u_out", where)])
        u_in = in_alg.element([_path(in_alg, t, where + ".u_in") for t in _field(f, "u_in", where)])
        families.append(Family(
            str(_field(f, "source", where)),
            str(_field(f, "target", where)),
            _path(out_alg, _field(f, "out", where), where + ".out"),
            tuple(_path(in_alg, t, where + ".inputs") for t in _field(f, "inputs", where)),
            int(_field(f, "k_slot", where)),
            u_out,
            u_in,
            int(f.get("k_min", 0)),
        ))
    pt = doc.get("passthrough")
    passthrough = None
    if pt is not None:
        passthrough = Passthrough(tuple((int(v), str(g)) for v, g in _field(pt, "gens", "passthrough")),
                                  int(_field(pt, "avoid", "passthrough")))
    try:
        M = TableBimodule(
            str(_field(doc, "name", "$")), out_alg, in_alg, gens,
            out_hom=_hom_from_json(_field(doc, "out_hom", "$"), "out_hom"),
            in_hom=_hom_from_json(_field(doc, "in_hom", "$"), "in_hom"),
            families=families,
            passthrough=passthrough,
            metadata=doc.get("metadata") or {},
        )
    except DAError as exc:
        raise SchemaError("$", str(exc)) from exc
    for src, inputs, out, tgt, where in arrows:
        try:
            M.add_arrow(src, inputs, out, tgt)
        except DAError as exc:
            raise SchemaError(where, str(exc)) from exc
    M.bounds = doc.get("bounds")
    return M


def loads(text: str) -> TableBimodule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}", exc.msg) from exc
    return from_json(doc)


def structurally_equal(M: DABimodule, N: DABimodule) -> bool:
    """Same generators and the same serialized arrow data."""
    a, b = to_json(M), to_json(N)
    for d in (a, b):
        d.pop("metadata")
    return a == b
