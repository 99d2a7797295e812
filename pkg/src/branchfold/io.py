"""JSON formats, schema validation and workspaces.

Every persisted object is a JSON document with a ``kind`` tag.  Loading
validates against the shipped schema, so malformed files surface as
:class:`InputError` instead of deep failures.  Exact rationals serialize as
``{"num": p, "den": q}``.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .charts import Chart
from .complex import Complex, Subcomplex
from .covering import CoveringMap, MonodromyCocycle
from .action import SimplicialAction
from .errors import InputError, IOFailure
from .perm import Permutation, PermGroup
from .presentation import SingularComponent

SCHEMA_FILE = "schema.json"


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("branchfold").joinpath(SCHEMA_FILE).read_text()
    return json.loads(text)


def validate(doc: Any, definition: str) -> None:
    full = schema()
    sub = {"$ref": f"#/$defs/{definition}", "$defs": full["$defs"]}
    try:
        jsonschema.validate(doc, sub)
    except jsonschema.ValidationError as exc:
        raise InputError(f"invalid {definition} document: {exc.message}") from exc


# ---------------------------------------------------------------------------
# Rationals and permutations
# ---------------------------------------------------------------------------

def rational_to_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def rational_from_json(d: Mapping) -> Fraction:
    return Fraction(d["num"], d["den"])


def perm_from_text(text: str, degree: int) -> Permutation:
    try:
        return Permutation.parse(text, degree)
    except (ValueError, KeyError) as exc:
        raise InputError(f"bad permutation {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# Object codecs
# ---------------------------------------------------------------------------

def complex_to_json(c: Complex) -> dict:
    return {"kind": "complex", "top": [list(t) for t in sorted(c.maximal)]}


def complex_from_json(d: Mapping) -> Complex:
    validate(d, "complex")
    return Complex.from_top([tuple(t) for t in d["top"]])


def subcomplex_from_json(parent: Complex, d: Mapping) -> Subcomplex:
    validate(d, "subcomplex")
    return Subcomplex.closure(parent, [tuple(s) for s in d["simplices"]])


def cocycle_to_json(mc: MonodromyCocycle) -> dict:
    return {
        "kind": "monodromy",
        "base": complex_to_json(mc.base),
        "branch": [list(s) for s in sorted(mc.branch.simplices)],
        "sheets": mc.sheets,
        "transitions": [{"from": list(a), "to": list(b), "perm": str(p)} for a, b, p in mc.listed()],
    }


def cocycle_from_json(d: Mapping) -> MonodromyCocycle:
    validate(d, "monodromy")
    base = complex_from_json(d["base"])
    n = d["sheets"]
    given = {}
    for t in d["transitions"]:
        a, b = tuple(sorted(t["from"])), tuple(sorted(t["to"]))
        given[(a, b)] = perm_from_text(t["perm"], n)
    return MonodromyCocycle.build(base, [tuple(s) for s in d["branch"]], n, given)


def covering_to_json(f: CoveringMap) -> dict:
    return {
        "kind": "covering",
        "total": complex_to_json(f.total),
        "base": complex_to_json(f.base),
        "vertex_map": {str(v): w for v, w in sorted(f.vertex_map.items())},
        "degree": f.degree,
    }


def covering_from_json(d: Mapping) -> CoveringMap:
    validate(d, "covering")
    total = complex_from_json(d["total"])
    base = complex_from_json(d["base"])
    vmap = {int(v): w for v, w in d["vertex_map"].items()}
    f = CoveringMap.build(total, base, vmap)
    if f.degree != d["degree"]:
        raise InputError(f"declared degree {d['degree']} but the map has degree {f.degree}")
    return f


def action_to_json(a: SimplicialAction) -> dict:
    names = a.names or tuple(f"g{i + 1}" for i in range(len(a.group.generators)))
    return {
        "kind": "action",
        "complex": complex_to_json(a.complex),
        "generators": [{"name": n, "vertex_perm": str(g)} for n, g in zip(names, a.group.generators)],
    }


def action_from_json(d: Mapping) -> SimplicialAction:
    validate(d, "action")
    c = complex_from_json(d["complex"])
    n = max(c.vertices)
    gens = [perm_from_text(g["vertex_perm"], n) for g in d["generators"]]
    names = [g.get("name", f"g{i + 1}") for i, g in enumerate(d["generators"])]
    return SimplicialAction.from_generators(c, gens, names)


def chart_to_json(c: Chart) -> dict:
    out = {
        "kind": "chart",
        "complex": complex_to_json(c.P),
        "G": [str(g) for g in c.G.generators],
        "H": [str(g) for g in c.H.generators],
        "K": [str(g) for g in c.K.generators],
    }
    if c.apex is not None:
        out["apex"] = c.apex
    return out


def chart_from_json(d: Mapping) -> Chart:
    validate(d, "chart")
    P = complex_from_json(d["complex"])
    n = max(P.vertices)

    def group(key: str) -> PermGroup:
        return PermGroup.generate([perm_from_text(t, n) for t in d[key]], n)

    apex = d.get("apex")
    if apex is not None and (apex,) not in P.simplices:
        raise InputError(f"apex {apex} is not a vertex")
    return Chart(P, group("G"), group("H"), group("K"), apex)


def instance_to_json(c: Complex, comps: list[SingularComponent]) -> dict:
    return {
        "kind": "branchfold",
        "complex": complex_to_json(c),
        "singular": [{"simplices": [list(s) for s in comp.simplices], "h": comp.h, "k": comp.k}
                     for comp in comps],
    }


def instance_from_json(d: Mapping) -> tuple[Complex, list[SingularComponent]]:
    validate(d, "branchfold")
    c = complex_from_json(d["complex"])
    comps = [SingularComponent(tuple(tuple(s) for s in e["simplices"]), e["h"], e.get("k", 1))
             for e in d["singular"]]
    return c, comps


def angles_to_json(angles: list[str]) -> dict:
    return {"kind": "angles", "angles": list(angles)}


LOADERS = {
    "complex": complex_from_json,
    "monodromy": cocycle_from_json,
    "covering": covering_from_json,
    "action": action_from_json,
    "chart": chart_from_json,
    "branchfold": instance_from_json,
}

DUMPERS = {
    Complex: complex_to_json,
    MonodromyCocycle: cocycle_to_json,
    CoveringMap: covering_to_json,
    SimplicialAction: action_to_json,
    Chart: chart_to_json,
}


def to_json(obj: Any) -> dict:
    for cls, fn in DUMPERS.items():
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"no serializer for {type(obj).__name__}")


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Files and workspaces
# ---------------------------------------------------------------------------

def read_document(path: Path | str) -> dict:
    p = Path(path)
    try:
        return json.loads(p.read_text())
    except FileNotFoundError as exc:
        raise IOFailure(f"no such file: {p}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{p} is not valid JSON: {exc}") from exc
    except OSError as exc:
        raise IOFailure(str(exc)) from exc


def load(path: Path | str, kind: str | None = None) -> Any:
    doc = read_document(path)
    k = kind or doc.get("kind")
    if k not in LOADERS:
        raise InputError(f"{path}: unknown object kind {k!r}")
    if kind and doc.get("kind", kind) != kind:
        raise InputError(f"{path}: expected a {kind} document, found {doc.get('kind')}")
    return LOADERS[k](doc)


def write_document(path: Path | str, doc: Any) -> str:
    p = Path(path)
    text = dumps(doc)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    except OSError as exc:
        raise IOFailure(str(exc)) from exc
    return hashlib.sha256(text.encode()).hexdigest()


class Workspace:
    """A directory of named JSON objects with a hash manifest."""

    MANIFEST = "manifest.json"

    def __init__(self, root: Path | str) -> None:
        self.root = Path(root)

    def path(self, name: str | Path) -> Path:
        p = Path(name)
        return p if p.is_absolute() else self.root / p

    def manifest(self) -> dict[str, str]:
        p = self.root / self.MANIFEST
        if not p.exists():
            return {}
        return read_document(p).get("files", {})

    def save(self, name: str, obj_or_doc: Any) -> Path:
        doc = obj_or_doc if isinstance(obj_or_doc, dict) else to_json(obj_or_doc)
        target = self.path(name)
        digest = write_document(target, doc)
        files = self.manifest()
        files[str(Path(name))] = digest
        write_document(self.root / self.MANIFEST, {"kind": "manifest", "files": files})
        return target

    def load(self, name: str | Path, kind: str | None = None) -> Any:
        return load(self.path(name), kind)

    def verify(self) -> dict[str, bool]:
        out = {}
        for name, digest in self.manifest().items():
            p = self.path(name)
            out[name] = p.exists() and hashlib.sha256(p.read_bytes()).hexdigest() == digest
        return out
