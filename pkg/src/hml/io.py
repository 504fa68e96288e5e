"""JSON documents: loading, validation and deterministic serialisation.

A document is either one object (its name is the file stem) or a bundle::

    {"kind": "bundle", "field": "Fp:5", "objects": {"A": {...}, "k": {...}}}

Objects refer to each other by name ("A") or by file ("other.json" or
"other.json#A"), relative to the referring file.  Over QQ scalars are
written as "p/q" strings; over GF(p) as integers.  Lattice data is integral
and written as plain integers, with rational period coordinates as strings.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from .algebra import (Algebra, AlgebraError, AlgebraMap, FDModule, ModuleError, ModuleMap,
                      load_algebra, make_module)
from .complexes import ChainMap, Complex, NotAChainMap, NotAComplex, make_complex
from .k3lattice import (EvenLattice, ExtendedLattice, HodgePeriod, LatticeError, LatticeIsometry,
                        MukaiElement, is_isometry)
from .linalg import QQ, Field, LinalgError, Mat

__all__ = [
    "ParseError", "ValidationError", "Entry", "Workspace", "load_workspace", "default_field",
    "dumps", "encode_entry", "serialize_document",
]

OBJECT_KINDS = ("algebra", "module", "map", "complex", "lattice", "extendedLattice",
                "element", "period", "isometry", "kernel")


class ParseError(ValueError):
    """Malformed input text."""


class ValidationError(ValueError):
    """Well-formed input violating an invariant; names the object and invariant."""


def default_field() -> Field:
    return Field.parse(os.environ.get("HML_FIELD", "Q"))


# deterministic JSON -----------------------------------------------------

def _is_scalar(x) -> bool:
    return isinstance(x, (int, float, str, bool)) or x is None


def _flat(x) -> bool:
    return isinstance(x, list) and all(_is_scalar(y) for y in x)


def _dump(x, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if _flat(x):
            return "[" + ", ".join(json.dumps(y) for y in x) + "]"
        items = [f"{inner}{_dump(v, indent + 1)}" for v in x]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(x)


def dumps(x) -> str:
    """Canonical text: two-space indentation, scalar lists kept on one line."""
    return _dump(x, 0) + "\n"


# workspace ---------------------------------------------------------------

@dataclass
class Entry:
    name: str
    kind: str
    obj: object
    source: str
    raw: dict
    field: Field


@dataclass
class Document:
    path: Path
    field: Field
    bundle: bool
    names: list[str]
    kind: str


@dataclass
class Workspace:
    entries: dict[str, Entry] = dc_field(default_factory=dict)
    documents: dict[str, Document] = dc_field(default_factory=dict)
    default: Field = dc_field(default_factory=default_field)

    def get(self, name: str):
        try:
            return self.entries[name].obj
        except KeyError:
            raise ValidationError(f"unknown object {name!r}") from None

    def load(self, path: str | os.PathLike) -> list[str]:
        """Load a document (once); returns the names it defines."""
        p = Path(path).resolve()
        key = str(p)
        if key in self.documents:
            return self.documents[key].names
        try:
            text = p.read_text()
        except OSError as e:
            raise ParseError(f"{path}: {e.strerror}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
        if not isinstance(doc, dict) or "kind" not in doc:
            raise ParseError(f"{path}: top level must be an object with a 'kind'")
        fld = self._field_of(doc, path)
        if doc["kind"] == "bundle":
            objs = doc.get("objects")
            if not isinstance(objs, dict):
                raise ParseError(f"{path}: bundle needs an 'objects' mapping")
            raw = {name: dict(o) for name, o in objs.items()}
            bundle = True
        else:
            raw = {p.stem: {k: v for k, v in doc.items() if k != "field"}}
            bundle = False
        names = list(raw)
        for name in names:
            if name in self.entries or any(name in d.names for d in self.documents.values()):
                raise ValidationError(f"duplicate object name {name!r} in {path}")
        self.documents[key] = Document(p, fld, bundle, names, doc["kind"])
        pending = dict(raw)
        for name in names:
            self._build(name, pending, p, fld)
        return names

    def _field_of(self, doc: dict, path) -> Field:
        if "field" not in doc:
            return self.default
        try:
            return Field.parse(str(doc["field"]))
        except (ValueError, LinalgError) as e:
            raise ParseError(f"{path}: bad field {doc['field']!r}: {e}") from None

    def resolve(self, ref: str, here: Path, pending: dict, fld: Field):
        if not isinstance(ref, str):
            raise ParseError(f"reference must be a string, got {ref!r}")
        if "#" in ref or ref.endswith(".json"):
            file, _, name = ref.partition("#")
            target = (here.parent / file).resolve()
            names = self.load(target)
            name = name or (names[0] if len(names) == 1 else "")
            if not name:
                raise ValidationError(f"reference {ref!r} is ambiguous: name an object with '#'")
            return self.get(name)
        if ref in self.entries:
            return self.entries[ref].obj
        if ref in pending:
            return self._build(ref, pending, here, fld)
        raise ValidationError(f"unresolved reference {ref!r}")

    def _build(self, name: str, pending: dict, here: Path, fld: Field):
        if name in self.entries:
            return self.entries[name].obj
        raw = pending.pop(name, None)
        if raw is None:
            raise ValidationError(f"cyclic or missing reference {name!r}")
        kind = raw.get("kind")
        if kind not in OBJECT_KINDS:
            raise ParseError(f"{name}: unknown kind {kind!r}")
        try:
            obj = _DECODERS[kind](self, name, raw, here, pending, fld)
        except (AlgebraError, ModuleError, NotAComplex, NotAChainMap, LatticeError) as e:
            raise ValidationError(f"{name}: {e}") from None
        except (KeyError, TypeError, ValueError, LinalgError) as e:
            if isinstance(e, (ParseError, ValidationError)):
                raise
            raise ParseError(f"{name}: malformed {kind}: {e!r}") from None
        self.entries[name] = Entry(name, kind, obj, str(here), raw, fld)
        return obj

    # serialisation ------------------------------------------------------

    def document_json(self, path: str | os.PathLike) -> dict:
        d = self.documents[str(Path(path).resolve())]
        fname = d.field.name
        if d.bundle:
            return {"kind": "bundle", "field": fname,
                    "objects": {n: encode_entry(self.entries[n]) for n in d.names}}
        body = encode_entry(self.entries[d.names[0]])
        return {"kind": body["kind"], "field": fname,
                **{k: v for k, v in body.items() if k != "kind"}}


def load_workspace(paths, field: Field | None = None) -> Workspace:
    ws = Workspace(default=field or default_field())
    for p in paths:
        ws.load(p)
    return ws


def serialize_document(ws: Workspace, path) -> str:
    return dumps(ws.document_json(path))


# decoders ----------------------------------------------------------------

def _mat(fld: Field, rows, shape: tuple[int, int] | None = None, what: str = "matrix") -> Mat:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{what} must be a list of rows")
    cols = shape[1] if shape else (len(rows[0]) if rows else 0)
    m = Mat.from_rows(fld, rows, cols) if rows else Mat.zeros(fld, 0, cols)
    if shape is not None and m.shape != shape:
        raise ValidationError(f"{what} has shape {m.shape}, expected {shape}")
    return m


def _dec_algebra(ws, name, raw, here, pending, fld):
    n = raw["dim"]
    alg = load_algebra(fld, raw["structure"], raw["unit"], raw.get("labels"), name=name)
    if alg.dim != n:
        raise ValidationError(f"{name}: dim {n} disagrees with the structure table")
    return alg


def _dec_module(ws, name, raw, here, pending, fld):
    alg = ws.resolve(raw["algebraRef"], here, pending, fld)
    if not isinstance(alg, Algebra):
        raise ValidationError(f"{name}: algebraRef does not name an algebra")
    if alg.field != fld:
        raise ValidationError(f"{name}: module over {fld.name} but its algebra is over {alg.field.name}")
    n = raw["dim"]
    acts = raw["action"]
    if len(acts) != alg.dim:
        raise ValidationError(f"{name}: need {alg.dim} action matrices, got {len(acts)}")
    mats = [_mat(fld, a, (n, n), f"action {i}") for i, a in enumerate(acts)]
    return make_module(alg, mats)


def _dec_map(ws, name, raw, here, pending, fld):
    src = ws.resolve(raw["sourceRef"], here, pending, fld)
    tgt = ws.resolve(raw["targetRef"], here, pending, fld)
    if isinstance(src, Algebra) and isinstance(tgt, Algebra):
        return AlgebraMap(src, tgt, _mat(fld, raw["matrix"], (tgt.dim, src.dim))).check()
    if isinstance(src, FDModule) and isinstance(tgt, FDModule):
        return ModuleMap(src, tgt, _mat(fld, raw["matrix"], (tgt.dim, src.dim))).check()
    if isinstance(src, Complex) and isinstance(tgt, Complex):
        comps = {int(i): _mat(fld, m, (tgt.dim(int(i)), src.dim(int(i))), f"component {i}")
                 for i, m in raw["components"].items()}
        return ChainMap(src, tgt, comps).check()
    raise ValidationError(f"{name}: source and target must both be algebras, modules or complexes")


def _dec_complex(ws, name, raw, here, pending, fld):
    alg = ws.resolve(raw["algebraRef"], here, pending, fld)
    mods = {int(i): ws.resolve(r, here, pending, fld) for i, r in raw["entries"].items()}
    for i, m in mods.items():
        if not isinstance(m, FDModule) or m.algebra is not alg:
            raise ValidationError(f"{name}: entry {i} is not a module over {raw['algebraRef']}")
    diffs = {}
    for i, m in raw.get("differentials", {}).items():
        i = int(i)
        shape = (mods[i + 1].dim if i + 1 in mods else 0, mods[i].dim if i in mods else 0)
        diffs[i] = _mat(fld, m, shape, f"differential {i}")
    return make_complex(alg, mods, diffs)


def _int_rows(rows, what: str) -> list[list[int]]:
    out = []
    for r in rows:
        row = []
        for x in r:
            q = Fraction(x)
            if q.denominator != 1:
                raise ValidationError(f"{what} entry {x!r} is not an integer")
            row.append(q.numerator)
        out.append(row)
    return out


def _dec_lattice(ws, name, raw, here, pending, fld):
    g = _int_rows(raw["gram"], "gram")
    if len(g) != raw["rank"]:
        raise ValidationError(f"{name}: rank {raw['rank']} disagrees with the gram matrix")
    return EvenLattice.from_gram(g, name)


def _dec_extended(ws, name, raw, here, pending, fld):
    h2 = ws.resolve(raw["h2Ref"], here, pending, fld)
    if not isinstance(h2, EvenLattice):
        raise ValidationError(f"{name}: h2Ref does not name a lattice")
    return ExtendedLattice(h2)


def _dec_element(ws, name, raw, here, pending, fld):
    return MukaiElement.of(Fraction(raw["r"]), [Fraction(x) for x in raw["c"]], Fraction(raw["s"]))


def _dec_period(ws, name, raw, here, pending, fld):
    re = [Fraction(x) for x in raw["re"]]
    im = [Fraction(x) for x in raw["im"]]
    if "latticeRef" in raw:
        lat = ws.resolve(raw["latticeRef"], here, pending, fld)
        h2 = lat.h2 if isinstance(lat, ExtendedLattice) else lat
        return HodgePeriod.of(h2, re, im)
    return HodgePeriod(tuple(re), tuple(im))


def _dec_isometry(ws, name, raw, here, pending, fld):
    rows = _int_rows(raw["matrix"], "isometry")
    lat = ws.resolve(raw["latticeRef"], here, pending, fld) if "latticeRef" in raw else None
    m = Mat.from_rows(QQ, rows)
    if lat is not None:
        if not is_isometry(lat, m):
            raise ValidationError(f"{name}: matrix does not preserve the pairing")
    return LatticeIsometry(lat, m)


def _dec_kernel(ws, name, raw, here, pending, fld):
    return Mat.from_rows(QQ, [[Fraction(x) for x in r] for r in raw["matrix"]])


_DECODERS = {
    "algebra": _dec_algebra, "module": _dec_module, "map": _dec_map, "complex": _dec_complex,
    "lattice": _dec_lattice, "extendedLattice": _dec_extended, "element": _dec_element,
    "period": _dec_period, "isometry": _dec_isometry, "kernel": _dec_kernel,
}


# encoders ----------------------------------------------------------------

def _enc_mat(fld: Field, m: Mat) -> list[list]:
    return [[fld.format(x) for x in row] for row in m.a.tolist()]


def _rat(x):
    q = Fraction(x)
    return str(q)


def _int(x) -> int:
    return int(Fraction(x))


def encode_entry(e: Entry) -> dict:
    """Re-encode a loaded object; references are written as they were read."""
    o, raw, fld = e.obj, e.raw, e.field
    if e.kind == "algebra":
        return {"kind": "algebra", "dim": o.dim, "labels": list(o.labels),
                "structure": [[[fld.format(x) for x in cjk] for cjk in ci] for ci in o.structure()],
                "unit": [fld.format(x) for x in o.unit.a[:, 0]]}
    if e.kind == "module":
        return {"kind": "module", "algebraRef": raw["algebraRef"], "dim": o.dim,
                "action": [_enc_mat(fld, a) for a in o.action]}
    if e.kind == "map":
        out = {"kind": "map", "sourceRef": raw["sourceRef"], "targetRef": raw["targetRef"]}
        if isinstance(o, ChainMap):
            degrees = sorted(int(k) for k in raw["components"])
            out["components"] = {str(i): _enc_mat(fld, o.at(i)) for i in degrees}
        else:
            out["matrix"] = _enc_mat(fld, o.matrix)
        return out
    if e.kind == "complex":
        return {"kind": "complex", "algebraRef": raw["algebraRef"],
                "entries": {str(i): r for i, r in sorted(((int(k), v) for k, v in raw["entries"].items()))},
                "differentials": {str(i): _enc_mat(fld, o.d(i))
                                  for i in sorted(int(k) for k in raw.get("differentials", {}))}}
    if e.kind == "lattice":
        return {"kind": "lattice", "rank": o.rank, "gram": o.gram_rows()}
    if e.kind == "extendedLattice":
        return {"kind": "extendedLattice", "h2Ref": raw["h2Ref"]}
    if e.kind == "element":
        return {"kind": "element", "r": _num_out(o.r), "c": [_num_out(x) for x in o.c], "s": _num_out(o.s)}
    if e.kind == "period":
        out = {"kind": "period"}
        if "latticeRef" in raw:
            out["latticeRef"] = raw["latticeRef"]
        out["re"] = [_rat(x) for x in o.re]
        out["im"] = [_rat(x) for x in o.im]
        return out
    if e.kind == "isometry":
        out = {"kind": "isometry"}
        if "latticeRef" in raw:
            out["latticeRef"] = raw["latticeRef"]
        out["matrix"] = [[_int(x) for x in row] for row in o.matrix.a.tolist()]
        return out
    if e.kind == "kernel":
        return {"kind": "kernel", "matrix": [[_rat(x) for x in row] for row in o.a.tolist()]}
    raise ValueError(f"cannot encode kind {e.kind!r}")


def _num_out(x):
    q = Fraction(x)
    return q.numerator if q.denominator == 1 else str(q)
