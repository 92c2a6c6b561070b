"""JSON files for algebras, modules and catalogs; digests and boundary validation."""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .algebra import Algebra, AlgebraPresentation, Arrow, PresentationError, _paths_up_to, build_algebra
from .krull_schmidt import IndecomposableCatalog, representation_module
from .linalg import QQ, GF, FieldSpec, Matrix, scalar_str
from .modules import Module, ModuleError


class InputError(ValueError):
    """Malformed input file; ``pointer`` names the offending field."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def sha256(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def _load(src) -> dict:
    if isinstance(src, dict):
        return src
    path = Path(src)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object", str(path))
    return data


def _require(d: dict, key: str, typ, where: str):
    if key not in d:
        raise InputError("missing field", f"{where}.{key}" if where else key)
    val = d[key]
    if not isinstance(val, typ) or (typ is int and isinstance(val, bool)):
        name = typ.__name__ if isinstance(typ, type) else "/".join(t.__name__ for t in typ)
        raise InputError(f"expected {name}", f"{where}.{key}" if where else key)
    return val


def _rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InputError("expected a string rational such as \"-3/4\"", where)
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {x!r}", where) from None


# algebras ------------------------------------------------------------------------------

def parse_field(d: dict, where: str = "field") -> FieldSpec:
    if not isinstance(d, dict):
        raise InputError("expected an object", where)
    kind = _require(d, "kind", str, where)
    if kind == "rational":
        if set(d) - {"kind"}:
            raise InputError("rational field takes no other keys", where)
        return QQ
    if kind == "prime":
        p = _require(d, "p", int, where)
        try:
            return GF(p)
        except ValueError as exc:
            raise InputError(str(exc), f"{where}.p") from None
    raise InputError(f"unknown field kind {kind!r}", f"{where}.kind")


def presentation_from_json(data: dict) -> AlgebraPresentation:
    fld = parse_field(_require(data, "field", dict, ""))
    quiver = _require(data, "quiver", dict, "")
    verts = _require(quiver, "vertices", list, "quiver")
    for k, v in enumerate(verts):
        if not isinstance(v, str):
            raise InputError("vertex labels must be strings", f"quiver.vertices[{k}]")
    arrows = []
    for k, a in enumerate(_require(quiver, "arrows", list, "quiver")):
        where = f"quiver.arrows[{k}]"
        if not isinstance(a, dict):
            raise InputError("expected an object", where)
        arrows.append(Arrow(_require(a, "name", str, where), _require(a, "from", str, where), _require(a, "to", str, where)))
    names = {a.name for a in arrows}
    rels = []
    for k, rel in enumerate(_require(data, "relations", list, "")):
        if not isinstance(rel, list):
            raise InputError("a relation is a list of terms", f"relations[{k}]")
        terms = []
        for j, t in enumerate(rel):
            where = f"relations[{k}][{j}]"
            if not isinstance(t, dict):
                raise InputError("expected an object", where)
            coeff = _rational(t.get("coeff"), f"{where}.coeff")
            path = _require(t, "path", list, where)
            for i, n in enumerate(path):
                if n not in names:
                    raise InputError(f"unknown arrow name {n!r}", f"{where}.path[{i}]")
            terms.append((coeff, tuple(path)))
        rels.append(terms)
    nb = _require(data, "nilpotency_bound", int, "")
    pres = AlgebraPresentation(fld, list(verts), arrows, rels, nilpotency_bound=nb)
    return pres


def presentation_to_json(pres: AlgebraPresentation) -> dict:
    return {
        "field": pres.field.to_json(),
        "quiver": {
            "vertices": list(pres.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in pres.arrows],
        },
        "relations": [
            [{"coeff": scalar_str(pres.field.scalar(c)), "path": list(p)} for c, p in rel] for rel in pres.relations
        ],
        "nilpotency_bound": pres.nilpotency_bound,
    }


def algebra_digest(pres: AlgebraPresentation) -> str:
    return sha256(presentation_to_json(pres))


def parse_algebra(src, name: str = "") -> Algebra:
    """Read an algebra file and build the algebra; every presentation check runs here."""
    data = _load(src)
    pres = presentation_from_json(data)
    if not name and not isinstance(src, dict):
        name = Path(src).stem
    try:
        return build_algebra(pres, name=name or "A")
    except PresentationError as exc:
        raise InputError(str(exc), "relations") from None


# modules -------------------------------------------------------------------------------

def _check_relations(a: Algebra, mats: dict, dims: dict) -> None:
    pres = a.presentation
    fld = a.field
    vidx = {v: i for i, v in enumerate(pres.vertices)}

    def product(path):
        out = None
        for n in path:
            out = mats[n] if out is None else out @ mats[n]
        return out

    for k, rel in enumerate(pres.relations):
        s = pres.arrow(rel[0][1][0]).source
        t = pres.arrow(rel[0][1][-1]).target
        total = Matrix.zeros(fld, dims[vidx[s]], dims[vidx[t]])
        for c, path in rel:
            total = total + product(path).scale(fld.scalar(c))
        if not total.is_zero():
            terms = " + ".join(f"{scalar_str(fld.scalar(c))}*{'.'.join(p)}" for c, p in rel)
            raise InputError(f"relation {terms} does not vanish", f"relations[{k}]")
    for src, path in _paths_up_to(pres, pres.nilpotency_bound):
        if len(path) == pres.nilpotency_bound and not product(path).is_zero():
            raise InputError(
                f"path {'.'.join(path)} of length {pres.nilpotency_bound} acts nonzero", "arrows"
            )


def module_from_json(data: dict, a: Algebra, name: str = "") -> Module:
    pres = a.presentation
    if pres is None:
        raise InputError("module files need an algebra given by a quiver presentation")
    digest = _require(data, "algebra_digest", str, "")
    if digest != algebra_digest(pres):
        raise InputError("digest does not match the algebra", "algebra_digest")
    spaces = _require(data, "spaces", dict, "")
    if set(spaces) != set(pres.vertices):
        raise InputError(f"expected exactly the vertices {sorted(pres.vertices)}", "spaces")
    dims = []
    for v in pres.vertices:
        d = _require(spaces, v, int, "spaces")
        if d < 0:
            raise InputError("negative dimension", f"spaces.{v}")
        dims.append(d)
    arrows = _require(data, "arrows", dict, "")
    known = {x.name for x in pres.arrows}
    for n in arrows:
        if n not in known:
            raise InputError(f"unknown arrow name {n!r}", f"arrows.{n}")
    vidx = {v: i for i, v in enumerate(pres.vertices)}
    fld = a.field
    mats = {}
    for arr in pres.arrows:
        r, c = dims[vidx[arr.source]], dims[vidx[arr.target]]
        where = f"arrows.{arr.name}"
        raw = arrows.get(arr.name)
        if raw is None:
            if r and c:
                raise InputError("missing matrix", where)
            raw = [[] for _ in range(r)]
        if not isinstance(raw, list) or len(raw) != r:
            raise InputError(f"expected {r} rows (dimension at {arr.source})", where)
        rows = []
        for i, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != c:
                raise InputError(f"expected {c} entries (dimension at {arr.target})", f"{where}[{i}]")
            try:
                rows.append([fld.scalar(_rational(x, f"{where}[{i}][{j}]")) for j, x in enumerate(row)])
            except ZeroDivisionError as exc:
                raise InputError(str(exc), f"{where}[{i}]") from None
        mats[arr.name] = Matrix.from_rows(fld, rows, cols=c)
    _check_relations(a, mats, dims)
    m = representation_module(a, dims, mats)
    try:
        m.check()
    except ModuleError as exc:
        raise InputError(f"non-intertwining action: {exc}", "arrows") from None
    return m.with_name(name) if name else m


def parse_module(src, a: Algebra, name: str = "") -> Module:
    data = _load(src)
    if not name and not isinstance(src, dict):
        name = Path(src).stem
    return module_from_json(data, a, name)


def module_to_json(m: Module) -> dict:
    """Representation of ``m`` in its vertex-adapted basis."""
    a = m.algebra
    pres = a.presentation
    if pres is None:
        raise ValueError("module export needs a quiver presentation")
    _, _, offsets, acts = m._adapted
    dv = m.dimension_vector()
    vidx = {v: i for i, v in enumerate(pres.vertices)}
    index = {p: k for k, p in enumerate(a.basis_paths)}
    arrows = {}
    for arr in pres.arrows:
        s, t = vidx[arr.source], vidx[arr.target]
        k = index.get((arr.source, (arr.name,)))
        block = []
        for r in range(dv[s]):
            if k is None:
                block.append(["0"] * dv[t])
                continue
            row = acts[k].row(offsets[s] + r).entries()
            block.append([scalar_str(row[offsets[t] + c]) for c in range(dv[t])])
        arrows[arr.name] = block
    return {
        "algebra_digest": algebra_digest(pres),
        "spaces": {v: dv[i] for i, v in enumerate(pres.vertices)},
        "arrows": arrows,
    }


# catalogs ------------------------------------------------------------------------------

def catalog_to_json(cat: IndecomposableCatalog) -> dict:
    return {
        "algebra_digest": algebra_digest(cat.algebra.presentation),
        "complete": cat.complete,
        "method": cat.method,
        "modules": [{"name": c.name, "module": module_to_json(c)} for c in cat.modules],
    }


def catalog_from_json(data: dict, a: Algebra) -> IndecomposableCatalog:
    if _require(data, "algebra_digest", str, "") != algebra_digest(a.presentation):
        raise InputError("digest does not match the algebra", "algebra_digest")
    mods = []
    for k, entry in enumerate(_require(data, "modules", list, "")):
        where = f"modules[{k}]"
        if not isinstance(entry, dict):
            raise InputError("expected an object", where)
        nm = entry.get("name") or f"C{k}"
        try:
            mods.append(module_from_json(_require(entry, "module", dict, where), a, nm))
        except InputError as exc:
            raise InputError(str(exc), where) from None
    return IndecomposableCatalog(
        a, mods, bool(data.get("complete", False)), str(data.get("method", "file")), 0
    )


def parse_catalog(src, a: Algebra) -> IndecomposableCatalog:
    return catalog_from_json(_load(src), a)


def setup_digest(cat: IndecomposableCatalog) -> str:
    """Hash of the algebra and the exported catalog modules (in order)."""
    return sha256({
        "algebra": algebra_digest(cat.algebra.presentation),
        "modules": [module_to_json(c) for c in cat.modules],
    })
