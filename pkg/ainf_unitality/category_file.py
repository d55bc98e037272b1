"""
JSON category files

A file holds one A-infinity category in the sA convention together with
optional units, functors, double coderivations and a DG model. Errors
carry JSON-pointer positions such as /operations/3/output/0.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .ainfty import AInfCategory, AInfFunctor, identity_functor
from .config import FILE_CONVENTION, FILE_FORMAT
from .constructions import DGModel
from .double_coderivation import DoubleCoderivation, double_pairs
from .errors import InputError, MissingBlockError, ParseError
from .exact_linalg import Field, Vector, add_term, parse_field
from .quiver import Gen, GradedQuiver
from .tensor_coalgebra import CODERIVATION, MORPHISM, ComponentFamily, Word

logger = logging.getLogger(__name__)


@dataclass
class CategoryFile:
    category: AInfCategory
    units: Optional[Dict[str, Vector]] = None
    functors: Dict[str, AInfFunctor] = field(default_factory=dict)
    double_coderivations: Dict[str, DoubleCoderivation] = field(default_factory=dict)
    dg_model: Optional[DGModel] = None

    @property
    def field(self) -> Field:
        return self.category.field

    @property
    def truncation(self) -> int:
        return self.category.truncation

    def require(self, block: str, command: str) -> Any:
        value = {
            "units": self.units,
            "functors": self.functors or None,
            "double_coderivations": self.double_coderivations or None,
            "dg_model": self.dg_model,
        }[block]
        if value is None:
            raise MissingBlockError(block, command)
        return value


def _expect(value: Any, kind, ptr: str, what: str):
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ParseError(f"{what} must be {getattr(kind, '__name__', kind)}", ptr or "/")
    return value


class _Parser:
    """Walks a parsed JSON document keeping the current pointer"""

    def __init__(self, truncation: Optional[int] = None):
        self.truncation = truncation

    def coefficient(self, field_: Field, value: Any, ptr: str) -> Any:
        if not isinstance(value, (int, str)) or isinstance(value, bool):
            raise ParseError(f"coefficient must be an integer or an 'a/b' string, got {value!r}", ptr)
        try:
            return field_(value)
        except InputError as e:
            raise ParseError(str(e), ptr)

    def vector(self, field_: Field, quiver: GradedQuiver, entries: Any, ptr: str,
               hom: Tuple[str, str], degree: int) -> Vector:
        out: Vector = {}
        for i, entry in enumerate(_expect(entries, list, ptr, "output")):
            p = f"{ptr}/{i}"
            if not isinstance(entry, list) or len(entry) != 2:
                raise ParseError("term must be a [name, coefficient] pair", p)
            g = self.gen(quiver, entry[0], f"{p}/0")
            if (g.source, g.target) != hom:
                raise ParseError(f"{g.name} is not in the hom {hom}", f"{p}/0")
            if g.degree != degree:
                raise ParseError(f"{g.name} has degree {g.degree}, expected {degree}", f"{p}/0")
            add_term(out, g, self.coefficient(field_, entry[1], f"{p}/1"))
        return out

    def gen(self, quiver: GradedQuiver, name: Any, ptr: str) -> Gen:
        if not isinstance(name, str) or name not in quiver.by_name:
            raise ParseError(f"unknown basis element {name!r}", ptr)
        return quiver.by_name[name]

    def word(self, quiver: GradedQuiver, names: Any, ptr: str, start: Optional[str] = None) -> Word:
        gens = tuple(self.gen(quiver, n, f"{ptr}/{i}") for i, n in enumerate(_expect(names, list, ptr, "input")))
        if start is None:
            if not gens:
                raise ParseError("empty input needs an object", ptr)
            start = gens[0].source
        try:
            return Word(start, gens)
        except InputError as e:
            raise ParseError(str(e), ptr)

    def operations(self, family: ComponentFamily, field_: Field, source: GradedQuiver, target: GradedQuiver,
                   object_map: Dict[str, str], entries: Any, ptr: str) -> None:
        for i, entry in enumerate(_expect(entries, list, ptr, "operations")):
            p = f"{ptr}/{i}"
            _expect(entry, dict, p, "operation")
            w = self.word(source, entry.get("input"), f"{p}/input")
            if "arity" in entry and entry["arity"] != len(w):
                raise ParseError(f"arity {entry['arity']} does not match {len(w)} inputs", f"{p}/arity")
            if not len(w):
                raise ParseError("operations need at least one input", f"{p}/input")
            if "path" in entry and list(entry["path"]) != list(w.path):
                raise ParseError(f"path {entry['path']} does not match the inputs {list(w.path)}", f"{p}/path")
            if len(w) > family.truncation:
                logger.warning(f"skipping arity {len(w)} entry at {p}: above truncation {family.truncation}")
                continue
            hom = (object_map[w.start], object_map[w.end])
            family.set(w.gens, self.vector(field_, target, entry.get("output", []), f"{p}/output",
                                           hom, w.degree + family.degree))

    def category(self, doc: Any, ptr: str, inherited: Optional[Field] = None,
                 name: str = "A") -> Tuple[AInfCategory, Optional[Dict[str, Vector]]]:
        _expect(doc, dict, ptr, "category document")
        if doc.get("format", FILE_FORMAT) != FILE_FORMAT:
            raise ParseError(f"unsupported format {doc.get('format')!r}", f"{ptr}/format")
        if doc.get("convention") != FILE_CONVENTION:
            raise ParseError(f"convention must be {FILE_CONVENTION!r}, got {doc.get('convention')!r}",
                             f"{ptr}/convention")
        if "field" in doc:
            try:
                field_ = parse_field(_expect(doc["field"], str, f"{ptr}/field", "field"))
            except ParseError:
                raise
            except InputError as e:
                raise ParseError(str(e), f"{ptr}/field")
            if inherited is not None and field_ != inherited:
                raise ParseError("nested category must use the same field", f"{ptr}/field")
        elif inherited is not None:
            field_ = inherited
        else:
            raise ParseError("missing field", f"{ptr}/field")
        if self.truncation is not None:
            truncation = self.truncation
        else:
            truncation = _expect(doc.get("truncation"), int, f"{ptr}/truncation", "truncation")
        if truncation < 1:
            raise ParseError("truncation must be at least 1", f"{ptr}/truncation")

        objects = _expect(doc.get("objects", []), list, f"{ptr}/objects", "objects")
        for i, x in enumerate(objects):
            _expect(x, str, f"{ptr}/objects/{i}", "object label")
        homs: Dict[Tuple[str, str], List[Gen]] = {}
        seen = set()
        for i, hom in enumerate(_expect(doc.get("homs", []), list, f"{ptr}/homs", "homs")):
            p = f"{ptr}/homs/{i}"
            _expect(hom, dict, p, "hom")
            x, y = hom.get("source"), hom.get("target")
            for key, obj in (("source", x), ("target", y)):
                if obj not in objects:
                    raise ParseError(f"unknown object {obj!r}", f"{p}/{key}")
            for k, entry in enumerate(_expect(hom.get("basis", []), list, f"{p}/basis", "basis")):
                q = f"{p}/basis/{k}"
                _expect(entry, dict, q, "basis element")
                gname = _expect(entry.get("name"), str, f"{q}/name", "name")
                if gname in seen:
                    raise ParseError(f"duplicate basis name {gname!r}", f"{q}/name")
                seen.add(gname)
                degree = _expect(entry.get("degree"), int, f"{q}/degree", "degree")
                homs.setdefault((x, y), []).append(Gen(gname, x, y, degree))
        try:
            quiver = GradedQuiver(tuple(objects), {k: tuple(v) for k, v in homs.items()})
        except InputError as e:
            raise ParseError(str(e), f"{ptr}/objects")

        b = ComponentFamily(CODERIVATION, 1, truncation)
        identity = {x: x for x in objects}
        self.operations(b, field_, quiver, quiver, identity, doc.get("operations", []), f"{ptr}/operations")
        A = AInfCategory(quiver, b, field_, name)

        units = None
        if "units" in doc:
            units = {}
            p = f"{ptr}/units"
            for x, entries in _expect(doc["units"], dict, p, "units").items():
                if x not in objects:
                    raise ParseError(f"unknown object {x!r}", f"{p}/{x}")
                units[x] = self.vector(field_, quiver, entries, f"{p}/{x}", (x, x), -1)
        return A, units

    def functor(self, doc: Any, ptr: str, source: AInfCategory, target: AInfCategory, name: str) -> AInfFunctor:
        _expect(doc, dict, ptr, "functor")
        object_map = _expect(doc.get("object_map", {x: x for x in source.objects}), dict,
                             f"{ptr}/object_map", "object_map")
        for x in source.objects:
            if object_map.get(x) not in target.objects:
                raise ParseError(f"object {x!r} has no image", f"{ptr}/object_map")
        f = ComponentFamily(MORPHISM, 0, source.truncation)
        self.operations(f, source.field, source.quiver, target.quiver, object_map,
                        doc.get("components", []), f"{ptr}/components")
        try:
            return AInfFunctor(source, target, dict(object_map), f, name=doc.get("name", name))
        except InputError as e:
            raise ParseError(str(e), ptr)

    def double(self, doc: Any, ptr: str, A: AInfCategory, index: int) -> DoubleCoderivation:
        _expect(doc, dict, ptr, "double coderivation")
        degree = _expect(doc.get("degree"), int, f"{ptr}/degree", "degree")
        ident = identity_functor(A)
        r = DoubleCoderivation(ident, ident, degree, name=doc.get("name", f"r{index}"))
        for i, entry in enumerate(_expect(doc.get("components", []), list, f"{ptr}/components", "components")):
            p = f"{ptr}/components/{i}"
            _expect(entry, dict, p, "component")
            obj = entry.get("object")
            left = entry.get("left", [])
            right = entry.get("right", [])
            if obj is not None and obj not in A.objects:
                raise ParseError(f"unknown object {obj!r}", f"{p}/object")
            if not left and not right and obj is None:
                raise ParseError("empty component needs an object", f"{p}/object")
            if left:
                u = self.word(A.quiver, left, f"{p}/left")
            else:
                start = obj if obj is not None else self.gen(A.quiver, right[0], f"{p}/right/0").source
                u = Word(start, ())
            if obj is not None and u.end != obj:
                raise ParseError(f"left word ends at {u.end}, not {obj}", f"{p}/object")
            w = self.word(A.quiver, right, f"{p}/right", start=u.end)
            if len(u) + len(w) > A.truncation:
                continue
            r.set(u, w, self.vector(A.field, A.quiver, entry.get("output", []), f"{p}/output",
                                    (u.start, w.end), u.degree + w.degree + degree))
        return r


def parse_category(text: str, truncation: Optional[int] = None) -> CategoryFile:
    """
    Parse a category file; truncation overrides the file's N

    Raises:
        ParseError: with the JSON pointer of the offending value
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}")
    parser = _Parser(truncation)
    A, units = parser.category(doc, "")
    result = CategoryFile(A, units)

    for i, block in enumerate(_expect(doc.get("functors", []), list, "/functors", "functors")):
        p = f"/functors/{i}"
        _expect(block, dict, p, "functor")
        target_doc = block.get("target", "self")
        if target_doc == "self":
            target = A
        else:
            target, _ = parser.category(target_doc, f"{p}/target", A.field, name="B")
        F = parser.functor(block, p, A, target, f"f{i}")
        if F.name in result.functors:
            raise ParseError(f"duplicate functor name {F.name!r}", f"{p}/name")
        result.functors[F.name] = F

    for i, block in enumerate(_expect(doc.get("double_coderivations", []), list,
                                      "/double_coderivations", "double_coderivations")):
        r = parser.double(block, f"/double_coderivations/{i}", A, i)
        result.double_coderivations[r.name] = r

    if "dg_model" in doc:
        p = "/dg_model"
        block = _expect(doc["dg_model"], dict, p, "dg_model")
        D, d_units = parser.category(block.get("category"), f"{p}/category", A.field, name="D")
        if d_units is None:
            raise ParseError("the model category needs units", f"{p}/category/units")
        F = parser.functor(block.get("functor", {}), f"{p}/functor", A, D, "phi")
        v = {}
        for x, entries in _expect(block.get("v", {}), dict, f"{p}/v", "v").items():
            if x not in A.objects:
                raise ParseError(f"unknown object {x!r}", f"{p}/v/{x}")
            v[x] = parser.vector(A.field, D.quiver, entries, f"{p}/v/{x}", (x, x), -2)
        result.dg_model = DGModel(D, d_units, F, v)
    logger.info(f"parsed category with {len(A.objects)} objects, {len(A.quiver.gens())} generators, "
                f"truncation {A.truncation}")
    return result


def _terms(vec: Vector, field_: Field) -> List[List[str]]:
    return [[g.name, field_.format(c)] for g, c in sorted(vec.items(), key=lambda gc: gc[0].name) if c]


def _operations(family: ComponentFamily, quiver: GradedQuiver, field_: Field) -> List[Dict[str, Any]]:
    out = []
    for n in range(1, family.truncation + 1):
        for w in quiver.words(n):
            value = family.component(w.gens)
            if value:
                out.append({"arity": n, "path": list(w.path), "input": w.names(),
                            "output": _terms(value, field_)})
    return out


def category_document(A: AInfCategory, units: Optional[Dict[str, Vector]] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "format": FILE_FORMAT,
        "convention": FILE_CONVENTION,
        "field": A.field.name,
        "truncation": A.truncation,
        "objects": list(A.objects),
        "homs": [{"source": x, "target": y,
                  "basis": [{"name": g.name, "degree": g.degree} for g in gens]}
                 for (x, y), gens in A.quiver.homs.items()],
        "operations": _operations(A.b, A.quiver, A.field),
    }
    if units is not None:
        doc["units"] = {x: _terms(units.get(x, {}), A.field) for x in A.objects}
    return doc


def functor_document(F: AInfFunctor, target: Any) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"name": F.name}
    if target is not None:
        doc["target"] = target
    doc["object_map"] = dict(F.object_map)
    doc["components"] = _operations(F.f, F.source.quiver, F.source.field)
    return doc


def emit_category(cf: CategoryFile) -> str:
    """Serialize; parse_category(emit_category(cf)) rebuilds an equal structure"""
    A = cf.category
    doc = category_document(A, cf.units)
    if cf.functors:
        doc["functors"] = [functor_document(F, "self" if F.target is A else category_document(F.target))
                           for F in cf.functors.values()]
    if cf.double_coderivations:
        blocks = []
        for r in cf.double_coderivations.values():
            comps = []
            for u, w in double_pairs(A.quiver, r.truncation):
                value = r.component(u, w)
                if value:
                    comps.append({"left": u.names(), "right": w.names(), "object": u.end,
                                  "output": _terms(value, A.field)})
            blocks.append({"name": r.name, "degree": r.degree, "components": comps})
        doc["double_coderivations"] = blocks
    if cf.dg_model is not None:
        M = cf.dg_model
        doc["dg_model"] = {
            "category": category_document(M.category, M.units),
            "functor": functor_document(M.functor, None),
            "v": {x: _terms(M.v.get(x, {}), A.field) for x in A.objects},
        }
    return json.dumps(doc, indent=2, ensure_ascii=False)
