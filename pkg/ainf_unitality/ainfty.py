"""
A-infinity categories and functors with truncated arity

Axiom checkers, composition, DG import, and transport of structure
along an invertible family (used to build unital but not strictly
unital fixtures).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import InputError, NotDGError, PreconditionError
from .exact_linalg import (Complex, Field, GradedMap, GradedSpace, Vector, add_scaled,
                           add_term, difference, sign)
from .quiver import Gen, GradedQuiver, QuiverMap
from .reports import CheckReport, CheckRun
from .tensor_coalgebra import (CODERIVATION, MORPHISM, ComponentFamily, Word,
                               coderivation_image, morphism_image)

logger = logging.getLogger(__name__)


@dataclass
class AInfCategory:
    """Graded quiver in the sA convention with components b_1..b_N"""

    quiver: GradedQuiver
    b: ComponentFamily
    field: Field
    name: str = "A"

    def __post_init__(self):
        if self.b.kind != CODERIVATION:
            raise InputError("category components must be coderivation components")

    @property
    def truncation(self) -> int:
        return self.b.truncation

    @property
    def objects(self) -> Tuple[str, ...]:
        return self.quiver.objects

    def apply_b(self, word: Word) -> Vector:
        """Full differential b on a word of TsA"""
        return coderivation_image(self.b, word)

    def residual(self, word: Word) -> Vector:
        """pr_1 of b·b on a word: zero for every word iff the A-infinity equations hold"""
        out: Vector = {}
        for v, c in self.apply_b(word).items():
            add_scaled(out, self.b.component(v.gens), c)
        return out

    def b1(self, x: str, y: str) -> GradedMap:
        space = self.quiver.space(x, y)
        return GradedMap(space, space, 1, {g: self.b.component((g,)) for g in space})

    def hom_complex(self, x: str, y: str) -> Complex:
        return Complex(self.quiver.space(x, y), self.b1(x, y), self.field)

    def with_truncation(self, n: int) -> "AInfCategory":
        b = ComponentFamily(CODERIVATION, 1, n, self.b.tables, self.b.rule)
        return AInfCategory(self.quiver, b, self.field, self.name)


@dataclass
class AInfFunctor:
    """Object map plus morphism components f_1..f_N"""

    source: AInfCategory
    target: AInfCategory
    object_map: Dict[str, str]
    f: ComponentFamily
    name: str = "f"

    def __post_init__(self):
        if self.f.kind != MORPHISM:
            raise InputError("functor components must be morphism components")
        for x in self.source.objects:
            if self.object_map.get(x) not in self.target.objects:
                raise InputError(f"object {x} has no image in {self.target.name}")

    @property
    def truncation(self) -> int:
        return self.f.truncation

    def image(self, word: Word) -> Vector:
        return morphism_image(self.f, word, self.object_map, self.source.field.one)

    def f1(self, x: str, y: str) -> GradedMap:
        source = self.source.quiver.space(x, y)
        target = self.target.quiver.space(self.object_map[x], self.object_map[y])
        return GradedMap(source, target, 0, {g: self.f.component((g,)) for g in source})

    def is_strict(self) -> bool:
        return all(not self.f.component(w.gens)
                   for n in range(2, self.truncation + 1) for w in self.source.quiver.words(n))


@dataclass
class UnitData:
    """
    Unit cycles with right and left unit homotopies

    right and left satisfy R - 1 = h·b1 + b1·h with R(x) = b2(x⊗i0) and
    L(x) = -(-1)^|x| b2(i0⊗x).
    """

    units: Dict[str, Vector]
    right: QuiverMap
    left: QuiverMap

    @classmethod
    def strict(cls, A: AInfCategory, units: Dict[str, Vector]) -> "UnitData":
        ident = {x: x for x in A.objects}
        return cls(units, QuiverMap(A.quiver, A.quiver, ident, -1), QuiverMap(A.quiver, A.quiver, ident, -1))


def check_ainfty(A: AInfCategory, name: Optional[str] = None) -> CheckReport:
    """A-infinity equations sum (1^p⊗b_k⊗1^q) b_{p+1+q} = 0 for m <= N"""
    run = CheckRun(name or f"ainfty[{A.name}]", A.truncation, A.field)
    for m in range(1, A.truncation + 1):
        for w in A.quiver.words(m):
            if not run.record("ainfty", m, w.path, w, A.residual(w)):
                return run.report()
    return run.report()


def functor_residual(F: AInfFunctor, word: Word) -> Vector:
    out: Vector = {}
    for v, c in F.image(word).items():
        add_scaled(out, F.target.b.component(v.gens), c)
    for v, c in F.source.apply_b(word).items():
        add_scaled(out, F.f.component(v.gens), -c)
    return out


def check_functor(F: AInfFunctor, name: Optional[str] = None) -> CheckReport:
    """Functor equations f·b = b·f projected to sB, for m <= N"""
    if F.truncation != F.source.truncation or F.truncation != F.target.truncation:
        raise InputError("functor and categories must share one truncation")
    run = CheckRun(name or f"functor[{F.name}]", F.truncation, F.source.field)
    for m in range(1, F.truncation + 1):
        for w in F.source.quiver.words(m):
            if not run.record("functor", m, w.path, w, functor_residual(F, w)):
                return run.report()
    return run.report()


def identity_functor(A: AInfCategory) -> AInfFunctor:
    one = A.field.one

    def rule(gens):
        return {gens[0]: one} if len(gens) == 1 else {}

    f = ComponentFamily(MORPHISM, 0, A.truncation, rule=rule)
    return AInfFunctor(A, A, {x: x for x in A.objects}, f, name=f"id[{A.name}]")


def compose_functors(F: AInfFunctor, G: AInfFunctor) -> AInfFunctor:
    """Composite "first F, then G": (FG)_m = sum_n F_{mn} G_n"""
    if F.target is not G.source and F.target.quiver != G.source.quiver:
        raise InputError("functors are not composable")
    if F.truncation != G.truncation:
        raise InputError("functors must share one truncation")
    h = ComponentFamily(MORPHISM, 0, F.truncation)
    for m in range(1, F.truncation + 1):
        for w in F.source.quiver.words(m):
            out: Vector = {}
            for v, c in F.image(w).items():
                if len(v):
                    add_scaled(out, G.f.component(v.gens), c)
            if out:
                h.set(w.gens, out)
    object_map = {x: G.object_map[F.object_map[x]] for x in F.source.objects}
    return AInfFunctor(F.source, G.target, object_map, h, name=f"{F.name}.{G.name}")


def functors_equal(F: AInfFunctor, G: AInfFunctor, name: str = "functor-equality") -> CheckReport:
    run = CheckRun(name, F.truncation, F.source.field)
    if F.object_map != G.object_map:
        run.fail("object-map", "object maps differ")
        return run.report()
    for m in range(1, F.truncation + 1):
        for w in F.source.quiver.words(m):
            if not run.record("equal", m, w.path, w, difference(F.f.component(w.gens), G.f.component(w.gens))):
                return run.report()
    return run.report()


@dataclass
class DGCategory:
    """
    DG category in unsuspended degrees

    composition[(a, b)] is the diagrammatic product ab (a: X->Y, b: Y->Z);
    the Leibniz rule reads d(ab) = (da)b + (-1)^|a| a(db).
    """

    field: Field
    objects: Tuple[str, ...]
    basis: Dict[Tuple[str, str], List[Tuple[str, int]]]
    differential: Dict[str, Vector] = field(default_factory=dict)
    composition: Dict[Tuple[str, str], Vector] = field(default_factory=dict)
    units: Dict[str, Vector] = field(default_factory=dict)


def _dg_tables(dg: DGCategory):
    info: Dict[str, Tuple[str, str, int]] = {}
    for (x, y), elems in dg.basis.items():
        if x not in dg.objects or y not in dg.objects:
            raise InputError(f"hom ({x}, {y}) refers to an unknown object")
        for name, deg in elems:
            if name in info:
                raise InputError(f"duplicate basis name {name}")
            info[name] = (x, y, deg)

    def check_vec(vec: Vector, x: str, y: str, deg: int, what: str) -> None:
        for n in vec:
            if n not in info:
                raise InputError(f"{what} refers to unknown basis element {n}")
            if info[n][:2] != (x, y) or info[n][2] != deg:
                raise InputError(f"{what} has a term {n} of the wrong hom or degree")

    for a, vec in dg.differential.items():
        if a not in info:
            raise InputError(f"differential of unknown element {a}")
        check_vec(vec, info[a][0], info[a][1], info[a][2] + 1, f"d({a})")
    for (a, b), vec in dg.composition.items():
        if a not in info or b not in info:
            raise InputError(f"composition of unknown elements {a}, {b}")
        if info[a][1] != info[b][0]:
            raise InputError(f"composition {a}·{b} is not composable")
        check_vec(vec, info[a][0], info[b][1], info[a][2] + info[b][2], f"{a}·{b}")
    for x, vec in dg.units.items():
        check_vec(vec, x, x, 0, f"unit of {x}")
    return info


def dg_import(dg: DGCategory, truncation: int = 2, name: str = "A") -> Tuple[AInfCategory, UnitData]:
    """
    Suspend a DG category into an A-infinity category with b_1 and b_2 only

    b1(sa) = s(da) and b2(sa⊗sb) = (-1)^(|b|(|a|+1)) s(ab).

    Raises:
        NotDGError: naming the first failed axiom (d^2, leibniz, associativity, units)
    """
    K = dg.field
    info = _dg_tables(dg)

    def d(vec: Vector) -> Vector:
        out: Vector = {}
        for n, c in vec.items():
            add_scaled(out, dg.differential.get(n, {}), c)
        return out

    def mul(u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for a, c in u.items():
            for b, c2 in v.items():
                add_scaled(out, dg.composition.get((a, b), {}), c * c2)
        return out

    names = list(info)
    for a in names:
        if d(d({a: K.one})):
            raise NotDGError("d^2", f"d(d({a})) != 0")
    for a in names:
        for b in names:
            if info[a][1] != info[b][0]:
                continue
            lhs = d(mul({a: K.one}, {b: K.one}))
            rhs = mul(d({a: K.one}), {b: K.one})
            add_scaled(rhs, mul({a: K.one}, d({b: K.one})), sign(info[a][2]))
            if difference(lhs, rhs):
                raise NotDGError("leibniz", f"d({a}·{b})")
    for a in names:
        for b in names:
            if info[a][1] != info[b][0]:
                continue
            for c in names:
                if info[b][1] != info[c][0]:
                    continue
                ab_c = mul(mul({a: K.one}, {b: K.one}), {c: K.one})
                a_bc = mul({a: K.one}, mul({b: K.one}, {c: K.one}))
                if difference(ab_c, a_bc):
                    raise NotDGError("associativity", f"({a}·{b})·{c} != {a}·({b}·{c})")
    for x in dg.objects:
        unit = dg.units.get(x)
        if unit is None:
            raise NotDGError("units", f"object {x} has no unit")
        if d(unit):
            raise NotDGError("units", f"unit of {x} is not closed")
        for a in names:
            if info[a][0] == x and difference(mul(unit, {a: K.one}), {a: K.one}):
                raise NotDGError("units", f"1_{x}·{a} != {a}")
            if info[a][1] == x and difference(mul({a: K.one}, unit), {a: K.one}):
                raise NotDGError("units", f"{a}·1_{x} != {a}")

    gens = {n: Gen(n, x, y, deg - 1) for n, (x, y, deg) in info.items()}
    homs: Dict[Tuple[str, str], List[Gen]] = {}
    for (x, y), elems in dg.basis.items():
        homs[(x, y)] = [gens[n] for n, _ in elems]
    quiver = GradedQuiver(tuple(dg.objects), {k: tuple(v) for k, v in homs.items() if v})

    b = ComponentFamily(CODERIVATION, 1, truncation)
    for n in names:
        image = {gens[m]: c for m, c in dg.differential.get(n, {}).items()}
        b.set((gens[n],), image)
    for (a, bb), vec in dg.composition.items():
        exponent = info[bb][2] * (info[a][2] + 1)
        b.set((gens[a], gens[bb]), {gens[m]: c * sign(exponent) for m, c in vec.items()})
    A = AInfCategory(quiver, b, K, name)
    units = {x: {gens[n]: c for n, c in vec.items()} for x, vec in dg.units.items()}
    logger.info(f"imported DG category {name}: {len(dg.objects)} objects, {len(names)} basis elements")
    return A, UnitData.strict(A, units)


def _inverse_f1(F: AInfFunctor) -> Dict[Tuple[str, str], GradedMap]:
    inverses = {}
    for (x, y) in F.source.quiver.homs:
        try:
            inverses[(x, y)] = F.f1(x, y).inverse(F.source.field)
        except PreconditionError:
            raise PreconditionError(f"first component is not invertible on ({x}, {y})")
    return inverses


def transport_structure(A: AInfCategory, g: ComponentFamily,
                        name: Optional[str] = None) -> Tuple[AInfCategory, AInfFunctor]:
    """
    Pull the structure of A back along an invertible family g

    Returns A' on the same quiver and the A-infinity functor g: A' -> A.
    b'_m = [sum g-expansion·b - lower (1⊗b'⊗1)·g terms] g_1^{-1}.
    """
    bp = ComponentFamily(CODERIVATION, 1, A.truncation)
    A_prime = AInfCategory(A.quiver, bp, A.field, name or f"{A.name}'")
    G = AInfFunctor(A_prime, A, {x: x for x in A.objects}, g, name="g")
    inverses = _inverse_f1(G)
    for m in range(1, A.truncation + 1):
        for w in A.quiver.words(m):
            value: Vector = {}
            for v, c in G.image(w).items():
                add_scaled(value, A.b.component(v.gens), c)
            # b'_m itself is not set yet, so only lower terms contribute
            for v, c in A_prime.apply_b(w).items():
                add_scaled(value, g.component(v.gens), -c)
            if value:
                bp.set(w.gens, inverses[(w.start, w.end)].apply(value))
        logger.info(f"transported arity {m} of {A.name}")
    return A_prime, G


def invert_functor(F: AInfFunctor, name: Optional[str] = None) -> AInfFunctor:
    """
    Inverse of a functor with invertible first component and bijective object map

    h_1 = f_1^{-1} and h_m(v) = -sum_{n<m} h_n(f_{mn}((f_1^{-1})^{⊗m} v)).
    """
    inverse_objects = {y: x for x, y in F.object_map.items()}
    if len(inverse_objects) != len(F.object_map) or set(inverse_objects) != set(F.target.objects):
        raise PreconditionError("object map is not bijective")
    inverses = _inverse_f1(F)
    one = F.source.field.one
    h = ComponentFamily(MORPHISM, 0, F.truncation)
    for (x, y), inv in inverses.items():
        for t in inv.source:
            h.set((t,), inv.image(t))
    for m in range(2, F.truncation + 1):
        for v in F.target.quiver.words(m):
            pulled: Dict[Tuple[Gen, ...], object] = {(): one}
            for t in v.gens:
                image = inverses[(inverse_objects[t.source], inverse_objects[t.target])].image(t)
                nxt: Dict[Tuple[Gen, ...], object] = {}
                for key, c in pulled.items():
                    for s, c2 in image.items():
                        add_term(nxt, key + (s,), c * c2)
                pulled = nxt
            value: Vector = {}
            for gens, c in pulled.items():
                for u, c2 in F.image(Word(inverse_objects[v.start], gens)).items():
                    if 0 < len(u) < m:
                        add_scaled(value, h.component(u.gens), -c * c2)
            if value:
                h.set(v.gens, value)
    return AInfFunctor(F.target, F.source, inverse_objects, h, name=name or f"{F.name}^-1")
