"""
Homotopy unital structures C+ = C ⊕ kC ⊕ skC

sC+ adds, at every object X, a strict unit 1su[X] of degree -1 and a
generator j[X] of degree -2 with j·b+1 = 1su - i0.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .ainfty import (AInfCategory, AInfFunctor, check_ainfty, check_functor, compose_functors,
                     functor_residual, functors_equal)
from .errors import NotACycleError, PreconditionError
from .exact_linalg import (ConeProblem, Complex, GradedMap, GradedSpace, Vector, add_scaled,
                           add_term, difference, solve_cone)
from .quiver import HOMOTOPY, PLAIN, STRICT_UNIT, Gen
from .reports import CheckReport, CheckRun
from .tensor_coalgebra import (CODERIVATION, MORPHISM, ComponentFamily, Word, coderivation_image,
                               word_of)
from .unitality import fresh_name, strict_unit_report, strict_unit_value

logger = logging.getLogger(__name__)


def _is_base(vec: Vector) -> bool:
    return all(g.kind == PLAIN for g in vec)


def _outside_base(vec: Vector) -> Vector:
    return {g: c for g, c in vec.items() if g.kind != PLAIN}


def _j_count(w: Word) -> int:
    return sum(1 for g in w.gens if g.kind == HOMOTOPY)


def _has_su(w: Word) -> bool:
    return any(g.kind == STRICT_UNIT for g in w.gens)


@dataclass
class HomotopyUnitalStructure:
    """C together with the A-infinity structure b+ on C+ and the strict embedding C -> C+"""

    base: AInfCategory
    plus: AInfCategory
    su: Dict[str, Gen]
    j: Dict[str, Gen]
    embedding: AInfFunctor

    def su_vectors(self) -> Dict[str, Vector]:
        one = self.plus.field.one
        return {x: {g: one} for x, g in self.su.items()}

    def units(self) -> Dict[str, Vector]:
        """i0 = 1su - j·b+1 at every object"""
        one = self.plus.field.one
        units = {}
        for x in self.base.objects:
            value = {self.su[x]: one}
            add_scaled(value, self.plus.b.component((self.j[x],)), -1)
            units[x] = value
        return units

    def j_words(self, n: int) -> List[Word]:
        """Words of length n over sC and the j generators"""
        return [w for w in self.plus.quiver.words(n) if not _has_su(w)]


def plus_generators(C: AInfCategory) -> Tuple[Dict[str, Gen], Dict[str, Gen]]:
    taken = set(C.quiver.by_name)
    su, j = {}, {}
    for x in C.objects:
        name = fresh_name(f"1su[{x}]", taken)
        taken.add(name)
        su[x] = Gen(name, x, x, -1, STRICT_UNIT)
        name = fresh_name(f"j[{x}]", taken)
        taken.add(name)
        j[x] = Gen(name, x, x, -2, HOMOTOPY)
    return su, j


def _plus_category(C: AInfCategory, units: Dict[str, Vector], su: Dict[str, Gen], j: Dict[str, Gen],
                   higher_j: Optional[Vector], name: str) -> AInfCategory:
    """
    b+ by rule: strict on 1su-words, b^C on TsC, j·b+1 = 1su - i0.

    higher_j is returned on the remaining j-words of length >= 2; None
    defers them to the tables.
    """
    one = C.field.one
    su_set = frozenset(su.values())
    b1j = {}
    for x in C.objects:
        value = {su[x]: one}
        add_scaled(value, units.get(x, {}), -1)
        b1j[j[x]] = value

    def rule(gens):
        value = strict_unit_value(gens, su_set, one)
        if value is not None:
            return value
        if all(g.kind == PLAIN for g in gens):
            return C.b.component(gens)
        if len(gens) == 1:
            return b1j[gens[0]]
        return None if higher_j is None else dict(higher_j)

    quiver = C.quiver.with_gens([g for x in C.objects for g in (su[x], j[x])])
    return AInfCategory(quiver, ComponentFamily(CODERIVATION, 1, C.truncation, rule=rule), C.field, name)


def _embedding(C: AInfCategory, plus: AInfCategory) -> AInfFunctor:
    one = C.field.one

    def rule(gens):
        return {gens[0]: one} if len(gens) == 1 else {}

    return AInfFunctor(C, plus, {x: x for x in C.objects}, ComponentFamily(MORPHISM, 0, C.truncation, rule=rule),
                       name=f"iota[{C.name}]")


def canonical_hu(D: AInfCategory, units: Dict[str, Vector]) -> HomotopyUnitalStructure:
    """
    Canonical structure of a strictly unital category: j·b+1 = 1su - i0
    and b+n vanishes for n > 1 on every j-word

    Raises:
        PreconditionError: D is not strictly unital with these units
    """
    report = strict_unit_report(D, units)
    if not report.passed:
        raise PreconditionError(f"{D.name} is not strictly unital: {report.witness.equation}")
    su, j = plus_generators(D)
    plus = _plus_category(D, units, su, j, {}, f"{D.name}+")
    logger.info(f"canonical homotopy unital structure on {D.name}")
    return HomotopyUnitalStructure(D, plus, su, j, _embedding(D, plus))


def fukaya_report(H: HomotopyUnitalStructure) -> List[CheckReport]:
    """b+ squares to zero and the four defining conditions of a homotopy unital structure"""
    C, plus = H.base, H.plus
    run = CheckRun(f"fukaya[{C.name}]", C.truncation, C.field)
    for x, value in H.units().items():
        if not run.record("unit-in-base", 1, (x, x), Word(x, ()), _outside_base(value)):
            break
    strict = strict_unit_report(plus, H.su_vectors(), name=f"fukaya-strict-units[{C.name}]")
    embedding = check_functor(H.embedding, name=f"fukaya-embedding[{C.name}]")
    if run.witness is None:
        for n in range(2, C.truncation + 1):
            for w in H.j_words(n):
                if not run.record("values-in-base", n, w.path, w, _outside_base(plus.b.component(w.gens))):
                    break
            if run.witness is not None:
                break
    return [check_ainfty(plus, name=f"ainfty[{plus.name}]"), run.report(), strict, embedding]


def verify_iota_equivalence(H: HomotopyUnitalStructure) -> CheckReport:
    """
    pi1 (identity on sC, 1su -> i0, j -> 0) is a chain map inverse to the
    inclusion, with id - pi1·iota1 = h·b+1 + b+1·h for h: 1su -> j
    """
    C, plus = H.base, H.plus
    run = CheckRun(f"iota-equivalence[{C.name}]", C.truncation, C.field)
    one = C.field.one
    units = H.units()
    su_of = {g: x for x, g in H.su.items()}

    def pi1(vec: Vector) -> Vector:
        out: Vector = {}
        for g, c in vec.items():
            if g.kind == PLAIN:
                add_term(out, g, c)
            elif g.kind == STRICT_UNIT:
                add_scaled(out, units[su_of[g]], c)
        return out

    def h(vec: Vector) -> Vector:
        out: Vector = {}
        for g, c in vec.items():
            if g.kind == STRICT_UNIT:
                add_term(out, H.j[su_of[g]], c)
        return out

    def b1(vec: Vector) -> Vector:
        out: Vector = {}
        for g, c in vec.items():
            add_scaled(out, plus.b.component((g,)), c)
        return out

    for g in plus.quiver.gens():
        path = (g.source, g.target)
        if g.kind == PLAIN and not run.record("section", 1, path, word_of(g), difference(pi1({g: one}), {g: one})):
            break
        chain = difference(pi1(b1({g: one})), b1(pi1({g: one})))
        if not run.record("pi-chain-map", 1, path, word_of(g), chain):
            break
        lhs = difference({g: one}, pi1({g: one}))
        rhs = b1(h({g: one}))
        add_scaled(rhs, h(b1({g: one})))
        if not run.record("homotopy", 1, path, word_of(g), difference(lhs, rhs)):
            break
    return run.report()


def jj_membership_residual(H: HomotopyUnitalStructure, x: str) -> Tuple[Vector, Vector]:
    """
    (j⊗j)(1⊗b-1 + b-1⊗1)b+2 at X, and its part outside sC

    b-1 = b+1 - b'1 is nonzero only on j, where it is 1su - i0.
    """
    plus = H.plus
    j_map = {g: plus.b.component((g,)) for g in H.j.values()}

    def minus(gens):
        return j_map.get(gens[0], {}) if len(gens) == 1 else {}

    b_minus = ComponentFamily(CODERIVATION, 1, 1, rule=minus)
    jx = H.j[x]
    value: Vector = {}
    for v, c in coderivation_image(b_minus, Word(x, (jx, jx))).items():
        add_scaled(value, plus.b.component(v.gens), c)
    return value, _outside_base(value)


def homotopy_unital_from_unital(C: AInfCategory, units: Dict[str, Vector],
                                model) -> Tuple[HomotopyUnitalStructure, AInfFunctor]:
    """
    Build b+ on C+ together with phi+: C+ -> D+ from a DG model (D, phi, v)

    Components on TsC and on 1su-words are fixed; those on words with k
    generators j are solved arity by arity, increasing k, as boundaries
    in the cone of post-composition with phi1.

    Raises:
        NotACycleError: the data fed into a step is inconsistent
        UnsolvableError: phi1 is not a quasi-isomorphism
    """
    D = model.category
    phi = model.functor
    N = C.truncation
    one = C.field.one
    D_plus = canonical_hu(D, model.units)
    su, j = plus_generators(C)
    plus = _plus_category(C, units, su, j, None, f"{C.name}+")

    # Theorem orientation: i0^D - i0^C phi1 = v b1
    v_theorem = {x: {g: -c for g, c in vec.items()} for x, vec in model.v.items()}

    def phi_rule(gens):
        if any(g.kind == STRICT_UNIT for g in gens):
            return {D_plus.su[gens[0].source]: one} if len(gens) == 1 else {}
        if all(g.kind == PLAIN for g in gens):
            return phi.f.component(gens)
        if len(gens) == 1:
            value = {D_plus.j[gens[0].source]: one}
            add_scaled(value, v_theorem.get(gens[0].source, {}))
            return value
        return None

    phi_f = ComponentFamily(MORPHISM, 0, N, rule=phi_rule)
    phi_plus = AInfFunctor(plus, D_plus.plus, {x: x for x in C.objects}, phi_f, name="phi+")

    def b_prime(gens):
        return C.b.component(gens) if gens[0].kind == PLAIN else {}

    b1_prime = ComponentFamily(CODERIVATION, 1, 1, rule=b_prime)
    H = HomotopyUnitalStructure(C, plus, su, j, _embedding(C, plus))

    for n in range(2, N + 1):
        words = H.j_words(n)
        for k in range(1, n + 1):
            layer = [w for w in words if _j_count(w) == k]
            if not layer:
                continue
            lam = {w: plus.residual(w) for w in layer}
            nu = {w: functor_residual(phi_plus, w) for w in layer}
            groups: Dict[Tuple[str, str], List[Word]] = {}
            for w in layer:
                groups.setdefault((w.start, w.end), []).append(w)
            for (x, y), group in groups.items():
                for w in group:
                    if not _is_base(lam[w]) or not _is_base(nu[w]):
                        raise NotACycleError(f"cycle check failed: arity {n} data on {w!r} leaves the base")
                space = GradedSpace(tuple(group), tuple(w.degree for w in group))
                d_n = {w: {v: c for v, c in coderivation_image(b1_prime, w).items()} for w in group}
                S, T = C.hom_complex(x, y), D.hom_complex(x, y)
                problem = ConeProblem(
                    domain=Complex(space, GradedMap(space, space, 1, d_n), C.field),
                    source=S,
                    target=T,
                    u=phi.f1(x, y),
                    lam=GradedMap(space, S.space, 2, {w: lam[w] for w in group}),
                    nu=GradedMap(space, T.space, 1, {w: nu[w] for w in group}),
                    x_degree=1,
                )
                xs, ys = solve_cone(problem)
                for w in group:
                    plus.b.set(w.gens, xs.image(w))
                    phi_f.set(w.gens, {g: -c for g, c in ys.image(w).items()})
            logger.info(f"{plus.name}: arity {n} solved on words with {k} j-generators ({len(layer)} words)")
    return H, phi_plus


def phi_plus_report(H: HomotopyUnitalStructure, phi_plus: AInfFunctor, model) -> CheckReport:
    """
    The four conditions on phi+: first component, strict unitality,
    restriction to C, and values in sD on j-words of arity > 1
    """
    C = H.base
    D_plus_quiver = phi_plus.target.quiver
    one = C.field.one
    run = CheckRun(f"phi-plus[{C.name}]", C.truncation, C.field)
    d_su = {g.source: g for g in D_plus_quiver.gens() if g.kind == STRICT_UNIT}
    d_j = {g.source: g for g in D_plus_quiver.gens() if g.kind == HOMOTOPY}
    for x in C.objects:
        expected = {d_j[x]: one}
        add_scaled(expected, model.v.get(x, {}), -1)
        if not run.record("first-component", 1, (x, x), word_of(H.j[x]),
                          difference(phi_plus.f.component((H.j[x],)), expected)):
            return run.report()
        if not run.record("strictly-unital", 1, (x, x), word_of(H.su[x]),
                          difference(phi_plus.f.component((H.su[x],)), {d_su[x]: one})):
            return run.report()
    for n in range(2, C.truncation + 1):
        for w in H.plus.quiver.words(n):
            value = phi_plus.f.component(w.gens)
            if _has_su(w):
                if not run.record("strictly-unital", n, w.path, w, value):
                    return run.report()
            elif _j_count(w) == 0:
                if not run.record("restricts", n, w.path, w, difference(value, model.functor.f.component(w.gens))):
                    return run.report()
            elif not run.record("values-in-base", n, w.path, w, _outside_base(value)):
                return run.report()
    return run.report()


def theorem_reports(H: HomotopyUnitalStructure, phi_plus: AInfFunctor, model) -> List[CheckReport]:
    """Everything the construction promises, re-checked independently"""
    D_plus = phi_plus.target
    iota_d = _embedding(model.category, D_plus)
    reports = fukaya_report(H)
    reports.append(check_functor(phi_plus, name=f"functor[{phi_plus.name}]"))
    reports.append(phi_plus_report(H, phi_plus, model))
    reports.append(functors_equal(compose_functors(H.embedding, phi_plus),
                                  compose_functors(model.functor, iota_d), name="iota-phi-commute"))
    reports.append(verify_iota_equivalence(H))
    return reports
