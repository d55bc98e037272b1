"""
Passing between the three notions of unitality

    weak unit            -> unit elements with homotopies
    homotopy unital      -> unit elements with homotopies
    unital + DG model    -> double coderivation h with hB1 = ν -> weak unit
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from .ainfty import (AInfCategory, AInfFunctor, UnitData, check_functor, compose_functors,
                     functors_equal, identity_functor)
from .double_coderivation import (B1, DoubleCoderivation, check_double_coderivation, compare_double,
                                  double_pairs, nu_coderivation, post_compose, pre_compose,
                                  xi_coderivation)
from .errors import PreconditionError
from .exact_linalg import (Complex, ConeProblem, GradedMap, GradedSpace, Vector, add_scaled,
                           difference, is_quasi_iso, sign, solve_cone)
from .homotopy_unital import HomotopyUnitalStructure, fukaya_report
from .quiver import QuiverMap
from .reports import CheckReport, CheckRun
from .su_correspondence import PhiFamily, family_slice, family_to_functor, functor_to_family
from .tensor_coalgebra import Word, word_of
from .unitality import (Envelope, check_unit_data, envelope_su, left_unit_action,
                        right_unit_action, strict_unit_report)

logger = logging.getLogger(__name__)


@dataclass
class DGModel:
    """
    Strictly unital D with b_n = 0 for n >= 3, a functor f: C -> D that is
    the identity on objects with f1 a quasi-isomorphism, and v with
    i0^C f1 = i0^D + v·b1
    """

    category: AInfCategory
    units: Dict[str, Vector]
    functor: AInfFunctor
    v: Dict[str, Vector]


def validate_dg_model(model: DGModel, units: Dict[str, Vector]) -> List[CheckReport]:
    """All conditions on a DG model of a category with the given units"""
    D, f = model.category, model.functor
    C = f.source
    run = CheckRun(f"dg-model[{C.name}]", C.truncation, C.field)
    reports = [strict_unit_report(D, model.units, name=f"dg-model-strict-units[{D.name}]")]
    if tuple(D.objects) != tuple(C.objects) or any(f.object_map[x] != x for x in C.objects):
        run.fail("objects", "the model must have the same objects and an identity object map")
        return reports + [run.report()]
    if D.truncation != C.truncation or f.truncation != C.truncation:
        run.fail("truncation", "category, model and functor must share one truncation")
        return reports + [run.report()]
    for n in range(3, D.truncation + 1):
        for w in D.quiver.words(n):
            if not run.record("higher-vanish", n, w.path, w, D.b.component(w.gens)):
                return reports + [run.report()]
    for x in C.objects:
        for y in C.objects:
            if not is_quasi_iso(f.f1(x, y), C.hom_complex(x, y), D.hom_complex(x, y)):
                run.fail("quasi-iso", f"f1 is not a quasi-isomorphism on ({x}, {y})")
                return reports + [run.report()]
    for x in C.objects:
        lhs: Vector = {}
        for g, c in units.get(x, {}).items():
            add_scaled(lhs, f.f.component((g,)), c)
        add_scaled(lhs, model.units.get(x, {}), -1)
        for g, c in model.v.get(x, {}).items():
            add_scaled(lhs, D.b.component((g,)), -c)
        if not run.record("unit-witness", 1, (x, x), Word(x, ()), lhs):
            break
    reports.append(check_functor(f, name=f"dg-model-functor[{f.name}]"))
    reports.append(run.report())
    return reports


def require(reports: List[CheckReport], what: str) -> None:
    for report in reports:
        if not report.passed:
            detail = report.witness.equation if report.witness else ""
            raise PreconditionError(f"{what}: {report.name} fails ({detail})")


def weak_unit_reports(U: AInfFunctor, env: Envelope) -> List[CheckReport]:
    """U is an A-infinity functor and e·U = id"""
    A = env.base
    return [check_functor(U, name=f"functor[{U.name}]"),
            functors_equal(compose_functors(env.embedding, U), identity_functor(A), name="eU-identity")]


def _hom_map(A: AInfCategory, x: str, y: str, degree: int,
             fn: Callable[[Any], Vector]) -> GradedMap:
    space = A.quiver.space(x, y)
    return GradedMap(space, space, degree, {g: fn(g) for g in space})


def units_from_weak_unit(U: AInfFunctor, env: Envelope) -> Tuple[UnitData, List[CheckReport]]:
    """
    i0 = 1su·U1, right homotopy -(1⊗1su)U2 and left homotopy (-1)^|x|(1su⊗x)U2

    Returns the unit data together with the check of the two displayed
    homotopy identities and of the unit data itself.

    Raises:
        PreconditionError: U is not a functor or e·U is not the identity
    """
    require(weak_unit_reports(U, env), "not a weak unit")
    A = env.base
    units = {x: dict(U.f.component((g,))) for x, g in env.units.items()}
    right, left = {}, {}
    raw_right, raw_left = {}, {}
    for (x, y) in A.quiver.homs:
        su_x, su_y = env.units[x], env.units[y]
        raw_right[(x, y)] = _hom_map(A, x, y, -1, lambda g: U.f.component((g, su_y)))
        raw_left[(x, y)] = _hom_map(A, x, y, -1, lambda g: {k: -c * sign(g.degree)
                                                              for k, c in U.f.component((su_x, g)).items()})
        right[(x, y)] = -raw_right[(x, y)]
        left[(x, y)] = -raw_left[(x, y)]
    ident = {x: x for x in A.objects}
    data = UnitData(units, QuiverMap(A.quiver, A.quiver, ident, -1, right),
                    QuiverMap(A.quiver, A.quiver, ident, -1, left))

    # -b1 h + 1 = h b1 + (1⊗i0)b2  and  b1 h' - 1 = -h' b1 + (i0⊗1)b2
    run = CheckRun(f"weak-unit-displays[{A.name}]", A.truncation, A.field)
    for (x, y), h in raw_right.items():
        b1 = A.b1(x, y)
        hp = raw_left[(x, y)]
        for g in b1.source:
            lhs = {g: A.field.one}
            add_scaled(lhs, b1.then(h).image(g), -1)
            rhs = dict(h.then(b1).image(g))
            add_scaled(rhs, right_unit_action(A, units, g))
            if not run.record("right-display", 1, (x, y), word_of(g), difference(lhs, rhs)):
                break
            lhs = dict(b1.then(hp).image(g))
            add_scaled(lhs, {g: A.field.one}, -1)
            rhs = {k: -c for k, c in hp.then(b1).image(g).items()}
            add_scaled(rhs, left_unit_action(A, units, g))
            if not run.record("left-display", 1, (x, y), word_of(g), difference(lhs, rhs)):
                break
    return data, [run.report(), check_unit_data(A, data)]


def units_from_homotopy_unital(H: HomotopyUnitalStructure) -> Tuple[UnitData, List[CheckReport]]:
    """
    i0 = 1su - j·b+1 with right homotopy (1⊗j)b+2 and left homotopy -(j⊗1)b+2

    Raises:
        PreconditionError: H violates a defining condition
    """
    require(fukaya_report(H), "not a homotopy unital structure")
    C, plus = H.base, H.plus
    units = H.units()
    right, left = {}, {}
    for (x, y) in C.quiver.homs:
        jx, jy = H.j[x], H.j[y]
        right[(x, y)] = _hom_map(C, x, y, -1, lambda g: plus.b.component((g, jy)))
        left[(x, y)] = _hom_map(C, x, y, -1, lambda g: {k: -c for k, c in plus.b.component((jx, g)).items()})
    ident = {x: x for x in C.objects}
    data = UnitData(units, QuiverMap(C.quiver, C.quiver, ident, -1, right),
                    QuiverMap(C.quiver, C.quiver, ident, -1, left))

    # (1⊗i0)b2 = 1 + (1⊗j)b+2·b1 + b1·(1⊗j)b+2, (i0⊗1)b2 = -1 + (j⊗1)b+2·b1 + b1·(j⊗1)b+2
    run = CheckRun(f"homotopy-unital-displays[{C.name}]", C.truncation, C.field)
    for (x, y) in C.quiver.homs:
        b1 = C.b1(x, y)
        hr, hl = right[(x, y)], -left[(x, y)]
        for g in b1.source:
            rhs = {g: C.field.one}
            add_scaled(rhs, hr.then(b1).image(g))
            add_scaled(rhs, b1.then(hr).image(g))
            if not run.record("right-display", 1, (x, y), word_of(g),
                              difference(right_unit_action(C, units, g), rhs)):
                break
            rhs = {g: -C.field.one}
            add_scaled(rhs, hl.then(b1).image(g))
            add_scaled(rhs, b1.then(hl).image(g))
            if not run.record("left-display", 1, (x, y), word_of(g),
                              difference(left_unit_action(C, units, g), rhs)):
                break
    return data, [run.report(), check_unit_data(C, data)]


def double_reports(h: DoubleCoderivation) -> List[CheckReport]:
    """h is a double coderivation with hB1 = ν"""
    nu = nu_coderivation(h.source)
    nu.limit = h.truncation
    return [check_double_coderivation(h, name=f"double-coderivation[{h.name}]"),
            compare_double(B1(h), nu, f"{h.name}B1-nu")]


def h_from_weak_unit(U: AInfFunctor, env: Envelope) -> DoubleCoderivation:
    """
    The n = 1 slice of the family of U, a double (1,1)-coderivation of degree -1

    Raises:
        PreconditionError: U is not a weak unit
    """
    require(weak_unit_reports(U, env), "not a weak unit")
    h = family_slice(functor_to_family(U, env))
    h.name = "h"
    return h


def weak_unit_from_h(A: AInfCategory, h: DoubleCoderivation,
                     env: Optional[Envelope] = None) -> Tuple[AInfFunctor, Envelope]:
    """
    Weak unit from φ0 = id, φ1 = h and φ_n = (φ_{n-1}⊗1)h

    Raises:
        PreconditionError: h is not a double coderivation with hB1 = ν
    """
    require(double_reports(h), "h does not solve hB1 = nu")
    env = env or envelope_su(A)
    cache: Dict[Tuple[Word, ...], Vector] = {}
    ident = identity_functor(A)

    def phi(ws: Tuple[Word, ...]) -> Vector:
        if len(ws) == 1:
            return ident.image(ws[0])
        if ws not in cache:
            last = ws[-1]
            s = sign((len(ws) - 2) * last.degree)
            out: Vector = {}
            for v, c in phi(ws[:-1]).items():
                add_scaled(out, h.image(v, last), c * s)
            cache[ws] = out
        return cache[ws]

    maps = {n: phi for n in range(1, A.truncation + 1)}
    family = PhiFamily(A, A, ident, maps, A.truncation)
    U = family_to_functor(family, env)
    U.name = "U"
    logger.info(f"weak unit of {A.name} assembled to arity {A.truncation}")
    return U, env


def _combine(name: str, terms: List[Tuple[int, DoubleCoderivation]], like: DoubleCoderivation) -> DoubleCoderivation:
    def rule(u: Word, w: Word) -> Vector:
        out: Vector = {}
        for c, r in terms:
            add_scaled(out, r.component(u, w), c)
        return out

    return DoubleCoderivation(like.f, like.g, like.degree, rule=rule, name=name, limit=like.limit)


def solve_h(A: AInfCategory, units: Dict[str, Vector],
            model: DGModel) -> Tuple[DoubleCoderivation, DoubleCoderivation, List[CheckReport]]:
    """
    h over (id, id) of degree -1 and k over (f, f) of degree -2 with
    hB1 = ν and kB1 + ι - hf = 0, where ι = (f⊗f)ξ^D

    Seeds h(∅,∅) = i0^A and k(∅,∅) = v; the components of total length
    t are the boundary of (hB1 - ν, kB1 + ι - hf)_t in the cone of f1.

    Raises:
        PreconditionError: the model is invalid
        NotACycleError, UnsolvableError: propagated from the cone solver
    """
    require(validate_dg_model(model, units), "invalid DG model")
    D, f = model.category, model.functor
    limit = A.truncation - 1
    ident = identity_functor(A)
    nu = nu_coderivation(A)
    nu.limit = limit
    xi_d = xi_coderivation(D, model.units)
    iota = pre_compose(f, xi_d)
    iota.limit = limit
    h = DoubleCoderivation(ident, ident, -1, name="h", limit=limit)
    k = DoubleCoderivation(f, f, -2, name="k", limit=limit)
    for x in A.objects:
        h.set(Word(x, ()), Word(x, ()), units.get(x, {}))
        k.set(Word(x, ()), Word(x, ()), model.v.get(x, {}))

    seeds = CheckRun(f"solve-h-seeds[{A.name}]", limit, A.field)
    pre = [compare_double(B1(nu), None, "nuB1-zero"),
           compare_double(B1(iota), post_compose(nu, f), "iotaB1-nuf")]
    b1_only = A.with_truncation(1)

    for t in range(1, limit + 1):
        lam_r = _combine("lambda", [(1, B1(h)), (-1, nu)], nu)
        kappa_r = _combine("kappa", [(1, B1(k)), (1, iota), (-1, post_compose(h, f))], iota)
        pairs = [(u, w) for u, w in double_pairs(A.quiver, t) if len(u) + len(w) == t]
        lam = {p: lam_r.component(*p) for p in pairs}
        kappa = {p: kappa_r.component(*p) for p in pairs}
        groups: Dict[Tuple[str, str], List] = {}
        for p in pairs:
            groups.setdefault((p[0].start, p[1].end), []).append(p)
        for (x, y), group in groups.items():
            space = GradedSpace(tuple(group), tuple(u.degree + w.degree for u, w in group))
            d_n: Dict[Any, Vector] = {}
            for u, w in group:
                image: Vector = {}
                for v, c in b1_only.apply_b(u).items():
                    add_scaled(image, {(v, w): c * sign(w.degree)})
                for v, c in b1_only.apply_b(w).items():
                    add_scaled(image, {(u, v): c})
                d_n[(u, w)] = image
            S, T = A.hom_complex(x, y), D.hom_complex(f.object_map[x], f.object_map[y])
            problem = ConeProblem(
                domain=Complex(space, GradedMap(space, space, 1, d_n), A.field),
                source=S,
                target=T,
                u=f.f1(x, y),
                lam=GradedMap(space, S.space, 0, {p: lam[p] for p in group}),
                nu=GradedMap(space, T.space, -1, {p: kappa[p] for p in group}),
                x_degree=-1,
            )
            xs, ys = solve_cone(problem)
            for p in group:
                h.set(p[0], p[1], xs.image(p))
                k.set(p[0], p[1], {g: -c for g, c in ys.image(p).items()})
        logger.info(f"solve_h: total length {t} done ({len(pairs)} pairs)")

    for x in A.objects:
        value: Vector = {}
        for g, c in units.get(x, {}).items():
            add_scaled(value, f.f.component((g,)), c)
        add_scaled(value, model.units.get(x, {}), -1)
        for g, c in model.v.get(x, {}).items():
            add_scaled(value, D.b.component((g,)), -c)
        seeds.record("seed", 0, (x, x), Word(x, ()), value)
    k_equation = _combine("k-equation", [(1, B1(k)), (1, iota), (-1, post_compose(h, f))], iota)
    reports = pre + [seeds.report()] + double_reports(h) + [compare_double(k_equation, None, "kB1-iota-hf")]
    return h, k, reports


def weak_unit_from_unital(A: AInfCategory, units: Dict[str, Vector],
                          model: DGModel) -> Tuple[AInfFunctor, Envelope, List[CheckReport]]:
    """solve_h followed by weak_unit_from_h; returns U, the envelope and every check"""
    h, _, reports = solve_h(A, units, model)
    U, env = weak_unit_from_h(A, h)
    reports = reports + weak_unit_reports(U, env)
    extracted, extraction = units_from_weak_unit(U, env)
    run = CheckRun(f"units-preserved[{A.name}]", A.truncation, A.field)
    for x in A.objects:
        if not run.record("units-preserved", 1, (x, x), Word(x, ()),
                          difference(extracted.units.get(x, {}), units.get(x, {}))):
            break
    return U, env, reports + extraction + [run.report()]
