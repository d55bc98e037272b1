"""
Units: strict units, the strictly unital envelope A^su, unit homotopies
and unital functors.

Strict-unit equations in the right-operator convention:
    b2(x⊗i0) = x,  b2(i0⊗x) = (-1)^(|x|+1) x,  i0·b1 = 0,
    b_n vanishes on words containing i0 for n >= 3.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

from .ainfty import AInfCategory, AInfFunctor, UnitData
from .errors import NotACycleError, PreconditionError
from .exact_linalg import (GradedMap, Vector, add_scaled, cohomology, difference,
                           sign, solve_homotopy, solve_preimage)
from .quiver import STRICT_UNIT, Gen, QuiverMap
from .reports import CheckReport, CheckRun
from .tensor_coalgebra import MORPHISM, ComponentFamily, Word, word_of

logger = logging.getLogger(__name__)


def fresh_name(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def strict_unit_value(gens: Tuple[Gen, ...], su: frozenset, one: Any) -> Optional[Vector]:
    """
    Components forced by strict units on words containing one of them

    Returns None when no generator of the word is a strict unit.
    """
    if not any(g in su for g in gens):
        return None
    if len(gens) == 2:
        x, y = gens
        if y in su:
            return {x: one}
        return {y: one if (y.degree + 1) % 2 == 0 else -one}
    return {}


@dataclass
class Envelope:
    """A^su together with the strict embedding e: A -> A^su and the new units"""

    base: AInfCategory
    category: AInfCategory
    embedding: AInfFunctor
    units: Dict[str, Gen]

    def unit_vectors(self) -> Dict[str, Vector]:
        one = self.category.field.one
        return {x: {g: one} for x, g in self.units.items()}


def envelope_su(A: AInfCategory) -> Envelope:
    """Adjoin a strict unit of degree -1 at every object"""
    taken = set(A.quiver.by_name)
    units = {}
    for x in A.objects:
        name = fresh_name(f"1su[{x}]", taken)
        taken.add(name)
        units[x] = Gen(name, x, x, -1, STRICT_UNIT)
    quiver = A.quiver.with_gens(units.values())
    su = frozenset(units.values())
    one = A.field.one

    def rule(gens):
        value = strict_unit_value(gens, su, one)
        return A.b.component(gens) if value is None else value

    b = ComponentFamily(A.b.kind, 1, A.truncation, rule=rule)
    env = AInfCategory(quiver, b, A.field, f"{A.name}^su")

    def embed(gens):
        return {gens[0]: one} if len(gens) == 1 else {}

    e = AInfFunctor(A, env, {x: x for x in A.objects},
                    ComponentFamily(MORPHISM, 0, A.truncation, rule=embed), name="e")
    logger.info(f"built envelope {env.name} with {len(units)} strict units")
    return Envelope(A, env, e, units)


def _apply_with_unit(A: AInfCategory, before: Tuple[Gen, ...], unit: Vector,
                     after: Tuple[Gen, ...]) -> Vector:
    out: Vector = {}
    for u, c in unit.items():
        add_scaled(out, A.b.component(before + (u,) + after), c)
    return out


def right_unit_action(A: AInfCategory, units: Dict[str, Vector], x: Gen) -> Vector:
    """(1⊗i0)b2 on x"""
    return _apply_with_unit(A, (x,), units.get(x.target, {}), ())


def left_unit_action(A: AInfCategory, units: Dict[str, Vector], x: Gen) -> Vector:
    """(i0⊗1)b2 on x, including the Koszul sign of i0 passing x"""
    value = _apply_with_unit(A, (), units.get(x.source, {}), (x,))
    return {k: c * sign(x.degree) for k, c in value.items()}


def strict_unit_report(A: AInfCategory, units: Dict[str, Vector], name: Optional[str] = None) -> CheckReport:
    """All clauses of strict unitality on the truncation"""
    run = CheckRun(name or f"strict-units[{A.name}]", A.truncation, A.field)
    one = A.field.one
    for x in A.objects:
        i0 = units.get(x, {})
        value: Vector = {}
        for u, c in i0.items():
            add_scaled(value, A.b.component((u,)), c)
        if not run.record("unit-cycle", 1, (x, x), Word(x, ()), value):
            return run.report()
    for g in A.quiver.gens():
        if not run.record("right-strict", 2, (g.source, g.target, g.target), word_of(g),
                          difference(right_unit_action(A, units, g), {g: one})):
            return run.report()
        if not run.record("left-strict", 2, (g.source, g.source, g.target), word_of(g),
                          difference(left_unit_action(A, units, g), {g: -one})):
            return run.report()
    for n in range(3, A.truncation + 1):
        for w in A.quiver.words(n - 1):
            for p in range(n):
                obj = w.path[p]
                value = _apply_with_unit(A, w.gens[:p], units.get(obj, {}), w.gens[p:])
                if not run.record("higher-strict", n, w.path, w, value):
                    return run.report()
    return run.report()


def is_strictly_unital(A: AInfCategory, units: Dict[str, Vector]) -> bool:
    return strict_unit_report(A, units).passed


def unit_maps(A: AInfCategory, units: Dict[str, Vector], x: str, y: str) -> Tuple[GradedMap, GradedMap]:
    """Right and left unit actions on sA(x, y) as graded maps"""
    space = A.quiver.space(x, y)
    right = GradedMap(space, space, 0, {g: right_unit_action(A, units, g) for g in space})
    left = GradedMap(space, space, 0, {g: {k: -c for k, c in left_unit_action(A, units, g).items()}
                                        for g in space})
    return right, left


def check_unit_data(A: AInfCategory, data: UnitData, name: Optional[str] = None) -> CheckReport:
    """i0·b1 = 0 and both homotopy-to-identity equations"""
    run = CheckRun(name or f"unit-data[{A.name}]", A.truncation, A.field)
    for x in A.objects:
        value: Vector = {}
        for u, c in data.units.get(x, {}).items():
            add_scaled(value, A.b.component((u,)), c)
        if not run.record("unit-cycle", 1, (x, x), Word(x, ()), value):
            return run.report()
    for (x, y) in A.quiver.homs:
        right, left = unit_maps(A, data.units, x, y)
        b1 = A.b1(x, y)
        for label, action, h in (("right-unit", right, data.right), ("left-unit", left, data.left)):
            hmap = h.component(x, y)
            rhs = hmap.then(b1) + b1.then(hmap)
            lhs = action - GradedMap.identity(action.source, A.field)
            for g in action.source:
                if not run.record(label, 1, (x, y), word_of(g), difference(lhs.image(g), rhs.image(g))):
                    return run.report()
    return run.report()


def _require_cycles(A: AInfCategory, units: Dict[str, Vector]) -> None:
    for x in A.objects:
        value: Vector = {}
        for u, c in units.get(x, {}).items():
            add_scaled(value, A.b.component((u,)), c)
        if value:
            raise NotACycleError(f"not a cycle: unit candidate at {x} has nonzero b1")


def _solve_pair(A: AInfCategory, units: Dict[str, Vector], x: str, y: str):
    complex_ = A.hom_complex(x, y)
    right, left = unit_maps(A, units, x, y)
    ident = GradedMap.identity(complex_.space, A.field)
    h = solve_homotopy(complex_, complex_, right - ident)
    h_left = solve_homotopy(complex_, complex_, left - ident)
    return h, h_left


def solve_unit_homotopies(A: AInfCategory, units: Dict[str, Vector]) -> Optional[UnitData]:
    """
    Solve for right and left unit homotopies of candidate units

    Returns:
        UnitData, or None if some homotopy equation has no solution

    Raises:
        NotACycleError: a candidate has nonzero b1
    """
    _require_cycles(A, units)
    right, left = {}, {}
    for (x, y) in A.quiver.homs:
        h, h_left = _solve_pair(A, units, x, y)
        if h is None or h_left is None:
            logger.warning(f"unit candidates of {A.name} fail on ({x}, {y})")
            return None
        right[(x, y)] = h
        left[(x, y)] = h_left
    ident = {x: x for x in A.objects}
    return UnitData(dict(units), QuiverMap(A.quiver, A.quiver, ident, -1, right),
                    QuiverMap(A.quiver, A.quiver, ident, -1, left))


def unit_homotopy_reports(A: AInfCategory, units: Dict[str, Vector]) -> List[CheckReport]:
    """Solve the unit homotopies and check them; a failure names the hom (x, y)"""
    run = CheckRun(f"unit-homotopies[{A.name}]", A.truncation, A.field)
    try:
        data = solve_unit_homotopies(A, units)
    except NotACycleError as e:
        run.fail("unit-cycle", str(e))
        return [run.report()]
    if data is not None:
        return [run.report(), check_unit_data(A, data)]
    for (x, y) in A.quiver.homs:
        h, h_left = _solve_pair(A, units, x, y)
        if h is None:
            run.fail("right-unit-homotopy", "the right unit action is not homotopic to the identity", (x, y))
            break
        if h_left is None:
            run.fail("left-unit-homotopy", "the left unit action is not homotopic to the identity", (x, y))
            break
    return [run.report()]


def find_unit_candidates(A: AInfCategory) -> Dict[str, List[Vector]]:
    """Degree -1 cohomology representatives of sA(X,X), each alone and summed in pairs"""
    candidates = {}
    for x in A.objects:
        reps = cohomology(A.hom_complex(x, x)).representatives.get(-1, [])
        found = list(reps)
        for u, v in combinations(reps, 2):
            s = dict(u)
            add_scaled(s, v)
            found.append(s)
        candidates[x] = found
    return candidates


def search_units(A: AInfCategory) -> Optional[UnitData]:
    """Bounded unit search, object by object"""
    candidates = find_unit_candidates(A)
    chosen: Dict[str, Vector] = {}
    for x in A.objects:
        for cand in candidates[x]:
            # right equations on homs into x, left equations on homs out of x
            trial = dict(chosen)
            trial[x] = cand
            ok = True
            for (s, t) in A.quiver.homs:
                if t == x:
                    complex_ = A.hom_complex(s, t)
                    right, _ = unit_maps(A, trial, s, t)
                    if solve_homotopy(complex_, complex_, right - GradedMap.identity(complex_.space, A.field)) is None:
                        ok = False
                        break
                if s == x:
                    complex_ = A.hom_complex(s, t)
                    _, left = unit_maps(A, trial, s, t)
                    if solve_homotopy(complex_, complex_, left - GradedMap.identity(complex_.space, A.field)) is None:
                        ok = False
                        break
            if ok:
                chosen[x] = cand
                break
        else:
            logger.warning(f"no unit candidate found at object {x}")
            return None
    return solve_unit_homotopies(A, chosen)


def is_unital_functor(F: AInfFunctor, units_a: Dict[str, Vector],
                      units_b: Dict[str, Vector]) -> Tuple[bool, Dict[str, Vector]]:
    """
    Solve i0^A f1 - i0^B = v·b1 per object

    Returns:
        (True, v) when every equation is solvable, else (False, partial v)
    """
    witnesses: Dict[str, Vector] = {}
    for x in F.source.objects:
        fx = F.object_map[x]
        target: Vector = {}
        for u, c in units_a.get(x, {}).items():
            add_scaled(target, F.f.component((u,)), c)
        add_scaled(target, units_b.get(fx, {}), -1)
        v = solve_preimage(F.target.b1(fx, fx), target, F.target.field)
        if v is None:
            logger.warning(f"{F.name} does not preserve the unit class at {x}")
            return False, witnesses
        witnesses[x] = v
    return True, witnesses


def units_cohomologous(A: AInfCategory, units: Dict[str, Vector], other: Dict[str, Vector]) -> bool:
    """True iff the two unit choices differ by boundaries at every object"""
    for x in A.objects:
        diff = difference(units.get(x, {}), other.get(x, {}))
        if solve_preimage(A.b1(x, x), diff, A.field) is None:
            return False
    return True


def su_projection(A: AInfCategory, units: Dict[str, Vector],
                  envelope: Optional[Envelope] = None) -> Tuple[Envelope, AInfFunctor]:
    """
    Strict functor pi: A^su -> A sending the adjoined unit to i0

    Raises:
        PreconditionError: A is not strictly unital with these units
    """
    report = strict_unit_report(A, units)
    if not report.passed:
        raise PreconditionError(f"{A.name} is not strictly unital: {report.witness.equation}")
    env = envelope or envelope_su(A)
    su = {g: units[x] for x, g in env.units.items()}
    one = A.field.one

    def rule(gens):
        if len(gens) != 1:
            return {}
        g = gens[0]
        return su[g] if g in su else {g: one}

    pi = AInfFunctor(env.category, A, {x: x for x in A.objects},
                     ComponentFamily(MORPHISM, 0, A.truncation, rule=rule), name="pi")
    return env, pi
