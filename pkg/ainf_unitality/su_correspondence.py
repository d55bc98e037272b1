"""
Functors out of the strictly unital envelope

ζ identifies (TsA)^{⊗n+1}[n] with the words of TsA^su containing exactly
n adjoined units, so an A-infinity functor U: A^su -> B is the same as a
family φ_n = ζ_n·U subject to comultiplication, differential and counit
compatibilities.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

from .ainfty import AInfCategory, AInfFunctor, check_functor, compose_functors
from .double_coderivation import (DoubleCoderivation, B1, check_double_coderivation, compare_double,
                                  nu_coderivation, nu_n, post_compose, word_tuples, xi_n)
from .errors import IncompatibleFamilyError
from .exact_linalg import Vector, add_scaled, add_term, difference, sign
from .reports import CheckReport, CheckRun
from .tensor_coalgebra import MORPHISM, ComponentFamily, Word, cut_comultiplication
from .unitality import Envelope

logger = logging.getLogger(__name__)

Element = Tuple[Word, ...]


def _path(ws: Element) -> List[str]:
    path = [ws[0].start]
    for w in ws:
        path.extend(w.path[1:])
    return path


def zeta_component(env: Envelope, ws: Element) -> Vector:
    """ζ_n on w_0⊗...⊗w_n: the envelope word w_0 i0 w_1 ... i0 w_n with its sign"""
    return xi_n(ws, env.unit_vectors(), env.category.field.one)


def zeta_inverse(env: Envelope, word: Word) -> Tuple[Element, int]:
    """Split an envelope word at its adjoined units; returns (pieces, s) with ζ(pieces) = s·word"""
    su = set(env.units.values())
    pieces: List[Word] = []
    start, current = word.start, []
    for g in word.gens:
        if g in su:
            pieces.append(Word(start, tuple(current)))
            start, current = g.target, []
        else:
            current.append(g)
    pieces.append(Word(start, tuple(current)))
    exponent = sum(m * w.degree for m, w in enumerate(pieces))
    return tuple(pieces), sign(exponent)


def exact_tuples(A: AInfCategory, n: int, total: int) -> List[Element]:
    """Elements w_0⊗...⊗w_n with sum len(w_i) + n exactly total"""
    return [ws for ws in word_tuples(A.quiver, n, total) if sum(len(w) for w in ws) + n == total]


def zeta_bijection_report(env: Envelope, max_length: int) -> CheckReport:
    """ζ is a degree-preserving bijection on every word length <= max_length"""
    A, Asu = env.base, env.category
    run = CheckRun(f"zeta-bijection[{A.name}]", max_length, A.field)
    one = A.field.one
    for length in range(max_length + 1):
        counts: Dict[int, int] = {}
        for n in range(length + 1):
            for ws in exact_tuples(A, n, length):
                deg = sum(w.degree for w in ws) - n
                counts[deg] = counts.get(deg, 0) + 1
        word_counts: Dict[int, int] = {}
        for x in Asu.quiver.words(length):
            word_counts[x.degree] = word_counts.get(x.degree, 0) + 1
            ws, s = zeta_inverse(env, x)
            if not run.record("zeta-inverse", length, x.path, x,
                              difference(zeta_component(env, ws), {x: one * s})):
                return run.report()
        if counts != word_counts:
            run.fail("zeta-dimension", f"length {length}: {counts} != {word_counts}")
            return run.report()
    return run.report()


@dataclass
class ECocategory:
    """
    Coefficients of the cocategory E = ⊕ (TsA)^{⊗n+1}[n]

    An element w_0⊗...⊗w_n has degree sum |w_i| - n.
    """

    base: AInfCategory

    @property
    def field(self):
        return self.base.field

    def degree(self, ws: Element) -> int:
        return sum(w.degree for w in ws) - (len(ws) - 1)

    def delta(self, ws: Element) -> Dict[Tuple[Element, Element], Any]:
        one = self.field.one
        out: Dict[Tuple[Element, Element], Any] = {}
        for i, w in enumerate(ws):
            after = sum(v.degree for v in ws[i + 1:])
            for alpha, beta in cut_comultiplication(w, 2, one):
                add_term(out, (ws[:i] + (alpha,), (beta,) + ws[i + 1:]), one * sign(i * (beta.degree + after)))
        return out

    def differential(self, ws: Element) -> Dict[Element, Any]:
        one = self.field.one
        n = len(ws) - 1
        out: Dict[Element, Any] = {}
        for i, w in enumerate(ws):
            s = sign(n + sum(v.degree for v in ws[i + 1:]))
            for v, c in self.base.apply_b(w).items():
                add_term(out, ws[:i] + (v,) + ws[i + 1:], c * s)
        if n >= 1:
            for t, c in nu_n(ws, one).items():
                add_term(out, t, c)
        return out

    def counit(self, ws: Element) -> Any:
        return self.field.one if len(ws) == 1 and not ws[0].gens else self.field.zero

    def augmentation(self, obj: str) -> Element:
        return (Word(obj, ()),)

    def elements(self, budget: int) -> List[Element]:
        return [ws for n in range(budget + 1) for ws in word_tuples(self.base.quiver, n, budget)]


def build_E(A: AInfCategory) -> ECocategory:
    return ECocategory(A)


def check_E(E: ECocategory, env: Envelope, budget: int) -> List[CheckReport]:
    """b̃² = 0, Δ̃ coassociative and counital, and ζ intertwines both with TsA^su"""
    N = budget
    field_ = E.field
    runs = {key: CheckRun(f"{key}[{E.base.name}]", N, field_)
            for key in ("E-square", "E-coassociativity", "E-counit", "zeta-differential", "zeta-delta")}
    units = env.unit_vectors()
    one = field_.one
    for ws in E.elements(N):
        n = len(ws) - 1
        path = _path(ws)

        square: Dict[Element, Any] = {}
        for t, c in E.differential(ws).items():
            for t2, c2 in E.differential(t).items():
                add_term(square, t2, c * c2)
        runs["E-square"].record("E-square", n, path, ws, square)

        delta = E.delta(ws)
        coassoc: Dict[Tuple, Any] = {}
        for (left, right), c in delta.items():
            for (l1, l2), c2 in E.delta(left).items():
                add_term(coassoc, (l1, l2, right), c * c2)
            for (r1, r2), c2 in E.delta(right).items():
                add_term(coassoc, (left, r1, r2), -c * c2)
        runs["E-coassociativity"].record("E-coassociativity", n, path, ws, coassoc)

        counit: Dict[Tuple, Any] = {}
        for (left, right), c in delta.items():
            add_term(counit, ("left", right), c * E.counit(left))
            add_term(counit, ("right", left), c * E.counit(right))
        add_term(counit, ("left", ws), -one)
        add_term(counit, ("right", ws), -one)
        runs["E-counit"].record("E-counit", n, path, ws, counit)

        image = xi_n(ws, units, one)
        lhs: Vector = {}
        for v, c in image.items():
            add_scaled(lhs, env.category.apply_b(v), c)
        for t, c in E.differential(ws).items():
            add_scaled(lhs, xi_n(t, units, one), -c)
        runs["zeta-differential"].record("zeta-differential", n, path, ws, lhs)

        cut: Dict[Tuple[Word, Word], Any] = {}
        for v, c in image.items():
            for key in cut_comultiplication(v, 2, one):
                add_term(cut, key, c)
        for (left, right), c in delta.items():
            right_image = xi_n(right, units, one)
            for a, ac in xi_n(left, units, one).items():
                for b, bc in right_image.items():
                    add_term(cut, (a, b), -c * ac * bc)
        runs["zeta-delta"].record("zeta-delta", n, path, ws, cut)
    return [run.report() for run in runs.values()]


@dataclass
class PhiFamily:
    """
    φ_0: A -> B an A-infinity functor and φ_n: (TsA)^{⊗n+1} -> TsB of degree -n

    maps[n] evaluates the full φ_n on a tuple of words.
    """

    source: AInfCategory
    target: AInfCategory
    base: AInfFunctor
    maps: Dict[int, Callable[[Element], Vector]] = field(default_factory=dict)
    truncation: int = 0

    def __post_init__(self):
        if not self.truncation:
            self.truncation = self.base.truncation

    def phi(self, ws: Element) -> Vector:
        n = len(ws) - 1
        if n == 0:
            return self.base.image(ws[0])
        fn = self.maps.get(n)
        return fn(ws) if fn is not None else {}

    def component(self, ws: Element) -> Vector:
        return {v.gens[0]: c for v, c in self.phi(ws).items() if len(v) == 1}


def functor_to_family(U: AInfFunctor, env: Envelope) -> PhiFamily:
    """φ_n = ζ_n·U, φ_0 = e·U"""
    units = env.unit_vectors()
    one = env.category.field.one

    def make(n: int) -> Callable[[Element], Vector]:
        def phi_n(ws: Element) -> Vector:
            out: Vector = {}
            for v, c in xi_n(ws, units, one).items():
                add_scaled(out, U.image(v), c)
            return out
        return phi_n

    base = compose_functors(env.embedding, U)
    maps = {n: make(n) for n in range(1, U.truncation + 1)}
    return PhiFamily(env.base, U.target, base, maps, U.truncation)


def check_family(F: PhiFamily) -> List[CheckReport]:
    """The base, counit, comultiplication and differential systems, on Σ len + n <= N"""
    N = F.truncation
    A, B = F.source, F.target
    one = A.field.one
    reports = [check_functor(F.base, name="family-base")]
    runs = {key: CheckRun(f"family-{key}", N, A.field) for key in ("counit", "delta", "differential")}
    for n in range(1, N + 1):
        for ws in word_tuples(A.quiver, n, N):
            path = _path(ws)
            value = F.phi(ws)
            runs["counit"].record("counit", n, path, ws, {v: c for v, c in value.items() if not v.gens})

            delta: Dict[Tuple[Word, Word], Any] = {}
            for v, c in value.items():
                for key in cut_comultiplication(v, 2, one):
                    add_term(delta, key, c)
            for i in range(n + 1):
                after = sum(w.degree for w in ws[i + 1:])
                for alpha, beta in cut_comultiplication(ws[i], 2, one):
                    s = sign(i * (beta.degree + after))
                    right = F.phi((beta,) + ws[i + 1:])
                    for a, ac in F.phi(ws[:i] + (alpha,)).items():
                        for b, bc in right.items():
                            add_term(delta, (a, b), -ac * bc * s)
            runs["delta"].record("delta", n, path, ws, delta)

            diff: Vector = {}
            for v, c in value.items():
                add_scaled(diff, B.apply_b(v), c)
            for i in range(n + 1):
                s = sign(n + sum(w.degree for w in ws[i + 1:]))
                for v, c in A.apply_b(ws[i]).items():
                    add_scaled(diff, F.phi(ws[:i] + (v,) + ws[i + 1:]), -c * s)
            for t, c in nu_n(ws, one).items():
                add_scaled(diff, F.phi(t), -c)
            runs["differential"].record("differential", n, path, ws, diff)
    reports.extend(run.report() for run in runs.values())
    return reports


def family_to_functor(F: PhiFamily, env: Envelope) -> AInfFunctor:
    """
    The functor U: A^su -> B with U(ζ_n(ws)) = φ_n(ws)

    Raises:
        IncompatibleFamilyError: naming the first violated system
    """
    for report in check_family(F):
        if not report.passed:
            system = report.name.replace("family-", "")
            raise IncompatibleFamilyError(system, report.witness.equation if report.witness else "")
    f = ComponentFamily(MORPHISM, 0, F.truncation)
    for m in range(1, F.truncation + 1):
        for x in env.category.quiver.words(m):
            ws, s = zeta_inverse(env, x)
            value = F.component(ws)
            if value:
                f.set(x.gens, {g: c * s for g, c in value.items()})
    logger.info(f"assembled functor {env.category.name} -> {F.target.name} from its family")
    return AInfFunctor(env.category, F.target, dict(F.base.object_map), f, name="U")


def family_slice(F: PhiFamily) -> DoubleCoderivation:
    """φ_1 as a double (φ_0, φ_0)-coderivation of degree -1"""

    def full(u: Word, w: Word) -> Vector:
        return F.phi((u, w))

    def rule(u: Word, w: Word) -> Vector:
        return F.component((u, w))

    return DoubleCoderivation(F.base, F.base, -1, rule=rule, full=full, name="phi1",
                              limit=F.truncation - 1)


def slice_reports(F: PhiFamily) -> List[CheckReport]:
    """The n = 1 slice read as double-coderivation statements: law and φ_1B1 = νφ_0"""
    h = family_slice(F)
    nu = nu_coderivation(F.source)
    nu.limit = h.limit
    return [check_double_coderivation(h, name="slice-coderivation"),
            compare_double(B1(h), post_compose(nu, F.base), "slice-differential")]
