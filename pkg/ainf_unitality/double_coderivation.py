"""
Double (f,g)-coderivations TsA⊗TsA -> TsB

A double coderivation r of degree d is stored by its components
r(u, w) in sB; the full map is recovered by the expansion
    r(u, w) = sum f(u')·r(u'', w')·g(w''),  u = u'u'', w = w'w''
with the sign (-1)^(d|w''|) of r passing w''.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from .ainfty import AInfCategory, AInfFunctor, compose_functors, identity_functor
from .errors import InputError
from .exact_linalg import Vector, add_scaled, add_term, difference, sign
from .quiver import GradedQuiver
from .reports import CheckReport, CheckRun
from .tensor_coalgebra import Word, cut_comultiplication

logger = logging.getLogger(__name__)

Pair = Tuple[Word, Word]


def double_pairs(quiver: GradedQuiver, total: int) -> List[Pair]:
    """All composable (u, w) with len(u) + len(w) <= total"""
    pairs = []
    for n in range(total + 1):
        for x in quiver.words(n):
            for i in range(n + 1):
                pairs.append(x.split(i))
    return pairs


@dataclass
class DoubleCoderivation:
    """
    Components r(u, w) of a double (f,g)-coderivation

    tables are consulted first, then the optional rule (memoized). full,
    when given, is an independent formula for the whole map that
    check_double_coderivation compares against the expansion.
    """

    f: AInfFunctor
    g: AInfFunctor
    degree: int
    tables: Dict[Pair, Vector] = field(default_factory=dict)
    rule: Optional[Callable[[Word, Word], Vector]] = None
    full: Optional[Callable[[Word, Word], Vector]] = None
    name: str = "r"
    limit: Optional[int] = None

    def __post_init__(self):
        if self.f.source.quiver != self.g.source.quiver or self.f.target.quiver != self.g.target.quiver:
            raise InputError("f and g must be functors between the same categories")
        self._cache: Dict[Pair, Vector] = {}

    @property
    def source(self) -> AInfCategory:
        return self.f.source

    @property
    def target(self) -> AInfCategory:
        return self.f.target

    @property
    def truncation(self) -> int:
        return self.f.truncation if self.limit is None else self.limit

    def component(self, u: Word, w: Word) -> Vector:
        if u.end != w.start:
            raise InputError(f"{u!r} and {w!r} are not composable")
        if len(u) + len(w) > self.truncation:
            return {}
        key = (u, w)
        if key in self.tables:
            return self.tables[key]
        if self.rule is None:
            return {}
        if key not in self._cache:
            self._cache[key] = self.rule(u, w)
        return self._cache[key]

    def set(self, u: Word, w: Word, value: Vector) -> None:
        self.tables[(u, w)] = {k: c for k, c in sorted(value.items()) if c}
        self._cache.pop((u, w), None)

    def expand(self, u: Word, w: Word) -> Vector:
        out: Vector = {}
        odd = self.degree % 2
        for i in range(len(u) + 1):
            u_pre, u_r = u.split(len(u) - i)
            left = None
            for j in range(len(w) + 1):
                w_r, w_suf = w.split(j)
                comp = self.component(u_r, w_r)
                if not comp:
                    continue
                if left is None:
                    left = self.f.image(u_pre)
                right = self.g.image(w_suf)
                s = -1 if odd and w_suf.degree % 2 else 1
                for lw, lc in left.items():
                    for gen, c in comp.items():
                        for rw, rc in right.items():
                            add_term(out, Word(lw.start, lw.gens + (gen,) + rw.gens), lc * c * rc * s)
        return out

    def image(self, u: Word, w: Word) -> Vector:
        return self.full(u, w) if self.full is not None else self.expand(u, w)


def check_double_coderivation(r: DoubleCoderivation, name: Optional[str] = None) -> CheckReport:
    """
    Law rΔ0 = (Δ0⊗1)(f⊗r) + (1⊗Δ0)(r⊗g) and, when r has a full
    formula, agreement of that formula with the expansion
    """
    run = CheckRun(name or f"double-coderivation[{r.name}]", r.truncation, r.source.field)
    one = r.source.field.one
    for u, w in double_pairs(r.source.quiver, r.truncation):
        image = r.image(u, w)
        residual: Dict[Tuple[Word, Word], Any] = {}
        for v, c in image.items():
            for key in cut_comultiplication(v, 2, one):
                add_term(residual, key, c)
        for i in range(len(u) + 1):
            u1, u2 = u.split(i)
            right = r.image(u2, w)
            for a, ac in r.f.image(u1).items():
                for v, vc in right.items():
                    add_term(residual, (a, v), -ac * vc)
        for j in range(len(w) + 1):
            w1, w2 = w.split(j)
            s = sign(r.degree * w2.degree)
            right = r.g.image(w2)
            for v, vc in r.image(u, w1).items():
                for b, bc in right.items():
                    add_term(residual, (v, b), -vc * bc * s)
        if residual:
            k = min(len(a) + len(b) for a, b in residual)
            if not run.record("coderivation-law", [len(u), len(w), k], u.path + w.path[1:], (u, w), residual):
                return run.report()
        if r.full is not None:
            diff = difference(image, r.expand(u, w))
            k = min((len(v) for v in diff), default=0)
            if not run.record("expansion", [len(u), len(w), k], u.path + w.path[1:], (u, w), diff):
                return run.report()
    return run.report()


def B1(r: DoubleCoderivation) -> DoubleCoderivation:
    """rB1 = rb - (-1)^d (1⊗b + b⊗1) r, computed componentwise"""
    A, B = r.source, r.target
    d = r.degree

    def rule(u: Word, w: Word) -> Vector:
        out: Vector = {}
        for v, c in r.image(u, w).items():
            add_scaled(out, B.b.component(v.gens), c)
        s = -sign(d)
        for v, c in A.apply_b(u).items():
            add_scaled(out, r.component(v, w), c * s * sign(w.degree))
        for v, c in A.apply_b(w).items():
            add_scaled(out, r.component(u, v), c * s)
        return out

    return DoubleCoderivation(r.f, r.g, d + 1, rule=rule, name=f"{r.name}B1", limit=r.limit)


def post_compose(r: DoubleCoderivation, h: AInfFunctor) -> DoubleCoderivation:
    """rh: a double (fh, gh)-coderivation"""

    def rule(u: Word, w: Word) -> Vector:
        out: Vector = {}
        for v, c in r.image(u, w).items():
            add_scaled(out, h.f.component(v.gens), c)
        return out

    return DoubleCoderivation(compose_functors(r.f, h), compose_functors(r.g, h), r.degree,
                              rule=rule, name=f"{r.name}.{h.name}", limit=r.limit)


def pre_compose(k: AInfFunctor, r: DoubleCoderivation) -> DoubleCoderivation:
    """(k⊗k)r: a double (kf, kg)-coderivation"""

    def rule(u: Word, w: Word) -> Vector:
        out: Vector = {}
        images_w = k.image(w)
        for u2, c in k.image(u).items():
            for w2, c2 in images_w.items():
                add_scaled(out, r.component(u2, w2), c * c2)
        return out

    return DoubleCoderivation(compose_functors(k, r.f), compose_functors(k, r.g), r.degree,
                              rule=rule, name=f"{k.name}.{r.name}", limit=r.limit)


def compare_double(r: DoubleCoderivation, s: Optional[DoubleCoderivation], name: str,
                   equation: str = "equal") -> CheckReport:
    """Componentwise r = s (s = None compares with zero)"""
    run = CheckRun(name, r.truncation, r.source.field)
    for u, w in double_pairs(r.source.quiver, r.truncation):
        other = s.component(u, w) if s is not None else {}
        if not run.record(equation, [len(u), len(w)], u.path + w.path[1:], (u, w),
                          difference(r.component(u, w), other)):
            return run.report()
    return run.report()


def nu_coderivation(C: AInfCategory) -> DoubleCoderivation:
    """ν = (1⊗ε) - (ε⊗1), components ν(x, ∅) = x and ν(∅, x) = -x"""
    one = C.field.one
    ident = identity_functor(C)

    def rule(u: Word, w: Word) -> Vector:
        if len(u) == 1 and not w.gens:
            return {u.gens[0]: one}
        if not u.gens and len(w) == 1:
            return {w.gens[0]: -one}
        return {}

    def full(u: Word, w: Word) -> Vector:
        out: Vector = {}
        if not w.gens:
            add_term(out, u, one)
        if not u.gens:
            add_term(out, w, -one)
        return out

    return DoubleCoderivation(ident, ident, 0, rule=rule, full=full, name="nu")


def xi_coderivation(C: AInfCategory, units: Dict[str, Vector]) -> DoubleCoderivation:
    """ξ(u, w) = (-1)^|w| u·i0·w; its only component is ξ(∅, ∅) = i0"""
    ident = identity_functor(C)

    def rule(u: Word, w: Word) -> Vector:
        if not u.gens and not w.gens:
            return dict(units.get(u.start, {}))
        return {}

    def full(u: Word, w: Word) -> Vector:
        s = sign(w.degree)
        out: Vector = {}
        for g, c in units.get(u.end, {}).items():
            add_term(out, Word(u.start, u.gens + (g,) + w.gens), c * s)
        return out

    return DoubleCoderivation(ident, ident, -1, rule=rule, full=full, name="xi")


def nu_n(words: Tuple[Word, ...], one: Any) -> Dict[Tuple[Word, ...], Any]:
    """ν_n = sum_i (-1)^(n-i) (1^i⊗ε⊗1^(n-i)); ν_0 = ε"""
    n = len(words) - 1
    out: Dict[Tuple[Word, ...], Any] = {}
    for i, w in enumerate(words):
        if not w.gens:
            add_term(out, words[:i] + words[i + 1:], one * sign(n - i))
    return out


def xi_n(words: Tuple[Word, ...], units: Dict[str, Vector], one: Any) -> Vector:
    """
    Concatenate w_0 i0 w_1 ... i0 w_n

    Sign (-1)^(sum_m m|w_m|) from the units passing the words to their right.
    """
    exponent = sum(m * w.degree for m, w in enumerate(words))
    partial: Dict[Tuple, Any] = {words[0].gens: one * sign(exponent)}
    for w in words[1:]:
        unit = units.get(w.start, {})
        nxt: Dict[Tuple, Any] = {}
        for gens, c in partial.items():
            for g, c2 in unit.items():
                add_term(nxt, gens + (g,) + w.gens, c * c2)
        partial = nxt
    return {Word(words[0].start, gens): c for gens, c in partial.items()}


def word_tuples(quiver: GradedQuiver, n: int, budget: int) -> List[Tuple[Word, ...]]:
    """Composable (w_0, ..., w_n) with sum len(w_i) + n <= budget"""
    out: List[Tuple[Word, ...]] = []

    def extend(prefix: Tuple[Word, ...], obj: str, left: int) -> None:
        if len(prefix) == n + 1:
            out.append(prefix)
            return
        for length in range(left + 1):
            for w in quiver.words(length, obj):
                extend(prefix + (w,), w.end, left - length)

    if budget - n >= 0:
        for x in quiver.objects:
            extend((), x, budget - n)
    return out


def _tuple_path(words: Tuple[Word, ...]) -> List[str]:
    path = [words[0].start]
    for w in words:
        path.extend(w.path[1:])
    return path


def verify_xin_identities(C: AInfCategory, units: Dict[str, Vector],
                          max_n: Optional[int] = None) -> List[CheckReport]:
    """
    Recursions for ν_n and ξ_n, ξ_n·ε = 0, and the comultiplication and
    differential identities of ξ_n, on all tuples of total length <= N
    """
    N = C.truncation
    max_n = N if max_n is None else max_n
    one = C.field.one
    runs = {key: CheckRun(f"{key}[{C.name}]", N, C.field)
            for key in ("xi-recursion", "nu-recursion", "xi-counit", "xi-delta", "xi-differential")}
    xi = xi_coderivation(C, units)

    for n in range(0, max_n + 1):
        for ws in word_tuples(C.quiver, n, N):
            path = _tuple_path(ws)
            value = xi_n(ws, units, one)
            if n >= 1:
                rec: Vector = {}
                s = sign((n - 1) * ws[-1].degree)
                for v, c in xi_n(ws[:-1], units, one).items():
                    add_scaled(rec, xi.full(v, ws[-1]), c * s)
                runs["xi-recursion"].record("xi-recursion", n, path, ws, difference(value, rec))

                nu_rec: Dict[Tuple[Word, ...], Any] = {}
                if not ws[-1].gens:
                    add_term(nu_rec, ws[:-1], one)
                for t, c in nu_n(ws[:-1], one).items():
                    add_term(nu_rec, t + (ws[-1],), -c)
                runs["nu-recursion"].record("nu-recursion", n, path, ws, difference(nu_n(ws, one), nu_rec))

                counit = {v: c for v, c in value.items() if not v.gens}
                runs["xi-counit"].record("xi-counit", n, path, ws, counit)

            delta: Dict[Tuple[Word, Word], Any] = {}
            for v, c in value.items():
                for key in cut_comultiplication(v, 2, one):
                    add_term(delta, key, c)
            for i in range(n + 1):
                after = sum(w.degree for w in ws[i + 1:])
                for alpha, beta in cut_comultiplication(ws[i], 2, one):
                    s = sign(i * (beta.degree + after))
                    right = xi_n((beta,) + ws[i + 1:], units, one)
                    for a, ac in xi_n(ws[:i] + (alpha,), units, one).items():
                        for b, bc in right.items():
                            add_term(delta, (a, b), -ac * bc * s)
            runs["xi-delta"].record("xi-delta", n, path, ws, delta)

            diff: Vector = {}
            for v, c in value.items():
                add_scaled(diff, C.apply_b(v), c)
            for i in range(n + 1):
                s = sign(n + sum(w.degree for w in ws[i + 1:]))
                for v, c in C.apply_b(ws[i]).items():
                    add_scaled(diff, xi_n(ws[:i] + (v,) + ws[i + 1:], units, one), -c * s)
            if n >= 1:
                for t, c in nu_n(ws, one).items():
                    add_scaled(diff, xi_n(t, units, one), -c)
            runs["xi-differential"].record("xi-differential", n, path, ws, diff)
    return [run.report() for run in runs.values()]
