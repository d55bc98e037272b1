"""
Exact linear algebra over Q and F_p
Graded spaces, graded maps, complexes, cohomology and the mapping-cone solver
used by every inductive construction.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Hashable, Iterable, List, Optional, Tuple

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .errors import InputError, NotACycleError, PreconditionError, UnsolvableError

logger = logging.getLogger(__name__)

# Sparse vector: basis label -> nonzero field element
Vector = Dict[Hashable, Any]


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def add_term(acc: Vector, key: Hashable, coeff: Any) -> None:
    """Add coeff*key to acc in place, dropping cancelled terms."""
    if not coeff:
        return
    old = acc.get(key)
    if old is None:
        acc[key] = coeff
        return
    new = old + coeff
    if new:
        acc[key] = new
    else:
        del acc[key]


def add_scaled(acc: Vector, vec: Vector, coeff: Any = 1) -> None:
    for key, c in vec.items():
        add_term(acc, key, c * coeff)


def scaled(vec: Vector, coeff: Any) -> Vector:
    out: Vector = {}
    add_scaled(out, vec, coeff)
    return out


def difference(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    add_scaled(out, b, -1)
    return out


def canonical(vec: Vector) -> Vector:
    """Sorted copy with zero coefficients removed"""
    return {k: vec[k] for k in sorted(vec) if vec[k]}


class Field:
    """
    Exact scalar field: the rationals or a prime field F_p

    Elements are sympy domain elements (QQ or GF(p)); conversion from
    integers, Fractions and "a/b" strings goes through __call__.
    """

    def __init__(self, characteristic: int = 0):
        if characteristic < 0:
            raise InputError(f"characteristic must be non-negative, got {characteristic}")
        if characteristic and not isprime(characteristic):
            raise InputError(f"field characteristic {characteristic} is not prime")
        self.characteristic = characteristic
        self.domain = GF(characteristic) if characteristic else QQ
        self.zero = self.domain.zero
        self.one = self.domain.one

    @property
    def name(self) -> str:
        return f"prime:{self.characteristic}" if self.characteristic else "rational"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("Field", self.characteristic))

    def __repr__(self) -> str:
        return f"Field({self.name})"

    def __call__(self, value: Any) -> Any:
        if isinstance(value, bool):
            raise InputError(f"invalid coefficient {value!r}")
        if isinstance(value, int):
            return self.domain(value)
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise InputError(f"invalid coefficient {value!r}")
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
            if self.characteristic and den % self.characteristic == 0:
                raise InputError(f"coefficient {value} is undefined in {self.name}")
            return self.domain(num) / self.domain(den)
        if self.domain.of_type(value):
            return value
        raise InputError(f"invalid coefficient {value!r}")

    def format(self, element: Any) -> str:
        """Exact text form: "a/b" over Q, a residue in [0, p) over F_p"""
        value = self.domain.to_sympy(element)
        if self.characteristic:
            return str(int(value) % self.characteristic)
        return str(value)


def parse_field(name: str) -> Field:
    """Parse "rational" or "prime:p"."""
    name = (name or "").strip()
    if name == "rational":
        return Field(0)
    if name.startswith("prime:"):
        try:
            p = int(name.split(":", 1)[1])
        except ValueError:
            raise InputError(f"invalid field {name!r}")
        if p < 2:
            raise InputError(f"field characteristic {p} is not prime")
        return Field(p)
    raise InputError(f"invalid field {name!r}: expected 'rational' or 'prime:p'")


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded space given by an ordered basis of hashable labels"""

    basis: Tuple[Hashable, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        if len(self.basis) != len(self.degrees):
            raise InputError("basis and degree lists differ in length")
        if len(set(self.basis)) != len(self.basis):
            raise InputError("duplicate basis labels")

    @classmethod
    def of(cls, elements: Iterable[Any]) -> "GradedSpace":
        """Space spanned by elements carrying a `degree` attribute"""
        elements = tuple(elements)
        return cls(elements, tuple(e.degree for e in elements))

    @cached_property
    def index(self) -> Dict[Hashable, int]:
        return {label: i for i, label in enumerate(self.basis)}

    @cached_property
    def dims(self) -> Dict[int, int]:
        dims: Dict[int, int] = {}
        for deg in self.degrees:
            dims[deg] = dims.get(deg, 0) + 1
        return dict(sorted(dims.items()))

    def degree_of(self, label: Hashable) -> int:
        return self.degrees[self.index[label]]

    def in_degree(self, k: int) -> List[Hashable]:
        return [b for b, deg in zip(self.basis, self.degrees) if deg == k]

    def __len__(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __contains__(self, label) -> bool:
        return label in self.index


@dataclass
class GradedMap:
    """
    Linear map of fixed degree between graded spaces, acting on the right.

    entries maps each source label to its (nonzero) image vector.
    """

    source: GradedSpace
    target: GradedSpace
    degree: int
    entries: Dict[Hashable, Vector] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s, image in self.entries.items():
            if s not in self.source:
                raise InputError(f"{s!r} is not in the source basis")
            image = {t: c for t, c in image.items() if c}
            if not image:
                continue
            expected = self.source.degree_of(s) + self.degree
            for t in image:
                if t not in self.target:
                    raise InputError(f"{t!r} is not in the target basis")
                if self.target.degree_of(t) != expected:
                    raise InputError(
                        f"image of {s!r} has a term of degree {self.target.degree_of(t)}, "
                        f"expected {expected}"
                    )
            clean[s] = image
        self.entries = clean

    @classmethod
    def identity(cls, space: GradedSpace, field: Field) -> "GradedMap":
        return cls(space, space, 0, {b: {b: field.one} for b in space})

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, degree: int) -> "GradedMap":
        return cls(source, target, degree, {})

    def image(self, label: Hashable) -> Vector:
        return self.entries.get(label, {})

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for s, c in vec.items():
            add_scaled(out, self.image(s), c)
        return out

    def then(self, other: "GradedMap") -> "GradedMap":
        """Composite "first self, then other" (x(fg) = (xf)g)"""
        entries = {s: other.apply(image) for s, image in self.entries.items()}
        return GradedMap(self.source, other.target, self.degree + other.degree, entries)

    def _combine(self, other: "GradedMap", coeff: int) -> "GradedMap":
        if other.degree != self.degree:
            raise InputError(f"cannot add maps of degrees {self.degree} and {other.degree}")
        entries = {s: dict(v) for s, v in self.entries.items()}
        for s, image in other.entries.items():
            acc = entries.setdefault(s, {})
            add_scaled(acc, image, coeff)
        return GradedMap(self.source, self.target, self.degree, entries)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        return self._combine(other, 1)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self._combine(other, -1)

    def __neg__(self) -> "GradedMap":
        return self.scaled(-1)

    def scaled(self, coeff: Any) -> "GradedMap":
        return GradedMap(self.source, self.target, self.degree,
                         {s: scaled(v, coeff) for s, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.degree == other.degree and self.source == other.source
                and self.target == other.target and (self - other).is_zero())

    def inverse(self, field: Field) -> "GradedMap":
        """Inverse of a degree-0 map; raises PreconditionError when singular"""
        if self.degree != 0:
            raise PreconditionError("only degree-0 maps can be inverted")
        entries: Dict[Hashable, Vector] = {}
        for k in set(self.source.degrees) | set(self.target.degrees):
            rows = self.source.in_degree(k)
            cols = self.target.in_degree(k)
            if len(rows) != len(cols):
                raise PreconditionError(f"map is not invertible in degree {k}")
            if not rows:
                continue
            # one equation per target label, one unknown per source label
            equations = [{i: self.image(s)[t] for i, s in enumerate(rows) if self.image(s).get(t)}
                         for t in cols]
            for t in cols:
                rhs = [field.one if t2 == t else field.zero for t2 in cols]
                solution = _solve_rows(equations, rhs, len(rows), field)
                if solution is None:
                    raise PreconditionError(f"map is not invertible in degree {k}")
                entries[t] = {s: c for s, c in zip(rows, solution) if c}
        return GradedMap(self.target, self.source, 0, entries)


@dataclass
class Complex:
    """Graded space with a degree +1 differential acting on the right"""

    space: GradedSpace
    d: GradedMap
    field: Field

    def __post_init__(self):
        if self.d.degree != 1:
            raise InputError(f"differential must have degree 1, got {self.d.degree}")

    def is_complex(self) -> bool:
        return self.d.then(self.d).is_zero()


def _to_rows(matrix: DomainMatrix) -> List[List[Any]]:
    return matrix.to_list()


def _rref(data: Dict[int, Dict[int, Any]], shape: Tuple[int, int], field: Field):
    matrix = DomainMatrix({i: row for i, row in data.items() if row}, shape, field.domain)
    return matrix.rref()


def _rank(rows: List[List[Any]], field: Field) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    width = len(rows[0])
    data = {i: {j: c for j, c in enumerate(r) if c} for i, r in enumerate(rows)}
    _, pivots = _rref(data, (len(rows), width), field)
    return len(pivots)


def _solve_rows(equations: List[Dict[int, Any]], rhs: List[Any], n_unknowns: int,
                field: Field) -> Optional[List[Any]]:
    """
    Solve a sparse system row by row

    Args:
        equations: one {unknown index: coefficient} dict per equation
        rhs: right-hand side per equation
        n_unknowns: number of unknowns

    Returns:
        list: solution with free variables zero, or None if inconsistent
    """
    if n_unknowns == 0:
        return [] if not any(rhs) else None
    data = {}
    for i, (row, b) in enumerate(zip(equations, rhs)):
        entry = {j: c for j, c in row.items() if c}
        if b:
            entry[n_unknowns] = b
        if entry:
            data[i] = entry
    if not data:
        return [field.zero] * n_unknowns
    reduced, pivots = _rref(data, (len(equations), n_unknowns + 1), field)
    if n_unknowns in pivots:
        return None
    solution = [field.zero] * n_unknowns
    rows = _to_rows(reduced)
    for i, p in enumerate(pivots):
        solution[p] = rows[i][n_unknowns]
    return solution


def solve_linear(A: DomainMatrix, b: List[Any]) -> Optional[List[Any]]:
    """
    Solve A·x = b exactly

    Free variables are set to zero; pivots follow column order.

    Returns:
        list: a solution, or None when the system is inconsistent
    """
    rows, cols = A.shape
    if len(b) != rows:
        raise InputError(f"right-hand side has length {len(b)}, expected {rows}")
    field = Field(A.domain.characteristic())
    dense = _to_rows(A) if rows and cols else [[] for _ in range(rows)]
    equations = [{j: c for j, c in enumerate(r) if c} for r in dense]
    return _solve_rows(equations, [field(c) for c in b], cols, field)


def _kernel(d: GradedMap, k: int, field: Field) -> List[Vector]:
    """Basis of the kernel of d restricted to source degree k"""
    sources = d.source.in_degree(k)
    if not sources:
        return []
    targets = d.target.in_degree(k + d.degree)
    t_index = {t: i for i, t in enumerate(targets)}
    data: Dict[int, Dict[int, Any]] = {}
    for j, s in enumerate(sources):
        for t, c in d.image(s).items():
            data.setdefault(t_index[t], {})[j] = c
    if not data:
        return [{s: field.one} for s in sources]
    reduced, pivots = _rref(data, (len(targets), len(sources)), field)
    rows = _to_rows(reduced)
    basis = []
    for free in range(len(sources)):
        if free in pivots:
            continue
        vec = {sources[free]: field.one}
        for i, p in enumerate(pivots):
            if rows[i][free]:
                vec[sources[p]] = -rows[i][free]
        basis.append(vec)
    return basis


def _span_rank(vectors: List[Vector], labels: List[Hashable], field: Field) -> int:
    return _rank([[v.get(label, field.zero) for label in labels] for v in vectors], field)


@dataclass
class Cohomology:
    """Cohomology dimensions with one chosen representative cycle per class"""

    dims: Dict[int, int]
    representatives: Dict[int, List[Vector]]


def cohomology(C: Complex) -> Cohomology:
    """
    Cohomology of a finite complex

    Representatives extend a basis of boundaries by kernel vectors in
    basis order, so the choice is deterministic.
    """
    if not C.is_complex():
        raise InputError("d^2 != 0: not a complex")
    dims: Dict[int, int] = {}
    reps: Dict[int, List[Vector]] = {}
    for k in sorted(set(C.space.degrees)):
        labels = C.space.in_degree(k)
        boundaries = [C.d.image(s) for s in C.space.in_degree(k - 1)]
        boundaries = [b for b in boundaries if b]
        rank = _span_rank(boundaries, labels, C.field)
        chosen: List[Vector] = []
        for z in _kernel(C.d, k, C.field):
            if _span_rank(boundaries + chosen + [z], labels, C.field) > rank + len(chosen):
                chosen.append(z)
        if chosen:
            dims[k] = len(chosen)
            reps[k] = chosen
    return Cohomology(dims, reps)


def is_chain_map(f: GradedMap, source: Complex, target: Complex) -> bool:
    return source.d.then(f) == f.then(target.d)


def is_quasi_iso(f: GradedMap, source: Complex, target: Complex) -> bool:
    """True iff the degree-0 chain map f induces an isomorphism on cohomology"""
    if f.degree != 0:
        raise InputError("quasi-isomorphism test needs a degree-0 map")
    if not is_chain_map(f, source, target):
        raise InputError("map does not commute with the differentials")
    h_source = cohomology(source)
    h_target = cohomology(target)
    if h_source.dims != h_target.dims:
        return False
    for k, reps in h_source.representatives.items():
        labels = target.space.in_degree(k)
        boundaries = [b for b in (target.d.image(s) for s in target.space.in_degree(k - 1)) if b]
        base = _span_rank(boundaries, labels, target.field)
        images = [f.apply(z) for z in reps]
        if _span_rank(boundaries + images, labels, target.field) != base + len(reps):
            return False
    return True


def solve_preimage(f: GradedMap, y: Vector, field: Field) -> Optional[Vector]:
    """Find x with x·f = y, or None when y is not in the image"""
    if not y:
        return {}
    degree = f.target.degree_of(next(iter(y))) - f.degree
    unknowns = f.source.in_degree(degree)
    rows = {}
    for j, s in enumerate(unknowns):
        for t, c in f.image(s).items():
            rows.setdefault(t, {})[j] = c
    keys = sorted(set(rows) | set(y), key=f.target.index.__getitem__)
    solution = _solve_rows([rows.get(t, {}) for t in keys], [y.get(t, field.zero) for t in keys],
                           len(unknowns), field)
    if solution is None:
        return None
    return {s: c for s, c in zip(unknowns, solution) if c}


def hom_differential(g: GradedMap, domain: Complex, codomain: Complex) -> GradedMap:
    """Differential of the maps complex: g·d - (-1)^|g| d·g"""
    return g.then(codomain.d) - domain.d.then(g).scaled(sign(g.degree))


def _transpose(d: GradedMap) -> Dict[Hashable, Dict[Hashable, Any]]:
    out: Dict[Hashable, Dict[Hashable, Any]] = {}
    for s, image in d.entries.items():
        for t, c in image.items():
            out.setdefault(t, {})[s] = c
    return out


def solve_homotopy(source: Complex, target: Complex, rhs: GradedMap) -> Optional[GradedMap]:
    """Find h of degree rhs.degree - 1 with h·d_T + d_S·h = rhs, or None"""
    field = source.field
    e = rhs.degree
    unknowns = [(s, t) for s in source.space for t in target.space
                if target.space.degree_of(t) == source.space.degree_of(s) + e - 1]
    d_s_t = _transpose(source.d)
    rows: Dict[Tuple, Dict[int, Any]] = {}
    for col, (s, t) in enumerate(unknowns):
        for t2, c in target.d.image(t).items():
            add_term(rows.setdefault((s, t2), {}), col, c)
        for s2, c in d_s_t.get(s, {}).items():
            add_term(rows.setdefault((s2, t), {}), col, c)
    rhs_keys = {(s, t) for s, image in rhs.entries.items() for t in image}
    keys = sorted(set(rows) | rhs_keys,
                  key=lambda st: (source.space.index[st[0]], target.space.index[st[1]]))
    solution = _solve_rows([rows.get(key, {}) for key in keys],
                           [rhs.image(s).get(t, field.zero) for s, t in keys],
                           len(unknowns), field)
    if solution is None:
        return None
    entries: Dict[Hashable, Vector] = {}
    for (s, t), c in zip(unknowns, solution):
        if c:
            entries.setdefault(s, {})[t] = c
    return GradedMap(source.space, target.space, e - 1, entries)


@dataclass
class ConeProblem:
    """
    Boundary problem in the cone of post-composition with u

    Unknown x: N -> S of degree x_degree and y: N -> T of degree
    x_degree - 1 with -x·d = lam and y·d + x·u = nu, where d is the
    differential of the maps complex.
    """

    domain: Complex
    source: Complex
    target: Complex
    u: GradedMap
    lam: GradedMap
    nu: GradedMap
    x_degree: int = 1


def solve_cone(problem: ConeProblem) -> Tuple[GradedMap, GradedMap]:
    """
    Solve a ConeProblem exactly

    Raises:
        NotACycleError: the right-hand side is not a cycle in the cone
        UnsolvableError: the cycle is not a boundary
    """
    N, S, T = problem.domain, problem.source, problem.target
    field = S.field
    e = problem.x_degree
    lam_cycle = hom_differential(problem.lam, N, S)
    nu_cycle = hom_differential(problem.nu, N, T) + problem.lam.then(problem.u)
    if not lam_cycle.is_zero() or not nu_cycle.is_zero():
        raise NotACycleError("not a cycle: cone right-hand side has nonzero differential")

    x_unknowns = [(n, s) for n in N.space for s in S.space
                  if S.space.degree_of(s) == N.space.degree_of(n) + e]
    y_unknowns = [(n, t) for n in N.space for t in T.space
                  if T.space.degree_of(t) == N.space.degree_of(n) + e - 1]
    d_n_t = _transpose(N.d)
    rows: Dict[Tuple, Dict[int, Any]] = {}
    for col, (n0, s0) in enumerate(x_unknowns):
        for s1, c in S.d.image(s0).items():
            add_term(rows.setdefault(("s", n0, s1), {}), col, -c)
        for n, c in d_n_t.get(n0, {}).items():
            add_term(rows.setdefault(("s", n, s0), {}), col, c * sign(e))
        for t1, c in problem.u.image(s0).items():
            add_term(rows.setdefault(("t", n0, t1), {}), col, c)
    offset = len(x_unknowns)
    for col, (n0, t0) in enumerate(y_unknowns, start=offset):
        for t1, c in T.d.image(t0).items():
            add_term(rows.setdefault(("t", n0, t1), {}), col, c)
        for n, c in d_n_t.get(n0, {}).items():
            add_term(rows.setdefault(("t", n, t0), {}), col, c * sign(e))

    rhs: Dict[Tuple, Any] = {}
    for n, image in problem.lam.entries.items():
        for s, c in image.items():
            rhs[("s", n, s)] = c
    for n, image in problem.nu.entries.items():
        for t, c in image.items():
            rhs[("t", n, t)] = c

    def row_order(key):
        side, n, label = key
        space = S.space if side == "s" else T.space
        return (side, N.space.index[n], space.index[label])

    keys = sorted(set(rows) | set(rhs), key=row_order)
    logger.debug(f"cone system: {len(keys)} equations, {offset + len(y_unknowns)} unknowns")
    solution = _solve_rows([rows.get(k, {}) for k in keys], [rhs.get(k, field.zero) for k in keys],
                           offset + len(y_unknowns), field)
    if solution is None:
        raise UnsolvableError("cone unsolvable: the cycle is not a boundary")

    x_entries: Dict[Hashable, Vector] = {}
    for (n, s), c in zip(x_unknowns, solution[:offset]):
        if c:
            x_entries.setdefault(n, {})[s] = c
    y_entries: Dict[Hashable, Vector] = {}
    for (n, t), c in zip(y_unknowns, solution[offset:]):
        if c:
            y_entries.setdefault(n, {})[t] = c
    return (GradedMap(N.space, S.space, e, x_entries),
            GradedMap(N.space, T.space, e - 1, y_entries))
