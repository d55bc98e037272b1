"""
Graded quivers in the suspended (sA) convention
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import InputError
from .exact_linalg import Field, GradedMap, GradedSpace

logger = logging.getLogger(__name__)

# Generator kinds: plain hom basis, adjoined strict unit, homotopy generator j
PLAIN = ""
STRICT_UNIT = "su"
HOMOTOPY = "j"


@dataclass(frozen=True, order=True)
class Gen:
    """Basis element of a hom space sA(source, target)"""

    name: str
    source: str
    target: str
    degree: int
    kind: str = PLAIN

    def __repr__(self) -> str:
        return self.name


@dataclass
class GradedQuiver:
    """Ordered object set with a finite graded basis for every ordered pair"""

    objects: Tuple[str, ...]
    homs: Dict[Tuple[str, str], Tuple[Gen, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        if len(set(self.objects)) != len(self.objects):
            raise InputError("duplicate object labels")
        homs = {}
        names = set()
        for (x, y), gens in self.homs.items():
            if x not in self.objects or y not in self.objects:
                raise InputError(f"hom ({x}, {y}) refers to an unknown object")
            for g in gens:
                if (g.source, g.target) != (x, y):
                    raise InputError(f"generator {g.name} is filed under the wrong hom ({x}, {y})")
                if g.name in names:
                    raise InputError(f"duplicate basis name {g.name}")
                names.add(g.name)
            if gens:
                homs[(x, y)] = tuple(gens)
        self.homs = homs
        self._words: Dict[Tuple[int, str], List] = {}

    def hom(self, x: str, y: str) -> Tuple[Gen, ...]:
        return self.homs.get((x, y), ())

    def space(self, x: str, y: str) -> GradedSpace:
        return GradedSpace.of(self.hom(x, y))

    def gens(self) -> List[Gen]:
        return [g for x in self.objects for y in self.objects for g in self.hom(x, y)]

    @cached_property
    def by_name(self) -> Dict[str, Gen]:
        return {g.name: g for g in self.gens()}

    def gen(self, name: str) -> Gen:
        try:
            return self.by_name[name]
        except KeyError:
            raise InputError(f"unknown basis element {name!r}")

    def out_of(self, x: str) -> List[Gen]:
        return [g for y in self.objects for g in self.hom(x, y)]

    def words(self, length: int, start: Optional[str] = None) -> List:
        """All tensor words of the given length, optionally from one start object"""
        from .tensor_coalgebra import Word

        starts = self.objects if start is None else (start,)
        out = []
        for x in starts:
            key = (length, x)
            if key not in self._words:
                level = [Word(x, ())]
                for _ in range(length):
                    level = [Word(w.start, w.gens + (g,)) for w in level for g in self.out_of(w.end)]
                self._words[key] = level
            out.extend(self._words[key])
        return out

    def words_upto(self, length: int, minimum: int = 0) -> List:
        return [w for n in range(minimum, length + 1) for w in self.words(n)]

    def dims(self, x: str, y: str) -> Dict[int, int]:
        return self.space(x, y).dims

    def with_gens(self, extra: Iterable[Gen]) -> "GradedQuiver":
        """Same objects with additional generators appended to their homs"""
        homs = {key: list(gens) for key, gens in self.homs.items()}
        for g in extra:
            homs.setdefault((g.source, g.target), []).append(g)
        return GradedQuiver(self.objects, {k: tuple(v) for k, v in homs.items()})


@dataclass
class QuiverMap:
    """Degree-n map of graded quivers: an object map plus one GradedMap per pair"""

    source: GradedQuiver
    target: GradedQuiver
    object_map: Dict[str, str]
    degree: int
    components: Dict[Tuple[str, str], GradedMap] = field(default_factory=dict)

    def __post_init__(self):
        for (x, y), comp in self.components.items():
            if comp.degree != self.degree:
                raise InputError(f"component ({x}, {y}) has degree {comp.degree}, expected {self.degree}")
            fx, fy = self.object_map[x], self.object_map[y]
            if comp.source != self.source.space(x, y) or comp.target != self.target.space(fx, fy):
                raise InputError(f"component ({x}, {y}) does not match the hom spaces")

    def component(self, x: str, y: str) -> GradedMap:
        comp = self.components.get((x, y))
        if comp is None:
            fx, fy = self.object_map[x], self.object_map[y]
            return GradedMap.zero(self.source.space(x, y), self.target.space(fx, fy), self.degree)
        return comp

    def __call__(self, g: Gen) -> Dict[Gen, object]:
        return self.component(g.source, g.target).image(g)

    @classmethod
    def identity(cls, quiver: GradedQuiver, field: Field) -> "QuiverMap":
        comps = {key: GradedMap.identity(quiver.space(*key), field) for key in quiver.homs}
        return cls(quiver, quiver, {x: x for x in quiver.objects}, 0, comps)


def tensor_quivers(A: GradedQuiver, B: GradedQuiver) -> GradedQuiver:
    """
    Tensor product over a common object set

    (A⊗B)(X,Z) is the sum over Y of A(X,Y)⊗B(Y,Z); a basis element
    records the intermediate object and both factors.
    """
    if A.objects != B.objects:
        raise InputError("tensor product needs quivers over the same objects")
    homs: Dict[Tuple[str, str], List[Gen]] = {}
    for x in A.objects:
        for z in A.objects:
            gens = []
            for y in A.objects:
                for a in A.hom(x, y):
                    for b in B.hom(y, z):
                        gens.append(Gen(f"{a.name}|{y}|{b.name}", x, z, a.degree + b.degree))
            if gens:
                homs[(x, z)] = gens
    return GradedQuiver(A.objects, {k: tuple(v) for k, v in homs.items()})


def discrete_quiver(objects: Iterable[str]) -> GradedQuiver:
    """kS: the ground field in degree 0 on the diagonal, zero elsewhere"""
    objects = tuple(objects)
    return GradedQuiver(objects, {(x, x): (Gen(f"1_{x}", x, x, 0),) for x in objects})


def suspend(A: GradedQuiver, k: int = 1) -> GradedQuiver:
    """Shift: degree n of the result is degree n + k of A"""
    if k == 0:
        return A
    homs = {key: tuple(Gen(g.name, g.source, g.target, g.degree - k, g.kind) for g in gens)
            for key, gens in A.homs.items()}
    return GradedQuiver(A.objects, homs)
