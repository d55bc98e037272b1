"""
Tensor cocategory TsA
Words with object paths, the cut comultiplication, Koszul-signed evaluation
and the expansion of coderivations and morphisms from their components.

Sign rule: a map acting on a tensor product passes the blocks to its
right, so g1⊗...⊗gk on b1⊗...⊗bk carries (-1)^(sum_{i<j} |g_i||b_j|).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .errors import InputError
from .exact_linalg import GradedMap, GradedSpace, Vector, add_term, canonical, sign
from .quiver import Gen, GradedQuiver

logger = logging.getLogger(__name__)

CODERIVATION = "coderivation"
MORPHISM = "morphism"


@dataclass(frozen=True, order=True)
class Word:
    """Basis word of T^n sA: a start object and n composable generators"""

    start: str
    gens: Tuple[Gen, ...] = ()

    def __post_init__(self):
        obj = self.start
        for g in self.gens:
            if g.source != obj:
                raise InputError(f"word is not composable at {g.name}")
            obj = g.target

    @property
    def end(self) -> str:
        return self.gens[-1].target if self.gens else self.start

    @property
    def degree(self) -> int:
        return sum(g.degree for g in self.gens)

    @property
    def path(self) -> Tuple[str, ...]:
        return (self.start,) + tuple(g.target for g in self.gens)

    def __len__(self) -> int:
        return len(self.gens)

    def __add__(self, other: "Word") -> "Word":
        if self.end != other.start:
            raise InputError(f"cannot concatenate words ending at {self.end} and starting at {other.start}")
        return Word(self.start, self.gens + other.gens)

    def split(self, i: int) -> Tuple["Word", "Word"]:
        mid = self.path[i]
        return Word(self.start, self.gens[:i]), Word(mid, self.gens[i:])

    def names(self) -> List[str]:
        return [g.name for g in self.gens]

    def __repr__(self) -> str:
        if not self.gens:
            return f"[{self.start}]"
        return "⊗".join(self.names())


def empty_word(obj: str) -> Word:
    return Word(obj, ())


def word_of(*gens: Gen) -> Word:
    if not gens:
        raise InputError("use empty_word for the length-0 word")
    return Word(gens[0].source, tuple(gens))


def cut_comultiplication(w: Word, parts: int = 2, one: Any = 1) -> Dict[Tuple[Word, ...], Any]:
    """
    Iterated cut comultiplication

    Returns every ordered decomposition of w into `parts` possibly empty
    blocks with coefficient one; parts = 0 is the counit.
    """
    if parts < 0:
        raise InputError("number of parts must be non-negative")
    if parts == 0:
        return {(): one} if len(w) == 0 else {}
    if parts == 1:
        return {(w,): one}
    out = {}
    for i in range(len(w) + 1):
        head, tail = w.split(i)
        for rest in cut_comultiplication(tail, parts - 1, one):
            out[(head,) + rest] = one
    return out


@dataclass
class BlockMap:
    """A graded map on words used by koszul_eval"""

    degree: int
    apply: Callable[[Word], Vector]


def koszul_eval(maps: Sequence[BlockMap], blocks: Sequence[Word]) -> Dict[Tuple, Any]:
    """Evaluate g1⊗...⊗gk on b1⊗...⊗bk with the Koszul sign"""
    if len(maps) != len(blocks):
        raise InputError(f"{len(maps)} maps cannot act on {len(blocks)} blocks")
    exponent = 0
    for i, g in enumerate(maps):
        if g.degree % 2:
            exponent += sum(b.degree for b in blocks[i + 1:])
    result: Dict[Tuple, Any] = {(): sign(exponent)}
    for g, block in zip(maps, blocks):
        image = g.apply(block)
        nxt: Dict[Tuple, Any] = {}
        for key, c in result.items():
            for out, c2 in image.items():
                add_term(nxt, key + (out,), c2 * c)
        result = nxt
    return result


@dataclass
class ComponentFamily:
    """
    Components b_k (coderivation, degree 1) or f_k (morphism, degree 0)

    tables[k] maps a k-tuple of generators to its image vector. An
    optional rule is consulted first; returning None defers to the tables.
    """

    kind: str
    degree: int
    truncation: int
    tables: Dict[int, Dict[Tuple[Gen, ...], Vector]] = field(default_factory=dict)
    rule: Optional[Callable[[Tuple[Gen, ...]], Optional[Vector]]] = None

    def __post_init__(self):
        if self.kind not in (CODERIVATION, MORPHISM):
            raise InputError(f"unknown component family kind {self.kind!r}")
        expected = 1 if self.kind == CODERIVATION else 0
        if self.degree != expected:
            raise InputError(f"{self.kind} components must have degree {expected}")
        if self.truncation < 1:
            raise InputError("truncation must be at least 1")

    def component(self, gens: Tuple[Gen, ...]) -> Vector:
        n = len(gens)
        if n == 0 or n > self.truncation:
            return {}
        if self.rule is not None:
            value = self.rule(gens)
            if value is not None:
                return value
        return self.tables.get(n, {}).get(gens, {})

    def set(self, gens: Tuple[Gen, ...], image: Vector) -> None:
        table = self.tables.setdefault(len(gens), {})
        image = canonical(image)
        if image:
            table[gens] = image
        else:
            table.pop(gens, None)

    def materialize(self, quiver: GradedQuiver) -> "ComponentFamily":
        """Copy with every component evaluated into tables (no rule)"""
        tables: Dict[int, Dict[Tuple[Gen, ...], Vector]] = {}
        for n in range(1, self.truncation + 1):
            for w in quiver.words(n):
                image = self.component(w.gens)
                if image:
                    tables.setdefault(n, {})[w.gens] = canonical(image)
        return ComponentFamily(self.kind, self.degree, self.truncation, tables)


def _suffix_degrees(gens: Tuple[Gen, ...]) -> List[int]:
    suffix = [0] * (len(gens) + 1)
    for i in range(len(gens) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + gens[i].degree
    return suffix


def coderivation_image(F: ComponentFamily, word: Word) -> Vector:
    """Full coderivation on a word: sum of 1^p⊗b_k⊗1^q placements"""
    gens = word.gens
    m = len(gens)
    suffix = _suffix_degrees(gens)
    out: Vector = {}
    for p in range(m):
        for k in range(1, min(m - p, F.truncation) + 1):
            image = F.component(gens[p:p + k])
            if not image:
                continue
            odd = F.degree % 2 and suffix[p + k] % 2
            for g, c in image.items():
                new = Word(word.start, gens[:p] + (g,) + gens[p + k:])
                add_term(out, new, -c if odd else c)
    return out


def morphism_image(F: ComponentFamily, word: Word, object_map: Dict[str, str], one: Any = 1) -> Vector:
    """Full cocategory morphism on a word: sum over f_{i1}⊗...⊗f_{in}"""
    gens = word.gens
    m = len(gens)
    start = object_map[word.start]
    # tails[i]: images of gens[i:] as tuples of output generators
    tails: List[Dict[Tuple[Gen, ...], Any]] = [dict() for _ in range(m + 1)]
    tails[m] = {(): 1}
    for i in range(m - 1, -1, -1):
        acc: Dict[Tuple[Gen, ...], Any] = {}
        for k in range(1, min(m - i, F.truncation) + 1):
            image = F.component(gens[i:i + k])
            if not image:
                continue
            for g, c in image.items():
                for rest, c2 in tails[i + k].items():
                    add_term(acc, (g,) + rest, c * c2)
        tails[i] = acc
    out: Vector = {}
    for outs, c in tails[0].items():
        add_term(out, Word(start, outs), c)
    if m == 0:
        return {Word(start, ()): one}
    return out


def expand_coderivation(F: ComponentFamily, quiver: GradedQuiver, m: int, n: int) -> GradedMap:
    """Matrix coefficient b_{mn}: T^m sA -> T^n sA"""
    source = GradedSpace.of(quiver.words(m))
    target = GradedSpace.of(quiver.words(n))
    entries = {}
    for w in source:
        image = {v: c for v, c in coderivation_image(F, w).items() if len(v) == n}
        if image:
            entries[w] = image
    return GradedMap(source, target, F.degree, entries)


def expand_morphism(F: ComponentFamily, source_quiver: GradedQuiver, target_quiver: GradedQuiver,
                    object_map: Dict[str, str], m: int, n: int, one: Any = 1) -> GradedMap:
    """Matrix coefficient f_{mn}: T^m sA -> T^n sB"""
    source = GradedSpace.of(source_quiver.words(m))
    target = GradedSpace.of(target_quiver.words(n))
    entries = {}
    for w in source:
        image = {v: c for v, c in morphism_image(F, w, object_map, one).items() if len(v) == n}
        if image:
            entries[w] = image
    return GradedMap(source, target, F.degree, entries)
