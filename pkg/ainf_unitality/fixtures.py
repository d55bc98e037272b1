"""
Seeded example categories

DG categories are built as full (or upper-triangular) subcategories of
complexes of graded vector spaces V_X with degrees in {0, 1}, so every
axiom holds by construction. Twists transport such a category along a
non-strict invertible family, which keeps it unital but breaks strict
unitality.
"""

import logging
import random
from typing import Dict, List, Optional, Tuple

from .ainfty import AInfCategory, DGCategory, UnitData, dg_import, identity_functor, transport_structure
from .category_file import CategoryFile
from .constructions import DGModel
from .double_coderivation import DoubleCoderivation, double_pairs
from .errors import InputError, PreconditionError
from .exact_linalg import Field, Vector, add_scaled, add_term
from .tensor_coalgebra import MORPHISM, ComponentFamily
from .unitality import envelope_su, is_strictly_unital

logger = logging.getLogger(__name__)

FIXTURE_KINDS = ("dg-random", "twist", "envelope", "ground", "arrow")

_COEFFICIENTS = (-1, 0, 1, 2)

TWIST_ATTEMPTS = 16


def end_dg_category(field_: Field, spaces: Dict[str, List[int]],
                    deltas: Optional[Dict[str, Dict[Tuple[int, int], int]]] = None,
                    upper: bool = False) -> DGCategory:
    """
    DG category of maps between the complexes (V_X, δ_X)

    spaces[X] lists the degrees of a basis of V_X; deltas[X][(i, j)] is the
    coefficient of v_j in v_i·δ_X. The basis element E_ij of Hom(V_X, V_Y)
    sends v_i to v_j and has degree deg(v_j) - deg(v_i).
    """
    deltas = deltas or {}
    objects = tuple(spaces)
    order = {x: k for k, x in enumerate(objects)}
    one = field_.one

    def name(x, i, y, j):
        return f"{x}.{i}>{y}.{j}"

    basis: Dict[Tuple[str, str], List[Tuple[str, int]]] = {}
    for x in objects:
        for y in objects:
            if upper and order[x] > order[y]:
                continue
            basis[(x, y)] = [(name(x, i, y, j), dy - dx)
                             for i, dx in enumerate(spaces[x]) for j, dy in enumerate(spaces[y])]

    differential: Dict[str, Vector] = {}
    composition: Dict[Tuple[str, str], Vector] = {}
    for (x, y) in basis:
        dx_map, dy_map = deltas.get(x, {}), deltas.get(y, {})
        for i, dx in enumerate(spaces[x]):
            for j, dy in enumerate(spaces[y]):
                a_deg = dy - dx
                value: Vector = {}
                for (k, i2), c in dx_map.items():
                    if i2 == i:
                        add_term(value, name(x, k, y, j), field_(c))
                for (j2, l), c in dy_map.items():
                    if j2 == j:
                        add_term(value, name(x, i, y, l), -field_(c) if a_deg % 2 == 0 else field_(c))
                if value:
                    differential[name(x, i, y, j)] = value
        for z in objects:
            if (y, z) not in basis:
                continue
            for i in range(len(spaces[x])):
                for j in range(len(spaces[y])):
                    for l in range(len(spaces[z])):
                        composition[(name(x, i, y, j), name(y, j, z, l))] = {name(x, i, z, l): one}
    units = {x: {name(x, i, x, i): one for i in range(len(spaces[x]))} for x in objects}
    return DGCategory(field_, objects, basis, differential, composition, units)


def random_spaces(rng: random.Random, max_objects: int = 3) -> Tuple[Dict[str, List[int]], Dict]:
    spaces, deltas = {}, {}
    for k in range(rng.randint(1, max_objects)):
        x = f"X{k}"
        spaces[x] = [rng.choice((0, 1)) for _ in range(rng.randint(1, 2))]
        delta = {}
        for i, di in enumerate(spaces[x]):
            for j, dj in enumerate(spaces[x]):
                if di == 0 and dj == 1:
                    c = rng.choice(_COEFFICIENTS)
                    if c:
                        delta[(i, j)] = c
        deltas[x] = delta
    return spaces, deltas


def dg_random(seed: int, field_: Field, truncation: int, max_objects: int = 3,
              mixed: bool = False) -> Tuple[AInfCategory, UnitData]:
    """
    Seeded End-complex category; with mixed, V_X0 = k ⊕ k[-1] without
    differential so a twist has room to move the units
    """
    rng = random.Random(seed)
    spaces, deltas = random_spaces(rng, max_objects)
    if mixed:
        spaces["X0"], deltas["X0"] = [0, 1], {}
    upper = rng.random() < 0.5
    dg = end_dg_category(field_, spaces, deltas, upper)
    return dg_import(dg, truncation, name=f"dg{seed}")


def ground_field(field_: Field, truncation: int) -> Tuple[AInfCategory, UnitData]:
    """One object, D(X,X) = k in degree 0"""
    return dg_import(end_dg_category(field_, {"X": [0]}), truncation, name="k")


def arrow_category(field_: Field, truncation: int) -> Tuple[AInfCategory, UnitData]:
    """Two objects and one arrow X -> Y, all in degree 0"""
    return dg_import(end_dg_category(field_, {"X": [0], "Y": [0]}, upper=True), truncation, name="arrow")


def random_twist(A: AInfCategory, rng: random.Random) -> ComponentFamily:
    """g1 = id + strictly upper-triangular part per degree, random g2, nothing above"""
    field_ = A.field
    g = ComponentFamily(MORPHISM, 0, A.truncation)
    for gens in A.quiver.homs.values():
        for p, a in enumerate(gens):
            image = {a: field_.one}
            for b in gens[p + 1:]:
                if b.degree == a.degree:
                    c = rng.choice(_COEFFICIENTS)
                    if c:
                        add_term(image, b, field_(c))
            g.set((a,), image)
    if A.truncation >= 2:
        for w in A.quiver.words(2):
            targets = [t for t in A.quiver.hom(w.start, w.end) if t.degree == w.degree]
            image: Vector = {}
            for t in targets:
                c = rng.choice(_COEFFICIENTS)
                if c:
                    add_term(image, t, field_(c))
            if image:
                g.set(w.gens, image)
    return g


def _twist_once(A: AInfCategory, data: UnitData,
                rng: random.Random) -> Tuple[AInfCategory, Dict[str, Vector], DGModel]:
    g = random_twist(A, rng)
    A_prime, G = transport_structure(A, g, name=f"{A.name}~")
    units: Dict[str, Vector] = {}
    v: Dict[str, Vector] = {}
    for x in A.objects:
        inverse = G.f1(x, x).inverse(A.field)
        unit = inverse.apply(data.units.get(x, {}))
        w: Vector = {}
        for gen in A.quiver.hom(x, x):
            if gen.degree == -2:
                c = rng.choice(_COEFFICIENTS)
                if c:
                    add_term(w, gen, A.field(c))
        for gen, c in w.items():
            add_scaled(unit, A_prime.b.component((gen,)), c)
        units[x] = unit
        v[x] = G.f1(x, x).apply(w)
    return A_prime, units, DGModel(A, dict(data.units), G, v)


def twist(A: AInfCategory, data: UnitData, seed: int) -> Tuple[AInfCategory, Dict[str, Vector], DGModel]:
    """
    Transport A along a random twist g; returns A', its units and the DG
    model (A, g, v)

    Units i0' = i0·g1^{-1} + w·b'1 for a random w, so v = w·g1. Draws are
    repeated until A' is not strictly unital for these units.

    Raises:
        PreconditionError: every draw left A' strictly unital
    """
    rng = random.Random(seed)
    for attempt in range(1, TWIST_ATTEMPTS + 1):
        A_prime, units, model = _twist_once(A, data, rng)
        if not is_strictly_unital(A_prime, units):
            logger.info(f"twisted {A.name} with seed {seed} (attempt {attempt})")
            return A_prime, units, model
        logger.debug(f"twist attempt {attempt} of {A.name} stayed strictly unital")
    raise PreconditionError(f"twist of {A.name}: strictly unital after {TWIST_ATTEMPTS} draws")


def random_double_coderivation(A: AInfCategory, degree: int, seed: int,
                               total: Optional[int] = None) -> DoubleCoderivation:
    """Double (1,1)-coderivation with random components up to the given total length"""
    rng = random.Random(seed)
    ident = identity_functor(A)
    total = A.truncation - 1 if total is None else total
    r = DoubleCoderivation(ident, ident, degree, name=f"r{seed}", limit=total)
    for u, w in double_pairs(A.quiver, total):
        image: Vector = {}
        for t in A.quiver.hom(u.start, w.end):
            if t.degree == u.degree + w.degree + degree:
                c = rng.choice(_COEFFICIENTS)
                if c:
                    add_term(image, t, A.field(c))
        if image:
            r.set(u, w, image)
    return r


def emit_fixture(kind: str, seed: int, field_: Field, truncation: int) -> CategoryFile:
    """
    Build a fixture as a category file

    Raises:
        InputError: unknown kind
    """
    if kind not in FIXTURE_KINDS:
        raise InputError(f"unknown fixture kind {kind!r}; expected one of {', '.join(FIXTURE_KINDS)}")
    if kind == "ground":
        A, data = ground_field(field_, truncation)
    elif kind == "arrow":
        A, data = arrow_category(field_, truncation)
    else:
        A, data = dg_random(seed, field_, truncation, mixed=kind == "twist")
    if kind == "twist":
        A_prime, units, model = twist(A, data, seed)
        return CategoryFile(A_prime, units, dg_model=model)
    if kind == "envelope":
        env = envelope_su(A)
        return CategoryFile(env.category, env.unit_vectors())
    trivial = DGModel(A, dict(data.units), identity_functor(A), {x: {} for x in A.objects})
    return CategoryFile(A, dict(data.units), dg_model=trivial)
