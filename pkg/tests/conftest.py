"""
Shared fixtures: small DG categories, a deterministic twist and their
DG models
"""

import pytest
import sys
import os

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from ainf_unitality.ainfty import dg_import, identity_functor, transport_structure
from ainf_unitality.constructions import DGModel
from ainf_unitality.exact_linalg import Field
from ainf_unitality.fixtures import arrow_category, end_dg_category, ground_field
from ainf_unitality.tensor_coalgebra import MORPHISM, ComponentFamily

Q = Field(0)


def matrices(truncation=3):
    """End(k ⊕ k[-1]) with zero differential: graded 2x2 matrices"""
    return dg_import(end_dg_category(Q, {"X": [0, 1]}), truncation, name="M")


def twisted_matrices(truncation=3):
    """
    Matrices transported along g1 = id, g2(e00⊗e00) = e10

    b'3 picks up e00-terms, so e00 + e11 stays a unit but stops being strict.
    """
    A, data = matrices(truncation)
    q = A.quiver
    g = ComponentFamily(MORPHISM, 0, truncation)
    for gen in q.gens():
        g.set((gen,), {gen: Q.one})
    e00, e10 = q.gen("X.0>X.0"), q.gen("X.1>X.0")
    g.set((e00, e00), {e10: Q.one})
    A_prime, G = transport_structure(A, g, name="M~")
    model = DGModel(A, dict(data.units), G, {"X": {}})
    return A_prime, dict(data.units), model


def trivial_model(A, units):
    return DGModel(A, dict(units), identity_functor(A), {x: {} for x in A.objects})


@pytest.fixture
def field():
    return Q


@pytest.fixture
def ground():
    return ground_field(Q, 3)


@pytest.fixture
def arrow():
    return arrow_category(Q, 3)


@pytest.fixture
def matrix_category():
    return matrices()


@pytest.fixture
def twisted():
    return twisted_matrices()
