"""
Test suite for the passages between weak units, homotopy unital
structures and units
"""

import pytest
import sys
import os

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from conftest import trivial_model
from ainf_unitality.ainfty import AInfFunctor, check_functor, identity_functor
from ainf_unitality.constructions import (DGModel, h_from_weak_unit, solve_h, units_from_homotopy_unital,
                                          units_from_weak_unit, validate_dg_model, weak_unit_from_h,
                                          weak_unit_from_unital, weak_unit_reports)
from ainf_unitality.errors import PreconditionError
from ainf_unitality.exact_linalg import Field, difference, scaled
from ainf_unitality.fixtures import emit_fixture
from ainf_unitality.homotopy_unital import canonical_hu
from ainf_unitality.tensor_coalgebra import MORPHISM, ComponentFamily, empty_word
from ainf_unitality.unitality import su_projection, units_cohomologous

Q = Field(0)


def all_passed(reports):
    failed = [r.name for r in reports if not r.passed]
    assert not failed, failed


class TestDGModel:
    """validate_dg_model"""

    def test_trivial_model(self, matrix_category):
        """Test a DG category is its own model"""
        A, data = matrix_category
        all_passed(validate_dg_model(trivial_model(A, data.units), data.units))

    def test_twisted_model(self, twisted):
        """Test the twisted category is modelled by the matrices"""
        _, units, model = twisted
        all_passed(validate_dg_model(model, units))

    def test_higher_products_rejected(self, twisted):
        """Test a model with b3 != 0 is refused"""
        A_prime, units, _ = twisted
        reports = validate_dg_model(DGModel(A_prime, units, identity_functor(A_prime), {"X": {}}), units)
        assert not reports[0].passed
        assert reports[-1].witness.equation == "higher-vanish"

    def test_wrong_unit_witness(self, matrix_category):
        """Test i0^C f1 = i0^D + v·b1 is checked"""
        A, data = matrix_category
        e00 = A.quiver.gen("X.0>X.0")
        reports = validate_dg_model(trivial_model(A, data.units), {"X": {e00: Q.one}})
        assert reports[-1].witness.equation == "unit-witness"


class TestWeakUnits:
    """Weak units and their units"""

    def test_units_of_projection(self, matrix_category):
        """Test π gives back i0 with homotopies satisfying the displays"""
        A, data = matrix_category
        env, pi = su_projection(A, data.units)
        extracted, reports = units_from_weak_unit(pi, env)
        all_passed(reports)
        assert extracted.units == data.units

    def test_not_a_weak_unit(self, matrix_category):
        """Test the zero functor is refused"""
        A, data = matrix_category
        env, _ = su_projection(A, data.units)
        zero = AInfFunctor(env.category, A, {"X": "X"}, ComponentFamily(MORPHISM, 0, A.truncation))
        with pytest.raises(PreconditionError, match="not a weak unit"):
            units_from_weak_unit(zero, env)

    def test_h_round_trip(self, matrix_category):
        """Test h from π solves hB1 = ν and rebuilds a weak unit"""
        A, data = matrix_category
        env, pi = su_projection(A, data.units)
        h = h_from_weak_unit(pi, env)
        assert h.component(empty_word("X"), empty_word("X")) == data.units["X"]
        U, env2 = weak_unit_from_h(A, h, env)
        assert env2 is env
        all_passed(weak_unit_reports(U, env))

    def test_scaled_base_not_identity(self, ground):
        """Test U with i -> 2i on A breaks e·U = id at i"""
        A, data = ground
        env, pi = su_projection(A, data.units)
        (i,) = A.quiver.gens()

        def rule(gens):
            return scaled(pi.f.component(gens), 2) if gens == (i,) else pi.f.component(gens)

        U = AInfFunctor(env.category, A, dict(pi.object_map), ComponentFamily(MORPHISM, 0, A.truncation, rule=rule))
        reports = {r.name: r for r in weak_unit_reports(U, env)}
        failed = reports["eU-identity"]
        assert not failed.passed
        assert failed.witness.equation == "equal"
        assert failed.witness.arity == 1
        assert failed.witness.path == ["X", "X"]
        assert failed.witness.word == [i.name]


class TestHomotopyUnitalUnits:
    """units_from_homotopy_unital"""

    def test_canonical(self, matrix_category):
        """Test the canonical structure gives i0 = 1su - j·b+1"""
        A, data = matrix_category
        extracted, reports = units_from_homotopy_unital(canonical_hu(A, data.units))
        all_passed(reports)
        assert extracted.units == data.units


class TestSolveH:
    """hB1 = ν from a DG model"""

    def test_trivial_model(self, matrix_category):
        """Test h on a DG category with itself as model"""
        A, data = matrix_category
        h, k, reports = solve_h(A, data.units, trivial_model(A, data.units))
        all_passed(reports)
        assert h.component(empty_word("X"), empty_word("X")) == data.units["X"]
        assert k.degree == -2

    def test_invalid_model(self, twisted):
        """Test solve_h refuses a model with higher products"""
        A_prime, units, _ = twisted
        with pytest.raises(PreconditionError, match="invalid DG model"):
            solve_h(A_prime, units, DGModel(A_prime, units, identity_functor(A_prime), {"X": {}}))

    def test_ground_weak_unit(self, ground):
        """Test k has a weak unit preserving its unit"""
        A, data = ground
        U, env, reports = weak_unit_from_unital(A, data.units, trivial_model(A, data.units))
        all_passed(reports)
        assert U.source is env.category

    def test_twisted_weak_unit(self, twisted):
        """Test a unital category that is not strictly unital gets a weak unit"""
        A_prime, units, model = twisted
        U, env, reports = weak_unit_from_unital(A_prime, units, model)
        all_passed(reports)
        extracted, _ = units_from_weak_unit(U, env)
        assert units_cohomologous(A_prime, extracted.units, units)

    @pytest.mark.parametrize("seed", range(1, 6))
    def test_random_twist_weak_units(self, seed):
        """Test seeded twists get weak units that give back their units exactly"""
        cf = emit_fixture("twist", seed, Q, 3)
        U, env, reports = weak_unit_from_unital(cf.category, cf.units, cf.dg_model)
        all_passed(reports)
        assert check_functor(U).passed
        extracted, _ = units_from_weak_unit(U, env)
        for x in cf.category.objects:
            assert difference(extracted.units[x], cf.units[x]) == {}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
