"""
Test suite for the seeded example categories
"""

import pytest
import sys
import os

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from ainf_unitality.ainfty import check_ainfty, check_functor
from ainf_unitality.category_file import emit_category
from ainf_unitality.constructions import validate_dg_model
from ainf_unitality.errors import InputError, PreconditionError
from ainf_unitality.exact_linalg import Field
from ainf_unitality.fixtures import FIXTURE_KINDS, emit_fixture, end_dg_category, ground_field, twist
from ainf_unitality.unitality import is_strictly_unital, solve_unit_homotopies

Q = Field(0)


class TestFixtures:
    """emit_fixture"""

    @pytest.mark.parametrize("kind", FIXTURE_KINDS)
    def test_deterministic(self, kind):
        """Test one seed gives one file"""
        assert emit_category(emit_fixture(kind, 4, Q, 3)) == emit_category(emit_fixture(kind, 4, Q, 3))

    @pytest.mark.parametrize("kind", FIXTURE_KINDS)
    def test_kinds_are_unital(self, kind):
        """Test every fixture satisfies the equations and carries units"""
        cf = emit_fixture(kind, 4, Q, 3)
        assert check_ainfty(cf.category).passed
        assert cf.units is not None
        assert solve_unit_homotopies(cf.category, cf.units) is not None

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_twist_model(self, seed):
        """Test the twist ships a valid DG model"""
        cf = emit_fixture("twist", seed, Q, 3)
        for report in validate_dg_model(cf.dg_model, cf.units):
            assert report.passed, report.name
        assert check_functor(cf.dg_model.functor).passed

    @pytest.mark.parametrize("seed", range(1, 31))
    def test_twist_not_strict(self, seed):
        """Test twists are unital but never strictly unital"""
        cf = emit_fixture("twist", seed, Q, 3)
        assert not is_strictly_unital(cf.category, cf.units)
        assert solve_unit_homotopies(cf.category, cf.units) is not None

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_twist_not_strict_prime(self, seed):
        """Test twists over F_3 are not strictly unital"""
        cf = emit_fixture("twist", seed, Field(3), 3)
        assert not is_strictly_unital(cf.category, cf.units)

    def test_twist_of_strict_ground_fails(self):
        """Test a category with no room to twist is refused"""
        A, data = ground_field(Q, 3)
        with pytest.raises(PreconditionError, match="strictly unital after"):
            twist(A, data, 1)

    def test_envelope_is_strict(self):
        """Test the envelope fixture is strictly unital"""
        cf = emit_fixture("envelope", 5, Q, 3)
        assert is_strictly_unital(cf.category, cf.units)
        assert cf.dg_model is None

    def test_prime_field(self):
        """Test fixtures over F_3"""
        cf = emit_fixture("dg-random", 6, Field(3), 3)
        assert cf.field == Field(3)
        assert check_ainfty(cf.category).passed

    def test_unknown_kind(self):
        """Test unknown kinds are input errors"""
        with pytest.raises(InputError, match="unknown fixture kind"):
            emit_fixture("sphere", 1, Q, 3)


class TestEndCategory:
    """end_dg_category"""

    def test_basis(self):
        """Test E_ij has degree deg(v_j) - deg(v_i)"""
        dg = end_dg_category(Q, {"X": [0, 1], "Y": [0]}, upper=True)
        assert ("Y", "X") not in dg.basis
        assert dict(dg.basis[("X", "Y")]) == {"X.0>Y.0": 0, "X.1>Y.0": -1}
        assert dg.units["X"] == {"X.0>X.0": Q.one, "X.1>X.1": Q.one}

    def test_differential(self):
        """Test d(E_ij) = sum δ_X E_kj - (-1)^|a| sum δ_Y E_il"""
        dg = end_dg_category(Q, {"X": [0, 1]}, {"X": {(0, 1): 1}})
        assert dg.differential["X.1>X.0"] == {"X.0>X.0": Q.one, "X.1>X.1": Q.one}
        assert "X.0>X.1" not in dg.differential


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
