"""
Test suite for reading and writing category files
"""

import json
import pytest
import sys
import os

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from ainf_unitality.ainfty import check_ainfty
from ainf_unitality.category_file import emit_category, parse_category
from ainf_unitality.errors import MissingBlockError, ParseError
from ainf_unitality.exact_linalg import Field
from ainf_unitality.fixtures import emit_fixture

Q = Field(0)


def ground_document(**changes):
    """The ground field k in the sA convention"""
    doc = {
        "format": 1,
        "convention": "sA",
        "field": "rational",
        "truncation": 3,
        "objects": ["X"],
        "homs": [{"source": "X", "target": "X", "basis": [{"name": "i", "degree": -1}]}],
        "operations": [{"arity": 2, "path": ["X", "X", "X"], "input": ["i", "i"], "output": [["i", "1"]]}],
        "units": {"X": [["i", 1]]},
    }
    doc.update(changes)
    return json.dumps(doc)


class TestParse:
    """parse_category on valid input"""

    def test_ground(self):
        """Test the ground field parses and satisfies the equations"""
        cf = parse_category(ground_document())
        A = cf.category
        i = A.quiver.gen("i")
        assert cf.truncation == 3 and cf.field == Q
        assert A.b.component((i, i)) == {i: Q.one}
        assert cf.units == {"X": {i: Q.one}}
        assert check_ainfty(A).passed

    def test_truncation_override(self):
        """Test a lower N drops higher operations"""
        cf = parse_category(ground_document(), truncation=1)
        assert cf.truncation == 1
        i = cf.category.quiver.gen("i")
        assert cf.category.b.component((i, i)) == {}

    def test_prime_field(self):
        """Test coefficients are reduced mod p"""
        cf = parse_category(ground_document(field="prime:5", units={"X": [["i", 6]]}))
        i = cf.category.quiver.gen("i")
        assert cf.field.format(cf.units["X"][i]) == "1"


class TestParseErrors:
    """Every rejection carries a position"""

    def test_invalid_json(self):
        """Test malformed JSON reports line and column"""
        with pytest.raises(ParseError, match="invalid JSON") as info:
            parse_category("{\"format\": 1,")
        assert info.value.position.startswith("line 1")

    def test_division_by_zero(self):
        """Test 1/0 is rejected at its pointer"""
        ops = [{"input": ["i", "i"], "output": [["i", "1/0"]]}]
        with pytest.raises(ParseError) as info:
            parse_category(ground_document(operations=ops))
        assert info.value.position == "/operations/0/output/0/1"

    def test_undefined_mod_p(self):
        """Test 1/5 has no value in F_5"""
        with pytest.raises(ParseError, match="undefined") as info:
            parse_category(ground_document(field="prime:5", units={"X": [["i", "1/5"]]}))
        assert info.value.position == "/units/X/0/1"

    def test_unknown_basis(self):
        """Test unknown names are reported at the input"""
        ops = [{"input": ["i", "z"], "output": []}]
        with pytest.raises(ParseError, match="unknown basis element") as info:
            parse_category(ground_document(operations=ops))
        assert info.value.position == "/operations/0/input/1"

    def test_wrong_degree(self):
        """Test outputs must have degree sum |x| + 1"""
        homs = [{"source": "X", "target": "X",
                 "basis": [{"name": "i", "degree": -1}, {"name": "a", "degree": 0}]}]
        ops = [{"input": ["i", "i"], "output": [["a", 1]]}]
        with pytest.raises(ParseError, match="expected -1") as info:
            parse_category(ground_document(homs=homs, operations=ops))
        assert info.value.position == "/operations/0/output/0/0"

    def test_arity_mismatch(self):
        """Test a declared arity must match the inputs"""
        ops = [{"arity": 3, "input": ["i", "i"], "output": []}]
        with pytest.raises(ParseError, match="arity") as info:
            parse_category(ground_document(operations=ops))
        assert info.value.position == "/operations/0/arity"

    def test_convention(self):
        """Test only the sA convention is accepted"""
        with pytest.raises(ParseError) as info:
            parse_category(ground_document(convention="A"))
        assert info.value.position == "/convention"

    def test_duplicate_name(self):
        """Test basis names are unique"""
        homs = [{"source": "X", "target": "X", "basis": [{"name": "i", "degree": -1}, {"name": "i", "degree": 0}]}]
        with pytest.raises(ParseError, match="duplicate") as info:
            parse_category(ground_document(homs=homs))
        assert info.value.position == "/homs/0/basis/1/name"

    def test_unknown_object(self):
        """Test homs refer to declared objects"""
        homs = [{"source": "X", "target": "Y", "basis": []}]
        with pytest.raises(ParseError, match="unknown object") as info:
            parse_category(ground_document(homs=homs))
        assert info.value.position == "/homs/0/target"

    def test_missing_field(self):
        """Test the field is mandatory"""
        doc = json.loads(ground_document())
        del doc["field"]
        with pytest.raises(ParseError, match="missing field"):
            parse_category(json.dumps(doc))


class TestBlocks:
    """Optional blocks and round trips"""

    def test_missing_block(self):
        """Test commands name the block they need"""
        cf = parse_category(ground_document())
        with pytest.raises(MissingBlockError, match="command 'weak-unit' requires a 'dg_model' block") as info:
            cf.require("dg_model", "weak-unit")
        assert info.value.block == "dg_model"

    def test_empty_category(self):
        """Test a category with no objects is accepted"""
        doc = json.dumps({"format": 1, "convention": "sA", "field": "rational", "truncation": 2})
        cf = parse_category(doc)
        assert not cf.category.objects
        assert check_ainfty(cf.category).passed

    def test_functor_block(self):
        """Test a functor into self parses with its components"""
        doc = json.loads(ground_document())
        doc["functors"] = [{"name": "id", "components": [{"input": ["i"], "output": [["i", 1]]}]}]
        cf = parse_category(json.dumps(doc))
        F = cf.functors["id"]
        assert F.target is cf.category
        assert F.is_strict()

    def test_double_block(self):
        """Test the empty component needs its object"""
        doc = json.loads(ground_document())
        doc["double_coderivations"] = [{"name": "h", "degree": -1, "components": [
            {"object": "X", "left": [], "right": [], "output": [["i", 1]]}]}]
        cf = parse_category(json.dumps(doc))
        h = cf.double_coderivations["h"]
        assert h.tables
        doc["double_coderivations"][0]["components"][0].pop("object")
        with pytest.raises(ParseError, match="needs an object"):
            parse_category(json.dumps(doc))

    @pytest.mark.parametrize("kind", ["twist", "envelope", "arrow"])
    def test_round_trip(self, kind):
        """Test emit then parse rebuilds the structure"""
        cf = emit_fixture(kind, 2, Q, 3)
        again = parse_category(emit_category(cf))
        A, B = cf.category, again.category
        assert [g.name for g in A.quiver.gens()] == [g.name for g in B.quiver.gens()]
        for w in A.quiver.words(3):
            lhs = {g.name: c for g, c in A.b.component(w.gens).items()}
            rhs = {g.name: c for g, c in B.b.component(tuple(B.quiver.gen(g.name) for g in w.gens)).items()}
            assert lhs == rhs
        assert again.units.keys() == cf.units.keys()
        assert emit_category(again) == emit_category(cf)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
