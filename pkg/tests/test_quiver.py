"""
Test suite for graded quivers
"""

import pytest
import sys
import os

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from ainf_unitality.errors import InputError
from ainf_unitality.exact_linalg import Field, GradedMap
from ainf_unitality.quiver import (Gen, GradedQuiver, QuiverMap, discrete_quiver, suspend,
                                   tensor_quivers)

Q = Field(0)

A = Gen("a", "X", "Y", 0)
B = Gen("b", "Y", "Y", -1)
C = Gen("c", "X", "X", 1)


def small_quiver():
    return GradedQuiver(("X", "Y"), {("X", "Y"): (A,), ("Y", "Y"): (B,), ("X", "X"): (C,)})


class TestGradedQuiver:
    """Construction and enumeration"""

    def test_duplicate_objects(self):
        """Test duplicate object labels are rejected"""
        with pytest.raises(InputError, match="duplicate object"):
            GradedQuiver(("X", "X"))

    def test_duplicate_names(self):
        """Test basis names must be unique"""
        with pytest.raises(InputError, match="duplicate basis name"):
            GradedQuiver(("X", "Y"), {("X", "Y"): (A,), ("Y", "Y"): (Gen("a", "Y", "Y", 0),)})

    def test_wrong_hom(self):
        """Test generators filed under the wrong pair are rejected"""
        with pytest.raises(InputError, match="wrong hom"):
            GradedQuiver(("X", "Y"), {("Y", "X"): (A,)})

    def test_unknown_object(self):
        """Test homs must refer to known objects"""
        with pytest.raises(InputError, match="unknown object"):
            GradedQuiver(("X",), {("X", "Z"): (Gen("z", "X", "Z", 0),)})

    def test_empty_homs_dropped(self):
        """Test empty hom entries are not stored"""
        q = GradedQuiver(("X",), {("X", "X"): ()})
        assert q.homs == {}
        assert q.gens() == []

    def test_lookup(self):
        """Test generator lookup by name"""
        q = small_quiver()
        assert q.gen("b") == B
        with pytest.raises(InputError, match="unknown basis element"):
            q.gen("zzz")

    def test_words(self):
        """Test word enumeration follows composability"""
        q = small_quiver()
        assert len(q.words(0)) == 2
        assert len(q.words(1)) == 3
        assert sorted(w.names() for w in q.words(2)) == [["a", "b"], ["b", "b"], ["c", "a"], ["c", "c"]]
        assert all(w.start == "Y" for w in q.words(3, start="Y"))

    def test_dims(self):
        """Test hom dimensions per degree"""
        q = small_quiver().with_gens([Gen("b2", "Y", "Y", -1)])
        assert q.dims("Y", "Y") == {-1: 2}
        assert q.dims("Y", "X") == {}


class TestConstructions:
    """Tensor products, discrete quivers and shifts"""

    def test_tensor(self):
        """Test (A⊗A)(X,Y) sums over the middle object"""
        q = tensor_quivers(small_quiver(), small_quiver())
        assert sorted((g.name, g.degree) for g in q.hom("X", "Y")) == [("a|Y|b", -1), ("c|X|a", 1)]

    def test_tensor_needs_same_objects(self):
        """Test tensor products over different object sets are rejected"""
        with pytest.raises(InputError):
            tensor_quivers(small_quiver(), discrete_quiver(["X"]))

    def test_discrete(self):
        """Test kS is one-dimensional on the diagonal"""
        q = discrete_quiver(["X", "Y"])
        assert q.dims("X", "X") == {0: 1}
        assert q.hom("X", "Y") == ()

    def test_suspend(self):
        """Test suspension lowers degrees and keeps names"""
        q = suspend(small_quiver())
        assert q.gen("a").degree == -1
        assert q.gen("c").degree == 0
        assert suspend(small_quiver(), 0) == small_quiver()


class TestQuiverMap:
    """Maps of graded quivers"""

    def test_identity(self):
        """Test the identity map sends every generator to itself"""
        q = small_quiver()
        ident = QuiverMap.identity(q, Q)
        assert ident(A) == {A: Q.one}

    def test_missing_component_is_zero(self):
        """Test absent components evaluate to zero"""
        q = small_quiver()
        m = QuiverMap(q, q, {"X": "X", "Y": "Y"}, -1)
        assert m(C) == {}
        assert m.component("X", "X").degree == -1

    def test_degree_mismatch(self):
        """Test a component of the wrong degree is rejected"""
        q = small_quiver()
        with pytest.raises(InputError, match="expected"):
            QuiverMap(q, q, {"X": "X", "Y": "Y"}, 1,
                      {("X", "X"): GradedMap.identity(q.space("X", "X"), Q)})


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
