"""
Test suite for exact linear algebra
"""

import pytest
import sys
import os

from hypothesis import given, settings, strategies as st
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from ainf_unitality.errors import InputError, NotACycleError, PreconditionError, UnsolvableError
from ainf_unitality.exact_linalg import (Complex, ConeProblem, Field, GradedMap, GradedSpace, add_term,
                                         cohomology, hom_differential, is_chain_map, is_quasi_iso,
                                         parse_field, solve_cone, solve_homotopy, solve_linear,
                                         solve_preimage)

Q = Field(0)


def acyclic(prefix="", field_=Q):
    """k -> k by the identity in degrees 0 and 1"""
    a, b = f"{prefix}a", f"{prefix}b"
    space = GradedSpace((a, b), (0, 1))
    return Complex(space, GradedMap(space, space, 1, {a: {b: field_.one}}), field_)


def point(label="n", degree=0, field_=Q):
    space = GradedSpace((label,), (degree,))
    return Complex(space, GradedMap.zero(space, space, 1), field_)


class TestField:
    """Exact coefficient parsing"""

    def test_rational_fraction(self):
        """Test "a/b" strings parse exactly"""
        assert Q("3/6") == QQ(1, 2)
        assert Q.format(Q("-4/6")) == "-2/3"

    def test_division_by_zero(self):
        """Test "1/0" is an input error"""
        with pytest.raises(InputError, match="invalid coefficient"):
            Q("1/0")

    def test_booleans_rejected(self):
        """Test booleans are not coefficients"""
        with pytest.raises(InputError):
            Q(True)

    def test_prime_field_format(self):
        """Test residues print in [0, p)"""
        F7 = parse_field("prime:7")
        assert F7.format(F7(-1)) == "6"
        assert F7.format(F7("1/2")) == "4"

    def test_denominator_divisible_by_p(self):
        """Test fractions with p in the denominator are rejected"""
        with pytest.raises(InputError, match="undefined"):
            parse_field("prime:5")("1/5")

    def test_non_prime(self):
        """Test non-prime characteristics are rejected"""
        with pytest.raises(InputError, match="not prime"):
            parse_field("prime:4")
        with pytest.raises(InputError):
            parse_field("complex")

    def test_equality(self):
        """Test fields compare by characteristic"""
        assert parse_field("rational") == Q
        assert parse_field("prime:3") != Q


class TestGradedMap:
    """Graded maps acting on the right"""

    def test_wrong_degree_rejected(self):
        """Test an image term of the wrong degree is an input error"""
        space = GradedSpace(("a", "b"), (0, 1))
        with pytest.raises(InputError, match="expected"):
            GradedMap(space, space, 0, {"a": {"b": Q.one}})

    def test_then_is_diagrammatic(self):
        """Test x(fg) = (xf)g"""
        space = GradedSpace(("a", "b", "c"), (0, 0, 0))
        f = GradedMap(space, space, 0, {"a": {"b": Q.one}})
        g = GradedMap(space, space, 0, {"b": {"c": Q(2)}})
        assert f.then(g).image("a") == {"c": Q(2)}
        assert g.then(f).is_zero()

    def test_inverse(self):
        """Test inversion of a unitriangular map"""
        space = GradedSpace(("a", "b"), (0, 0))
        f = GradedMap(space, space, 0, {"a": {"a": Q.one, "b": Q(3)}, "b": {"b": Q.one}})
        inv = f.inverse(Q)
        assert f.then(inv) == GradedMap.identity(space, Q)
        assert inv.then(f) == GradedMap.identity(space, Q)

    def test_singular_inverse(self):
        """Test singular maps raise PreconditionError"""
        space = GradedSpace(("a", "b"), (0, 0))
        f = GradedMap(space, space, 0, {"a": {"b": Q.one}, "b": {"b": Q.one}})
        with pytest.raises(PreconditionError, match="not invertible"):
            f.inverse(Q)

    def test_add_requires_equal_degree(self):
        """Test maps of different degrees cannot be added"""
        C = acyclic()
        with pytest.raises(InputError):
            C.d + GradedMap.identity(C.space, Q)


class TestSolvers:
    """solve_linear, solve_preimage and solve_homotopy"""

    def test_solve_linear_consistent(self):
        """Test a consistent system with a free variable"""
        A = DomainMatrix([[QQ(1), QQ(1)], [QQ(2), QQ(2)]], (2, 2), QQ)
        assert solve_linear(A, [3, 6]) == [QQ(3), QQ(0)]

    def test_solve_linear_inconsistent(self):
        """Test an inconsistent system returns None"""
        A = DomainMatrix([[QQ(1), QQ(1)], [QQ(2), QQ(2)]], (2, 2), QQ)
        assert solve_linear(A, [1, 1]) is None

    def test_solve_linear_length_mismatch(self):
        """Test a right-hand side of the wrong length"""
        A = DomainMatrix([[QQ(1)]], (1, 1), QQ)
        with pytest.raises(InputError):
            solve_linear(A, [1, 2])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4),
           st.lists(st.integers(-3, 3), min_size=3, max_size=3))
    def test_solve_linear_back_substitution(self, rows, x0):
        """Test solutions of A·x = A·x0 satisfy the system"""
        A = DomainMatrix([[QQ(c) for c in r] for r in rows], (len(rows), 3), QQ)
        b = [sum(QQ(c) * QQ(x) for c, x in zip(r, x0)) for r in rows]
        x = solve_linear(A, b)
        assert x is not None
        for r, target in zip(rows, b):
            assert sum(QQ(c) * xi for c, xi in zip(r, x)) == target

    def test_solve_preimage(self):
        """Test preimages under the differential"""
        C = acyclic()
        assert solve_preimage(C.d, {"b": Q(5)}, Q) == {"a": Q(5)}
        assert solve_preimage(C.d, {}, Q) == {}

    def test_solve_preimage_missing(self):
        """Test a vector outside the image returns None"""
        C = point("n", 1)
        assert solve_preimage(C.d, {"n": Q.one}, Q) is None

    def test_solve_homotopy_contracts_acyclic(self):
        """Test the identity of an acyclic complex is null-homotopic"""
        C = acyclic()
        h = solve_homotopy(C, C, GradedMap.identity(C.space, Q))
        assert h is not None
        assert h.then(C.d) + C.d.then(h) == GradedMap.identity(C.space, Q)

    def test_solve_homotopy_impossible(self):
        """Test the identity of k is not null-homotopic"""
        C = point()
        assert solve_homotopy(C, C, GradedMap.identity(C.space, Q)) is None


class TestCohomology:
    """Cohomology and quasi-isomorphisms"""

    def test_acyclic(self):
        """Test k -> k has no cohomology"""
        assert cohomology(acyclic()).dims == {}

    def test_point(self):
        """Test a one-dimensional complex in degree 2"""
        H = cohomology(point("n", 2))
        assert H.dims == {2: 1}
        assert H.representatives[2] == [{"n": Q.one}]

    def test_not_a_complex(self):
        """Test d^2 != 0 is rejected"""
        space = GradedSpace(("a", "b", "c"), (0, 1, 2))
        d = GradedMap(space, space, 1, {"a": {"b": Q.one}, "b": {"c": Q.one}})
        with pytest.raises(InputError, match="not a complex"):
            cohomology(Complex(space, d, Q))

    def test_zero_map_between_acyclic(self):
        """Test the zero map between acyclic complexes is a quasi-isomorphism"""
        S, T = acyclic("s"), acyclic("t")
        assert is_quasi_iso(GradedMap.zero(S.space, T.space, 0), S, T)

    def test_zero_map_on_point(self):
        """Test the zero map k -> k is not a quasi-isomorphism"""
        S, T = point("s"), point("t")
        assert not is_quasi_iso(GradedMap.zero(S.space, T.space, 0), S, T)

    def test_chain_map(self):
        """Test the identity is a chain map and a quasi-isomorphism"""
        C = acyclic()
        ident = GradedMap.identity(C.space, Q)
        assert is_chain_map(ident, C, C)
        assert is_quasi_iso(ident, C, C)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.booleans(), st.integers(-1, 1)), min_size=1, max_size=5),
           st.lists(st.integers(-2, 2), min_size=45, max_size=45))
    def test_euler_characteristic(self, pieces, noise):
        """Test sum (-1)^k dim H^k = sum (-1)^k dim C^k after a random change of basis"""
        labels, degrees, d, points = [], [], {}, {}
        for n, (paired, k) in enumerate(pieces):
            labels.append(f"a{n}")
            degrees.append(k)
            if paired:
                labels.append(f"b{n}")
                degrees.append(k + 1)
                d[f"a{n}"] = {f"b{n}": Q.one}
            else:
                points[k] = points.get(k, 0) + 1
        space = GradedSpace(tuple(labels), tuple(degrees))
        # unitriangular within each degree
        coeffs = iter(noise)
        g = GradedMap(space, space, 0, {
            s: {t: Q.one if t == s else Q(next(coeffs))
                for t in labels[i:] if space.degree_of(t) == space.degree_of(s)}
            for i, s in enumerate(labels)
        })
        C = Complex(space, g.inverse(Q).then(GradedMap(space, space, 1, d)).then(g), Q)
        H = cohomology(C)
        assert H.dims == points
        euler = sum(-n if k % 2 else n for k, n in space.dims.items())
        assert sum(-n if k % 2 else n for k, n in H.dims.items()) == euler


class TestSolveCone:
    """Boundary problems in the cone of post-composition"""

    def _problem(self, nu_coeff, e=1):
        N = point()
        S, T = acyclic("s"), acyclic("t")
        u = GradedMap(S.space, T.space, 0, {"sa": {"ta": Q.one}, "sb": {"tb": Q.one}})
        lam = GradedMap.zero(N.space, S.space, e + 1)
        nu = GradedMap(N.space, T.space, e, {"n": {"tb": Q(nu_coeff)}} if nu_coeff else {})
        return ConeProblem(N, S, T, u, lam, nu, x_degree=e)

    def test_solution_satisfies_equations(self):
        """Test the returned pair satisfies both cone equations"""
        problem = self._problem(3)
        x, y = solve_cone(problem)
        N, S, T = problem.domain, problem.source, problem.target
        assert -hom_differential(x, N, S) == problem.lam
        assert hom_differential(y, N, T) + x.then(problem.u) == problem.nu

    def test_zero_rhs_gives_zero(self):
        """Test free variables are set to zero"""
        x, y = solve_cone(self._problem(0))
        assert x.is_zero() and y.is_zero()

    def test_not_a_cycle(self):
        """Test a right-hand side with nonzero differential is rejected"""
        N = point()
        S, T = acyclic("s"), acyclic("t")
        u = GradedMap.zero(S.space, T.space, 0)
        lam = GradedMap(N.space, S.space, 0, {"n": {"sa": Q.one}})
        nu = GradedMap.zero(N.space, T.space, -1)
        with pytest.raises(NotACycleError, match="not a cycle"):
            solve_cone(ConeProblem(N, S, T, u, lam, nu, x_degree=-1))

    def test_unsolvable(self):
        """Test a cycle that is not a boundary"""
        N = point()
        S = Complex(GradedSpace((), ()), GradedMap.zero(GradedSpace((), ()), GradedSpace((), ()), 1), Q)
        T = point("t", 1)
        u = GradedMap.zero(S.space, T.space, 0)
        lam = GradedMap.zero(N.space, S.space, 2)
        nu = GradedMap(N.space, T.space, 1, {"n": {"t": Q.one}})
        with pytest.raises(UnsolvableError, match="cone unsolvable"):
            solve_cone(ConeProblem(N, S, T, u, lam, nu, x_degree=1))


class TestVectors:
    """Sparse vector helpers"""

    def test_add_term_cancels(self):
        """Test cancelled terms are removed"""
        acc = {"a": Q.one}
        add_term(acc, "a", -Q.one)
        assert acc == {}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
