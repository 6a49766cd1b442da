import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncgdesk.algebra import AlgebraElement, MultiMatrixAlgebra, Projection
from ncgdesk.cyclic import (
    DecompositionRep,
    TensorElement,
    cc_reduce,
    check_face_bound,
    check_trace_bound,
    cyclic_op,
    decomposition_norm,
    face_op,
    hc_class,
    hc_dims,
    hc_space,
    is_boundary,
    trace_map,
    trace_rep,
)
from ncgdesk.errors import DomainError

C = MultiMatrixAlgebra((1,))
A = MultiMatrixAlgebra((1, 1))
M2 = MultiMatrixAlgebra((2,))
seeds = st.integers(0, 10 ** 6)


def random_tensor(algebra, m, degree, rng, terms=4):
    units = [(j, a, b)
             for j, d in enumerate(algebra.ambient_dims(m))
             for a in range(d) for b in range(d)]
    out = TensorElement.zero(algebra, m, degree)
    for _ in range(terms):
        key = tuple(rng.choice(units) for _ in range(degree + 1))
        out = out + TensorElement.basis(algebra, m, key).scale(
            Fraction(rng.randint(-3, 3)))
    return out


class TestOperators:
    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(0, 3))
    def test_cyclic_has_full_period(self, seed, degree):
        xi = random_tensor(A, 1, degree, random.Random(seed))
        out = xi
        for _ in range(degree + 1):
            out = cyclic_op(out)
        assert out.equals(xi)

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(2, 3))
    def test_face_squares_to_zero(self, seed, degree):
        xi = random_tensor(M2, 1, degree, random.Random(seed))
        assert face_op(face_op(xi)).is_zero()

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(1, 3))
    def test_face_descends_to_cyclic_quotient(self, seed, degree):
        # b applied to (1 - tau)xi must die in CC coordinates
        xi = random_tensor(M2, 1, degree, random.Random(seed))
        image = face_op(xi - cyclic_op(xi))
        assert cc_reduce(image) == {}

    def test_face_rejects_degree_zero(self):
        xi = TensorElement.from_summand((AlgebraElement.identity(C),))
        with pytest.raises(DomainError):
            face_op(xi)

    def test_from_summand_expands_products(self):
        x = AlgebraElement.diagonal(A, [[Fraction(2)], [Fraction(3)]])
        xi = TensorElement.from_summand((x, x))
        assert len(xi.coeffs) == 4  # all cross terms of (2e0 + 3e1) x same
        assert xi.coeffs[((0, 0, 0), (0, 0, 0))] == Fraction(4)
        assert xi.coeffs[((0, 0, 0), (1, 0, 0))] == Fraction(6)
        assert xi.coeffs[((1, 0, 0), (1, 0, 0))] == Fraction(9)


class TestHomology:
    def test_dims_of_scalars(self):
        assert hc_dims(C, 4) == [1, 0, 1, 0, 1]

    def test_dims_of_two_by_two(self):
        assert hc_dims(M2, 2) == [1, 0, 1]

    def test_dims_of_direct_sum_add(self):
        assert hc_dims(A, 2) == [2, 0, 2]

    def test_class_of_identity_generates_degree_zero(self):
        xi = TensorElement.from_summand((AlgebraElement.identity(C),))
        cls = hc_class(xi)
        assert cls.degree == 0 and not cls.is_zero()
        assert (cls - cls).is_zero()

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.integers(0, 2))
    def test_boundaries_have_zero_class(self, seed, degree):
        eta = random_tensor(M2, 1, degree + 1, random.Random(seed))
        xi = face_op(eta)
        space = hc_space(M2, degree)
        assert space.is_cycle(xi)
        assert space.hc_class(xi).is_zero()

    @settings(max_examples=15, deadline=None)
    @given(seeds)
    def test_boundary_witness_reproduces_the_cycle(self, seed):
        eta = random_tensor(M2, 1, 2, random.Random(seed))
        xi = face_op(eta)
        witness = is_boundary(xi)
        assert witness is not None
        assert cc_reduce(face_op(witness)) == cc_reduce(xi)

    def test_non_cycle_rejected(self):
        # e00 x e01 has boundary e01, which survives in degree 0
        xi = TensorElement.basis(M2, 1, ((0, 0, 0), (0, 0, 1)))
        space = hc_space(M2, 1)
        assert not space.is_cycle(xi)
        with pytest.raises(DomainError):
            space.hc_class(xi)


class TestTraceMap:
    def test_identity_at_no_amplification(self):
        xi = random_tensor(A, 1, 2, random.Random(4))
        assert trace_map(xi).equals(xi)

    @settings(max_examples=25, deadline=None)
    @given(seeds, st.integers(1, 2))
    def test_chain_map_property(self, seed, degree):
        xi = random_tensor(C, 2, degree, random.Random(seed))
        assert trace_map(face_op(xi)).equals(face_op(trace_map(xi)))

    @settings(max_examples=25, deadline=None)
    @given(seeds, st.integers(0, 2))
    def test_commutes_with_cyclic(self, seed, degree):
        xi = random_tensor(C, 2, degree, random.Random(seed))
        assert trace_map(cyclic_op(xi)).equals(cyclic_op(trace_map(xi)))

    def test_amplified_homology_matches_base(self):
        # HC_n(M_m(A)) has the dimensions of HC_n(A)
        assert hc_dims(C, 2, amplification=2) == hc_dims(C, 2)


def random_rep(rng, algebra=C, m=2, degree=1, summands=2):
    out = []
    for _ in range(summands):
        out.append(tuple(
            AlgebraElement(algebra, m, tuple(
                tuple(tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                            for _ in range(d)) for _ in range(d))
                for d in algebra.ambient_dims(m)))
            for _ in range(degree + 1)))
    return DecompositionRep(tuple(out))


class TestNormBounds:
    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_face_bound(self, seed):
        rep = random_rep(random.Random(seed))
        for i in range(rep.degree + 1):
            assert check_face_bound(rep, i)

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_trace_bound(self, seed):
        rep = random_rep(random.Random(seed))
        assert check_trace_bound(rep)

    def test_trace_rep_expands_to_traced_tensor(self):
        rep = random_rep(random.Random(1))
        lhs = trace_rep(rep).expand()
        rhs = trace_map(rep.expand())
        assert lhs.equals(rhs, 1e-9)

    def test_norm_is_subadditive_over_summands(self):
        rng = random.Random(2)
        rep = random_rep(rng, summands=2)
        one = DecompositionRep(rep.summands[:1])
        two = DecompositionRep(rep.summands[1:])
        assert decomposition_norm(rep) \
            <= decomposition_norm(one) + decomposition_norm(two) + 1e-9
