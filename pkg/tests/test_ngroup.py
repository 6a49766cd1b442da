import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncgdesk.algebra import MultiMatrixAlgebra, Projection, SpectralForm
from ncgdesk.errors import ValidationError
from ncgdesk.generate import (
    random_hom,
    random_n0class,
    random_normal,
    random_projection,
)
from ncgdesk.ngroup import (
    K0Class,
    K0TensorC,
    N0Class,
    evaluate_h_list,
    functorial_map,
    generator_g,
    generator_h,
    h_map,
    n_class,
    n_equiv,
    reduce_g_to_h,
    t_map,
)
from ncgdesk.scalars import Cyclotomic

A = MultiMatrixAlgebra((1, 2))
seeds = st.integers(0, 10 ** 6)


def rand_class(seed):
    return random_n0class(A, random.Random(seed))


class TestGroupLaws:
    @settings(max_examples=40, deadline=None)
    @given(seeds, seeds, seeds)
    def test_abelian_group_axioms(self, s1, s2, s3):
        x, y, z = rand_class(s1), rand_class(s2), rand_class(s3)
        assert (x + y) + z == x + (y + z)
        assert x + y == y + x
        assert x + N0Class.zero(A) == x
        assert (x - x).is_zero()

    @settings(max_examples=40, deadline=None)
    @given(seeds, seeds, seeds)
    def test_cancellation(self, s1, s2, s3):
        x, y, z = rand_class(s1), rand_class(s2), rand_class(s3)
        if x + z == y + z:
            assert x == y

    def test_support_merges_equal_keys(self):
        v = Cyclotomic.from_rational(Fraction(1, 2))
        x = N0Class(A, ((v, K0Class((1, 0))), (v, K0Class((2, 1)))))
        assert len(x.support) == 1
        assert x.value_at(v).ranks == (3, 1)

    def test_zero_ranks_pruned(self):
        v = Cyclotomic.from_rational(1)
        x = N0Class(A, ((v, K0Class((1, -1))), (v, K0Class((-1, 1)))))
        assert x.is_zero()

    def test_zero_key_rejected(self):
        with pytest.raises(ValidationError):
            N0Class(A, ((Cyclotomic.from_rational(0), K0Class((1, 0))),))


class TestClassesOfElements:
    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_class_ranks_match_spectral_projections(self, seed):
        a = random_normal(A, random.Random(seed))
        x = n_class(a)
        for v, p in a.pairs:
            assert x.value_at(v).ranks == p.rank_vector()

    def test_equivalence_ignores_projection_position(self):
        p = Projection.diagonal_unit(A, 1, index=0)
        q = Projection.diagonal_unit(A, 1, index=1)
        a = SpectralForm.scaled_projection(Fraction(2), p)
        b = SpectralForm.scaled_projection(Fraction(2), q)
        assert n_equiv(a, b)

    def test_equivalence_sees_eigenvalues(self):
        p = Projection.diagonal_unit(A, 1)
        a = SpectralForm.scaled_projection(Fraction(2), p)
        b = SpectralForm.scaled_projection(Fraction(3), p)
        assert not n_equiv(a, b)


class TestHAndT:
    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_h_kills_pair_generators(self, seed):
        rng = random.Random(seed)
        p = random_projection(A, rng, nonzero=True)
        lam = Cyclotomic.gaussian(Fraction(rng.randint(-4, 4), 2),
                                  Fraction(rng.randint(-4, 4), 2))
        mu = Cyclotomic.gaussian(1, Fraction(rng.randint(0, 3)))
        assert h_map(generator_h(lam, mu, p)).is_zero()

    def test_h_is_additive(self):
        x, y = rand_class(1), rand_class(2)
        assert h_map(x + y) == h_map(x) + h_map(y)

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_h_after_t_is_identity(self, seed):
        rng = random.Random(seed)
        v = K0TensorC((Cyclotomic.gaussian(Fraction(rng.randint(-6, 6), 3), 1),
                       Cyclotomic.from_rational(rng.randint(-3, 3))))
        assert h_map(t_map(v, algebra=A)) == v

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.integers(1, 20))
    def test_stack_generator_reduces_to_pair_generators(self, seed, n):
        rng = random.Random(seed)
        p = random_projection(A, rng, nonzero=True)
        lam = Cyclotomic.gaussian(Fraction(1, 2), Fraction(rng.randint(1, 3)))
        gens = reduce_g_to_h(n, lam, p)
        assert len(gens) == n - 1
        assert evaluate_h_list(A, gens) == generator_g(n, lam, p)


class TestFunctoriality:
    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_push_commutes_with_class(self, seed):
        rng = random.Random(seed)
        phi = random_hom(rng)
        a = random_normal(phi.source, rng)
        from ncgdesk.algebra import apply_hom_spectral
        lhs = functorial_map(phi, n_class(a))
        rhs = n_class(apply_hom_spectral(phi, a))
        assert lhs == rhs

    @settings(max_examples=20, deadline=None)
    @given(seeds, seeds)
    def test_push_is_additive(self, s1, s2):
        rng = random.Random(s1)
        phi = random_hom(rng)
        x = random_n0class(phi.source, random.Random(s2))
        y = random_n0class(phi.source, random.Random(s2 + 1))
        assert functorial_map(phi, x + y) \
            == functorial_map(phi, x) + functorial_map(phi, y)
