import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncgdesk.algebra import (
    AlgebraElement,
    BorelSetModel,
    MultiMatrixAlgebra,
    Projection,
    SpectralForm,
    StarHomomorphism,
    apply_hom,
    apply_hom_spectral,
    check_hom_spectral_commute,
    is_normal,
    spectral_decompose,
    spectral_projection,
)
from ncgdesk.errors import DomainError, ValidationError
from ncgdesk.generate import (
    random_exact_unitary,
    random_hom,
    random_normal,
    random_projection,
)
from ncgdesk.scalars import Cyclotomic

A = MultiMatrixAlgebra((1, 2))
seeds = st.integers(0, 10 ** 6)


class TestAlgebraElement:
    def test_shape_validation(self):
        with pytest.raises(ValidationError):
            AlgebraElement(A, 1, (((Fraction(1),),),))  # one block missing
        with pytest.raises(ValidationError):
            AlgebraElement(A, 1, (((Fraction(1),),), ((Fraction(1),),)))

    def test_mixed_backend_rejected(self):
        with pytest.raises(ValidationError):
            AlgebraElement(A, 1, (((Fraction(1),),),
                                  ((0.0, 0.0), (0.0, 0.0))))

    def test_identity_is_unitary_projection(self):
        e = AlgebraElement.identity(A)
        assert e.is_projection() and e.is_unitary()

    def test_star_reverses_products(self):
        rng = random.Random(0)
        x = random_normal(A, rng).element()
        y = random_normal(A, rng).element()
        assert (x * y).star().equals(y.star() * x.star())

    def test_direct_sum_block_diagonal(self):
        x = AlgebraElement.identity(A)
        s = x.direct_sum(x.scale(2))
        assert s.amplification == 2
        assert s.trace_vector() == (Fraction(3), Fraction(6))

    def test_norm_of_scaled_identity(self):
        x = AlgebraElement.identity(A).scale(Fraction(-3, 2))
        assert abs(x.norm() - 1.5) < 1e-12


class TestProjection:
    def test_rejects_non_projection(self):
        with pytest.raises(DomainError):
            Projection(AlgebraElement.identity(A).scale(2))

    def test_rank_vector_diagonal_unit(self):
        p = Projection.diagonal_unit(A, 1)
        assert p.rank_vector() == (0, 1)

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_random_projection_is_projection(self, seed):
        p = random_projection(A, random.Random(seed))
        assert p.element.is_projection()
        assert all(0 <= r <= d for r, d in zip(p.rank_vector(), A.block_dims))

    def test_conjugated_rank_is_stable(self):
        rng = random.Random(3)
        p = random_projection(A, rng)
        u = AlgebraElement(A, 1, tuple(
            random_exact_unitary(d, rng) for d in A.ambient_dims(1)))
        q = Projection(u * p.element * u.star())
        assert q.rank_vector() == p.rank_vector()


class TestSpectralForm:
    def test_resolution_of_identity_enforced(self):
        p = Projection.diagonal_unit(A, 0)
        with pytest.raises(ValidationError):
            SpectralForm(A, 1, ((Fraction(1), p),), p)  # p + p != 1

    def test_from_pairs_prunes_zero_terms(self):
        p = Projection.diagonal_unit(A, 0)
        z = Projection.zero(A)
        a = SpectralForm.from_pairs(A, 1, ((Fraction(2), p), (Fraction(3), z)))
        assert a.eigenvalues() == (Fraction(2),)

    def test_element_reconstruction(self):
        diag = AlgebraElement.diagonal(
            A, [[Fraction(2)], [Fraction(0), Fraction(-1)]])
        a = spectral_decompose(diag)
        assert a.element().equals(diag)

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_decompose_round_trip(self, seed):
        a = random_normal(A, random.Random(seed))
        x = a.element()
        assert is_normal(x)
        again = spectral_decompose(x)
        assert again.element().equals(x)
        assert sorted(map(str, again.eigenvalues())) \
            == sorted(map(str, a.eigenvalues()))

    def test_decompose_float_backend(self):
        x = AlgebraElement(MultiMatrixAlgebra((2,)), 1,
                           (((1.0, 0.0), (0.0, 0.5)),))
        a = spectral_decompose(x)
        assert a.element().equals(x, 1e-8)

    def test_non_normal_rejected(self):
        x = AlgebraElement(MultiMatrixAlgebra((2,)), 1,
                           (((Fraction(0), Fraction(1)),
                             (Fraction(0), Fraction(0))),))
        assert not is_normal(x)
        with pytest.raises(DomainError):
            spectral_decompose(x)

    def test_spectral_projection_selects_points(self):
        diag = AlgebraElement.diagonal(
            A, [[Fraction(2)], [Fraction(2), Fraction(5)]])
        a = spectral_decompose(diag)
        p = spectral_projection(a, BorelSetModel((Fraction(2),)))
        assert p.rank_vector() == (1, 1)
        q = spectral_projection(a, BorelSetModel((Fraction(7),)))
        assert q.rank_vector() == (0, 0)

    def test_direct_sum_merges_common_eigenvalues(self):
        p = Projection.identity(A)
        a = SpectralForm.scaled_projection(Fraction(2), p)
        s = a.direct_sum(a)
        assert s.eigenvalues() == (Fraction(2),)
        assert s.amplification == 2


class TestStarHomomorphism:
    def test_unital_embedding_preserves_products(self):
        rng = random.Random(5)
        phi = random_hom(rng)
        x = random_normal(phi.source, rng).element()
        y = random_normal(phi.source, rng).element()
        assert apply_hom(phi, x * y).equals(
            apply_hom(phi, x) * apply_hom(phi, y))
        assert apply_hom(phi, x.star()).equals(apply_hom(phi, x).star())

    def test_dimension_bookkeeping_validated(self):
        src = MultiMatrixAlgebra((2,))
        tgt = MultiMatrixAlgebra((3,))
        with pytest.raises(ValidationError):
            StarHomomorphism(src, tgt, ((2,),), None)  # 2*2 != 3

    @settings(max_examples=15, deadline=None)
    @given(seeds)
    def test_spectral_projections_commute(self, seed):
        rng = random.Random(seed)
        phi = random_hom(rng)
        a = random_normal(phi.source, rng)
        e = BorelSetModel(a.eigenvalues()[:1] or (Fraction(1),))
        assert check_hom_spectral_commute(phi, a, e)

    def test_pushforward_spectrum_is_preserved(self):
        rng = random.Random(9)
        phi = random_hom(rng)
        a = random_normal(phi.source, rng)
        b = apply_hom_spectral(phi, a)
        assert set(map(str, b.eigenvalues())) <= set(map(str, a.eigenvalues()))
