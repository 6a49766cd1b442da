import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ncgdesk.scalars import (
    Cyclotomic,
    conj_scalar,
    format_scalar,
    get_epsilon,
    parse_scalar,
    scalar_is_zero,
    scalars_equal,
    set_epsilon,
    sort_key,
    to_complex,
)

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)
gaussians = st.builds(Cyclotomic.gaussian, fractions, fractions)


class TestCyclotomic:
    def test_rational_embedding(self):
        x = Cyclotomic.from_rational(Fraction(3, 4))
        assert x.is_rational() and x.rational_value() == Fraction(3, 4)
        assert complex(x) == 0.75

    def test_root_of_unity_powers(self):
        w = Cyclotomic.root_of_unity(3)
        assert (w ** 3).is_rational()
        assert (w ** 3).rational_value() == 1
        # 1 + w + w^2 = 0
        assert (Cyclotomic.from_rational(1) + w + w * w).is_zero()

    def test_gaussian_parts(self):
        z = Cyclotomic.gaussian(Fraction(1, 2), Fraction(-2))
        assert z.is_gaussian()
        assert z.gaussian_parts() == (Fraction(1, 2), Fraction(-2))
        assert abs(complex(z) - complex(0.5, -2)) < 1e-12

    def test_conjugate_of_root(self):
        w = Cyclotomic.root_of_unity(5)
        assert (w * w.conjugate()).rational_value() == 1

    def test_inverse(self):
        z = Cyclotomic.gaussian(Fraction(3), Fraction(4))
        assert (z * z.inverse()).rational_value() == 1
        with pytest.raises(ZeroDivisionError):
            Cyclotomic.from_rational(0).inverse()

    def test_mixed_order_arithmetic(self):
        # i lives in order 4, w in order 3; the sum needs order 12
        i = Cyclotomic.gaussian(0, 1)
        w = Cyclotomic.root_of_unity(3)
        s = i + w
        assert abs(complex(s) - (1j + complex(w))) < 1e-12

    @given(gaussians, gaussians)
    def test_add_commutes(self, a, b):
        assert (a + b) == (b + a)

    @given(gaussians, gaussians, gaussians)
    def test_mul_distributes(self, a, b, c):
        assert (a * (b + c)) == (a * b + a * c)

    @given(gaussians)
    def test_conjugate_involutive(self, a):
        assert a.conjugate().conjugate() == a

    @given(gaussians)
    def test_complex_embedding_is_homomorphic(self, a):
        b = Cyclotomic.gaussian(Fraction(1, 3), Fraction(2))
        assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9


class TestHelpers:
    def test_scalar_is_zero_exact(self):
        assert scalar_is_zero(Cyclotomic.from_rational(0))
        assert not scalar_is_zero(Cyclotomic.gaussian(0, Fraction(1, 10 ** 9)))

    def test_scalar_is_zero_float(self):
        assert scalar_is_zero(1e-12)
        assert not scalar_is_zero(1e-3)

    def test_epsilon_roundtrip(self):
        old = get_epsilon()
        try:
            set_epsilon(1e-6)
            assert get_epsilon() == 1e-6
            assert scalars_equal(0.0, 1e-7)
        finally:
            set_epsilon(old)

    def test_conj_scalar_float(self):
        assert conj_scalar(complex(1, 2)) == complex(1, -2)

    def test_sort_key_orders_by_real_then_imag(self):
        xs = [Cyclotomic.gaussian(1, 0), Cyclotomic.gaussian(0, 1),
              Cyclotomic.gaussian(0, -1)]
        assert sorted(xs, key=sort_key) == [xs[2], xs[1], xs[0]]


class TestJson:
    @given(gaussians)
    def test_roundtrip_gaussian(self, a):
        assert parse_scalar(format_scalar(a)) == a

    def test_roundtrip_nongaussian(self):
        w = Cyclotomic.root_of_unity(3)
        doc = format_scalar(w)
        assert isinstance(doc, dict)
        assert parse_scalar(doc) == w

    def test_roundtrip_float(self):
        doc = format_scalar(complex(0.5, -1.25))
        z = parse_scalar(doc)
        assert isinstance(z, complex) or math.isclose(to_complex(z).real, 0.5)
        assert abs(to_complex(z) - complex(0.5, -1.25)) < 1e-12

    def test_bare_string_is_exact(self):
        x = parse_scalar("2/3")
        assert x.is_rational() and x.rational_value() == Fraction(2, 3)
