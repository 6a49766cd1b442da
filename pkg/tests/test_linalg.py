from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ncgdesk import linalg as la
from ncgdesk.scalars import Cyclotomic, scalar_is_zero, scalars_equal

fr = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def small_matrices(n=3):
    side = st.integers(1, n)
    return side.flatmap(lambda r: side.flatmap(lambda c: st.lists(
        st.lists(fr, min_size=c, max_size=c),
        min_size=r, max_size=r).map(la.as_matrix)))


def test_mat_mul_identity():
    m = la.as_matrix([[1, 2], [3, 4]])
    assert la.mat_equal(la.mat_mul(m, la.identity(2)), m)


def test_block_diag_shapes():
    a = la.as_matrix([[1]])
    b = la.as_matrix([[2, 0], [0, 2]])
    d = la.block_diag(a, b)
    assert la.shape(d) == (3, 3)
    assert d[0][0] == 1 and d[2][2] == 2 and d[0][1] == 0


def test_rank_and_rref():
    m = la.as_matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert la.rank(m) == 2
    r, pivots = la.rref(m)
    assert tuple(pivots) == (0, 1)
    assert tuple(la.pivot_columns(m)) == (0, 1)
    assert r[0][0] == 1 and r[1][1] == 1


def test_nullspace_is_in_kernel():
    m = la.as_matrix([[1, 2, 3], [2, 4, 6]])
    basis = la.nullspace(m)
    assert len(basis) == 2
    for v in basis:
        image = la.mat_mul(m, la.from_columns([v]))
        assert la.is_zero_matrix(image)


def test_solve_consistent_and_inconsistent():
    m = la.as_matrix([[1, 1], [0, 1]])
    x = la.solve(m, (Fraction(3), Fraction(1)))
    assert x == (Fraction(2), Fraction(1))
    singular = la.as_matrix([[1, 1], [1, 1]])
    assert la.solve(singular, (Fraction(0), Fraction(1))) is None


def test_invert_round_trip():
    m = la.as_matrix([[1, 2], [3, 5]])
    inv = la.invert(m)
    assert la.mat_equal(la.mat_mul(m, inv), la.identity(2))


def test_complex_exact_entries():
    i = Cyclotomic.gaussian(0, 1)
    m = la.as_matrix([[i, 0], [0, i]])
    sq = la.mat_mul(m, m)
    assert scalars_equal(sq[0][0], Fraction(-1))
    assert la.rank(m) == 2


def test_projection_onto_columns_is_idempotent():
    cols = [(Fraction(1), Fraction(0), Fraction(1)),
            (Fraction(0), Fraction(1), Fraction(0))]
    p = la.projection_onto_columns(cols)
    assert la.mat_equal(la.mat_mul(p, p), p)
    assert la.mat_equal(la.conj_transpose(p), p)
    # fixes the column space
    for c in cols:
        img = la.mat_mul(p, la.from_columns([c]))
        assert la.mat_equal(img, la.from_columns([c]))


def test_op_norm_diagonal():
    m = la.as_matrix([[3, 0], [0, -4]])
    assert abs(la.op_norm(m) - 4.0) < 1e-12


@settings(max_examples=40)
@given(small_matrices())
def test_rank_bounded_and_stable_under_transpose(m):
    r, c = la.shape(m)
    k = la.rank(m)
    assert 0 <= k <= min(r, c)
    assert la.rank(la.transpose(m)) == k


@settings(max_examples=40)
@given(small_matrices())
def test_nullity_plus_rank(m):
    r, c = la.shape(m)
    assert la.rank(m) + len(la.nullspace(m)) == c


def square_matrices(n=2):
    return st.integers(1, n).flatmap(lambda r: st.lists(
        st.lists(fr, min_size=r, max_size=r),
        min_size=r, max_size=r).map(la.as_matrix))


@settings(max_examples=25)
@given(square_matrices(), fr)
def test_trace_linear(m, c):
    assert scalars_equal(la.trace(la.scalar_mul(c, m)), c * la.trace(m)) \
        or scalar_is_zero(la.trace(la.scalar_mul(c, m)) - c * la.trace(m))
