"""Dense matrix helpers over either scalar backend.

Matrices are immutable tuples of row tuples.  Exact matrices hold
``Fraction`` / :class:`~ncgdesk.scalars.Cyclotomic` entries and go through
exact Gauss elimination; float matrices hold ``complex`` entries and go
through numpy (SVD ranks, least-squares solves).  The two kinds are never
mixed inside one matrix.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .scalars import (
    Cyclotomic,
    conj_scalar,
    get_epsilon,
    is_exact_scalar,
    scalar_is_zero,
    to_complex,
)

Matrix = tuple  # tuple of row tuples


def as_matrix(rows) -> Matrix:
    """Normalize a nested sequence into a matrix, fixing the backend.

    Integers are promoted to ``Fraction`` so that exact division never
    silently produces floats.  Mixing exact and float entries is an error.
    """
    out = []
    saw_exact = saw_float = False
    width = None
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, bool):
                raise ValidationError("bool is not a scalar")
            if isinstance(x, int):
                x = Fraction(x)
            if isinstance(x, (Fraction, Cyclotomic)):
                saw_exact = True
            elif isinstance(x, (float, complex)):
                x = complex(x)
                saw_float = True
            else:
                raise ValidationError(f"unsupported matrix entry {x!r}")
            r.append(x)
        if width is None:
            width = len(r)
        elif len(r) != width:
            raise ValidationError("ragged matrix rows")
        out.append(tuple(r))
    if saw_exact and saw_float:
        raise ValidationError("matrix mixes exact and float entries")
    return tuple(out)


def shape(m: Matrix):
    return (len(m), len(m[0]) if m else 0)


def is_exact_matrix(m: Matrix) -> bool:
    for row in m:
        for x in row:
            return is_exact_scalar(x)
    return True


def zeros(r: int, c: int, exact: bool = True) -> Matrix:
    z = Fraction(0) if exact else 0j
    return tuple(tuple(z for _ in range(c)) for _ in range(r))


def identity(n: int, exact: bool = True) -> Matrix:
    one, z = (Fraction(1), Fraction(0)) if exact else (1 + 0j, 0j)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def scalar_mul(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValidationError(f"matmul shape mismatch {shape(a)} x {shape(b)}")
    bt = tuple(zip(*b)) if b else ()
    z = Fraction(0) if (is_exact_matrix(a) and is_exact_matrix(b)) else 0j
    out = []
    for row in a:
        out.append(tuple(sum((x * y for x, y in zip(row, col) if x and y), start=z)
                         for col in bt))
    return tuple(out)


def conj_transpose(a: Matrix) -> Matrix:
    return tuple(tuple(conj_scalar(a[i][j]) for i in range(len(a)))
                 for j in range(len(a[0]) if a else 0))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def trace(a: Matrix):
    return sum((a[i][i] for i in range(len(a))),
               start=Fraction(0) if is_exact_matrix(a) else 0j)


def block_diag(*mats: Matrix) -> Matrix:
    mats = [m for m in mats if shape(m)[0] or shape(m)[1]]
    if not mats:
        return ()
    exact = all(is_exact_matrix(m) for m in mats)
    rows = sum(shape(m)[0] for m in mats)
    cols = sum(shape(m)[1] for m in mats)
    out = [[Fraction(0) if exact else 0j] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        mr, mc = shape(m)
        for i in range(mr):
            for j in range(mc):
                out[r0 + i][c0 + j] = m[i][j]
        r0 += mr
        c0 += mc
    return tuple(tuple(row) for row in out)


def mat_equal(a: Matrix, b: Matrix, eps: float | None = None) -> bool:
    if shape(a) != shape(b):
        return False
    return is_zero_matrix(mat_sub(a, b), eps)


def is_zero_matrix(a: Matrix, eps: float | None = None) -> bool:
    return all(scalar_is_zero(x, eps) for row in a for x in row)


def is_hermitian(a: Matrix, eps: float | None = None) -> bool:
    return mat_equal(a, conj_transpose(a), eps)


def to_numpy(a: Matrix) -> np.ndarray:
    r, c = shape(a)
    out = np.zeros((r, c), dtype=complex)
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            out[i, j] = to_complex(x)
    return out


def from_numpy(a: np.ndarray) -> Matrix:
    return tuple(tuple(complex(x) for x in row) for row in a)


def op_norm(a: Matrix) -> float:
    """Largest singular value; empty matrices have norm 0."""
    r, c = shape(a)
    if r == 0 or c == 0:
        return 0.0
    return float(np.linalg.norm(to_numpy(a), 2))


# ---------------------------------------------------------------------------
# exact elimination

def _rref(rows, ncols):
    """In-place RREF of a list of row lists; returns pivot column list."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        if inv != 1:
            rows[r] = [x / inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(a: Matrix):
    """(reduced matrix, pivot columns) for an exact matrix."""
    rows = [list(row) for row in a]
    pivots = _rref(rows, shape(a)[1])
    return tuple(tuple(row) for row in rows), pivots


def rank(a: Matrix) -> int:
    r, c = shape(a)
    if r == 0 or c == 0:
        return 0
    if is_exact_matrix(a):
        rows = [list(row) for row in a]
        return len(_rref(rows, c))
    m = to_numpy(a)
    tol = get_epsilon() * max(1.0, float(np.linalg.norm(m, 2)))
    return int(np.linalg.matrix_rank(m, tol=tol))


def pivot_columns(a: Matrix):
    """Indices of a maximal independent column subset, leftmost-greedy."""
    r, c = shape(a)
    if r == 0 or c == 0:
        return []
    if is_exact_matrix(a):
        rows = [list(row) for row in a]
        return _rref(rows, c)
    m = to_numpy(a)
    tol = get_epsilon() * max(1.0, float(np.linalg.norm(m, 2)))
    pivots = []
    basis = np.zeros((r, 0), dtype=complex)
    for j in range(c):
        cand = np.column_stack([basis, m[:, j]])
        if np.linalg.matrix_rank(cand, tol=tol) > basis.shape[1]:
            basis = cand
            pivots.append(j)
    return pivots


def nullspace(a: Matrix):
    """Basis of the right kernel, as a list of column tuples."""
    r, c = shape(a)
    if c == 0:
        return []
    if r == 0:
        return [tuple(Fraction(1) if i == j else Fraction(0) for i in range(c))
                for j in range(c)]
    if is_exact_matrix(a):
        rows = [list(row) for row in a]
        pivots = _rref(rows, c)
        pivot_set = set(pivots)
        free = [j for j in range(c) if j not in pivot_set]
        basis = []
        for f in free:
            vec = [Fraction(0)] * c
            vec[f] = Fraction(1)
            for i, p in enumerate(pivots):
                vec[p] = -rows[i][f]
            basis.append(tuple(vec))
        return basis
    m = to_numpy(a)
    u, s, vh = np.linalg.svd(m)
    tol = get_epsilon() * max(1.0, float(s[0]) if len(s) else 1.0)
    nz = int(np.sum(s > tol))
    return [tuple(complex(x) for x in vh[i, :].conjugate()) for i in range(nz, c)]


def solve(a: Matrix, b) -> tuple | None:
    """One solution x of a @ x = b (b a column tuple), or None."""
    r, c = shape(a)
    b = tuple(b)
    if len(b) != r:
        raise ValidationError("solve: dimension mismatch")
    if c == 0:
        return () if all(scalar_is_zero(x) for x in b) else None
    if is_exact_matrix(a) and all(is_exact_scalar(x) for x in b):
        b = tuple(Fraction(x) if isinstance(x, int) else x for x in b)
        rows = [list(row) + [bx] for row, bx in zip(a, b)]
        pivots = _rref(rows, c)
        for row in rows:
            if all(scalar_is_zero(x) for x in row[:c]) and row[c]:
                return None
        x = [Fraction(0)] * c
        for i, p in enumerate(pivots):
            x[p] = rows[i][c]
        return tuple(x)
    m = to_numpy(a)
    vec = np.array([to_complex(x) for x in b], dtype=complex)
    sol, *_ = np.linalg.lstsq(m, vec, rcond=None)
    resid = m @ sol - vec
    tol = get_epsilon() * max(1.0, float(np.linalg.norm(m, 2)))
    if float(np.linalg.norm(resid, np.inf)) > 10 * tol:
        return None
    return tuple(complex(x) for x in sol)


def invert(a: Matrix) -> Matrix:
    r, c = shape(a)
    if r != c:
        raise ValidationError("invert: matrix not square")
    if not is_exact_matrix(a):
        return from_numpy(np.linalg.inv(to_numpy(a)))
    rows = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(r)]
            for i, row in enumerate(a)]
    pivots = _rref(rows, r)
    if len(pivots) != r:
        raise ValidationError("invert: singular matrix")
    return tuple(tuple(row[r:]) for row in rows)


def columns(a: Matrix):
    return [tuple(row[j] for row in a) for j in range(shape(a)[1])]


def from_columns(cols, nrows=None) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows or 0))
    return tuple(tuple(col[i] for col in cols) for i in range(len(cols[0])))


def projection_onto_columns(cols) -> Matrix:
    """Orthogonal projection onto span(cols) w.r.t. the standard inner product."""
    if not cols:
        raise ValidationError("projection_onto_columns: empty basis")
    n = from_columns(cols)
    nh = conj_transpose(n)
    gram = mat_mul(nh, n)
    return mat_mul(mat_mul(n, invert(gram)), nh)
