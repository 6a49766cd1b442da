"""Multi-matrix algebras and their spectral calculus.

An algebra is a finite direct sum of complex matrix blocks.  Elements of the
amplification M_m(A) are stored per factor in outer-major layout: the block
for factor j (size m*r_j) is an m x m grid of r_j x r_j cells, cell (s, t)
being the (s, t) entry of the m x m matrix over A.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from . import linalg as la
from .errors import DomainError, NumericalError, ValidationError
from .scalars import (
    Cyclotomic,
    get_epsilon,
    is_exact_scalar,
    scalar_is_zero,
    scalars_equal,
    sort_key,
    to_complex,
)

_SNAP_DENOMINATOR = 10**6


@dataclass(frozen=True)
class MultiMatrixAlgebra:
    """A = M_{r_1}(C) + ... + M_{r_k}(C)."""

    block_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValidationError(f"invalid block dims {self.block_dims!r}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def num_factors(self) -> int:
        return len(self.block_dims)

    def ambient_dims(self, m: int = 1) -> tuple:
        return tuple(m * r for r in self.block_dims)

    def dimension(self, m: int = 1) -> int:
        return sum(d * d for d in self.ambient_dims(m))


@dataclass(frozen=True)
class AlgebraElement:
    algebra: MultiMatrixAlgebra
    amplification: int
    blocks: tuple

    def __post_init__(self):
        if self.amplification < 1:
            raise ValidationError("amplification must be >= 1")
        if len(self.blocks) != self.algebra.num_factors:
            raise ValidationError("one block per algebra factor required")
        blocks = tuple(la.as_matrix(b) for b in self.blocks)
        for b, d in zip(blocks, self.algebra.ambient_dims(self.amplification)):
            if la.shape(b) != (d, d):
                raise ValidationError(
                    f"block of shape {la.shape(b)} does not match dimension {d}")
        exact_flags = {la.is_exact_matrix(b) for b in blocks}
        if len(exact_flags) > 1:
            raise ValidationError("element mixes exact and float blocks")
        object.__setattr__(self, "blocks", blocks)

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zero(algebra, m=1, exact=True):
        return AlgebraElement(algebra, m, tuple(
            la.zeros(d, d, exact) for d in algebra.ambient_dims(m)))

    @staticmethod
    def identity(algebra, m=1, exact=True):
        return AlgebraElement(algebra, m, tuple(
            la.identity(d, exact) for d in algebra.ambient_dims(m)))

    @staticmethod
    def diagonal(algebra, diagonals, m=1):
        """Element with the given per-factor diagonal entries."""
        blocks = []
        for d, diag in zip(algebra.ambient_dims(m), diagonals):
            if len(diag) != d:
                raise ValidationError("diagonal length mismatch")
            blocks.append(tuple(tuple(diag[i] if i == j else 0 for j in range(d))
                                for i in range(d)))
        return AlgebraElement(algebra, m, tuple(blocks))

    # -- algebra operations -------------------------------------------------
    def _check_compatible(self, other):
        if self.algebra != other.algebra or self.amplification != other.amplification:
            raise ValidationError("algebra/amplification mismatch")

    def __add__(self, other):
        self._check_compatible(other)
        return AlgebraElement(self.algebra, self.amplification, tuple(
            la.mat_add(a, b) for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        self._check_compatible(other)
        return AlgebraElement(self.algebra, self.amplification, tuple(
            la.mat_sub(a, b) for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self):
        return AlgebraElement(self.algebra, self.amplification,
                              tuple(la.mat_neg(b) for b in self.blocks))

    def __mul__(self, other):
        self._check_compatible(other)
        return AlgebraElement(self.algebra, self.amplification, tuple(
            la.mat_mul(a, b) for a, b in zip(self.blocks, other.blocks)))

    def scale(self, c):
        return AlgebraElement(self.algebra, self.amplification,
                              tuple(la.scalar_mul(c, b) for b in self.blocks))

    def star(self):
        return AlgebraElement(self.algebra, self.amplification,
                              tuple(la.conj_transpose(b) for b in self.blocks))

    def direct_sum(self, other):
        """a + b in M_{m1+m2}(A); outer-major layout makes this block-diagonal."""
        if self.algebra != other.algebra:
            raise ValidationError("algebra mismatch in direct sum")
        return AlgebraElement(self.algebra, self.amplification + other.amplification,
                              tuple(la.block_diag(a, b)
                                    for a, b in zip(self.blocks, other.blocks)))

    def equals(self, other, eps=None) -> bool:
        if self.algebra != other.algebra or self.amplification != other.amplification:
            return False
        return all(la.mat_equal(a, b, eps)
                   for a, b in zip(self.blocks, other.blocks))

    def is_zero(self, eps=None) -> bool:
        return all(la.is_zero_matrix(b, eps) for b in self.blocks)

    def is_exact(self) -> bool:
        return all(la.is_exact_matrix(b) for b in self.blocks)

    def is_projection(self, eps=None) -> bool:
        return self.equals(self.star(), eps) and (self * self).equals(self, eps)

    def is_unitary(self, eps=None) -> bool:
        return (self * self.star()).equals(
            AlgebraElement.identity(self.algebra, self.amplification,
                                    exact=self.is_exact()), eps)

    def norm(self) -> float:
        """Operator norm: max over factors of the largest singular value."""
        return max(la.op_norm(b) for b in self.blocks)

    def trace_vector(self):
        return tuple(la.trace(b) for b in self.blocks)


@dataclass(frozen=True)
class Projection:
    """An AlgebraElement validated to satisfy p^2 = p = p*."""

    element: AlgebraElement

    def __post_init__(self):
        if not self.element.is_projection():
            raise DomainError("element is not a projection")

    @property
    def algebra(self):
        return self.element.algebra

    @property
    def amplification(self):
        return self.element.amplification

    @staticmethod
    def zero(algebra, m=1, exact=True):
        return Projection(AlgebraElement.zero(algebra, m, exact))

    @staticmethod
    def identity(algebra, m=1, exact=True):
        return Projection(AlgebraElement.identity(algebra, m, exact))

    @staticmethod
    def diagonal_unit(algebra, factor, index=0, m=1):
        """Rank-one diagonal matrix unit in the given factor."""
        diags = []
        for f, d in enumerate(algebra.ambient_dims(m)):
            diags.append([Fraction(1) if (f == factor and i == index) else Fraction(0)
                          for i in range(d)])
        return Projection(AlgebraElement.diagonal(algebra, diags, m))

    def rank_vector(self):
        """Per-factor rank; the trace of a projection counts its eigenvalue-1 space."""
        out = []
        for t in self.element.trace_vector():
            if is_exact_scalar(t):
                q = t.rational_value() if isinstance(t, Cyclotomic) else Fraction(t)
                if q.denominator != 1:
                    raise DomainError("projection trace is not an integer")
                out.append(int(q))
            else:
                out.append(int(round(to_complex(t).real)))
        return tuple(out)

    def orthogonal_to(self, other, eps=None) -> bool:
        return (self.element * other.element).is_zero(eps)

    def direct_sum(self, other):
        return Projection(self.element.direct_sum(other.element))


@dataclass(frozen=True)
class BorelSetModel:
    """Finite point model of a Borel subset of the plane."""

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points",
                           tuple(sorted(self.points, key=sort_key)))

    def is_admissible(self, eps=None) -> bool:
        eps = get_epsilon() if eps is None else eps
        for p in self.points:
            if is_exact_scalar(p):
                if scalar_is_zero(p):
                    return False
            elif abs(to_complex(p)) <= eps:
                return False
        return True

    def contains(self, value, eps=None) -> bool:
        return any(scalars_equal(value, p, eps) for p in self.points)


@dataclass(frozen=True)
class SpectralForm:
    """A normal element presented as eigenvalue/eigenprojection pairs."""

    algebra: MultiMatrixAlgebra
    amplification: int
    pairs: tuple  # ((eigenvalue, Projection), ...), eigenvalues nonzero
    kernel_projection: Projection

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(
            sorted(self.pairs, key=lambda kv: sort_key(kv[0]))))
        self._validate()

    def _validate(self):
        projs = [p for _, p in self.pairs] + [self.kernel_projection]
        for p in projs:
            if p.algebra != self.algebra or p.amplification != self.amplification:
                raise ValidationError("spectral projection over wrong algebra")
        vals = [v for v, _ in self.pairs]
        for i, v in enumerate(vals):
            if scalar_is_zero(v):
                raise ValidationError("zero eigenvalue must go to the kernel projection")
            for w in vals[i + 1:]:
                if scalars_equal(v, w):
                    raise ValidationError("repeated eigenvalue in spectral form")
        for i, p in enumerate(projs):
            for q in projs[i + 1:]:
                if not p.orthogonal_to(q):
                    raise ValidationError("spectral projections are not orthogonal")
        total = projs[0].element
        for p in projs[1:]:
            total = total + p.element
        if not total.equals(AlgebraElement.identity(
                self.algebra, self.amplification, exact=total.is_exact())):
            raise ValidationError("spectral projections do not resolve the identity")

    @staticmethod
    def from_pairs(algebra, amplification, pairs):
        """Build a spectral form, deriving the kernel projection from the pairs."""
        exact = all(is_exact_scalar(v) for v, _ in pairs) and \
            all(p.element.is_exact() for _, p in pairs)
        total = AlgebraElement.zero(algebra, amplification, exact)
        kept = []
        for v, p in pairs:
            if not scalar_is_zero(v) and not p.element.is_zero():
                total = total + p.element
                kept.append((v, p))
        kernel = AlgebraElement.identity(algebra, amplification, exact) - total
        return SpectralForm(algebra, amplification, tuple(kept), Projection(kernel))

    @staticmethod
    def zero(algebra, m=1, exact=True):
        return SpectralForm(algebra, m, (), Projection.identity(algebra, m, exact))

    @staticmethod
    def scaled_projection(value, p: Projection):
        """The element value * p as a spectral form."""
        return SpectralForm.from_pairs(p.algebra, p.amplification, ((value, p),))

    def element(self) -> AlgebraElement:
        exact = self.is_exact()
        acc = AlgebraElement.zero(self.algebra, self.amplification, exact)
        for v, p in self.pairs:
            acc = acc + p.element.scale(v)
        return acc

    def is_exact(self) -> bool:
        return all(is_exact_scalar(v) for v, _ in self.pairs) and \
            self.kernel_projection.element.is_exact()

    def eigenvalues(self):
        return tuple(v for v, _ in self.pairs)

    def direct_sum(self, other: "SpectralForm") -> "SpectralForm":
        if self.algebra != other.algebra:
            raise ValidationError("algebra mismatch in direct sum")
        m1, m2 = self.amplification, other.amplification
        exact = self.is_exact() and other.is_exact()
        zero1 = AlgebraElement.zero(self.algebra, m1, exact)
        zero2 = AlgebraElement.zero(self.algebra, m2, exact)
        merged = {}
        for v, p in self.pairs:
            merged[v] = p.element.direct_sum(zero2)
        for v, p in other.pairs:
            mate = zero1.direct_sum(p.element)
            hit = next((k for k in merged if scalars_equal(k, v)), None)
            if hit is None:
                merged[v] = mate
            else:
                merged[hit] = merged[hit] + mate
        pairs = tuple((v, Projection(e)) for v, e in merged.items())
        return SpectralForm.from_pairs(self.algebra, m1 + m2, pairs)


# ---------------------------------------------------------------------------
# operations

def is_normal(x: AlgebraElement, eps=None) -> bool:
    d = x * x.star() - x.star() * x
    if x.is_exact():
        return d.is_zero()
    eps = get_epsilon() if eps is None else eps
    worst = max((abs(to_complex(v)) for b in d.blocks for row in b for v in row),
                default=0.0)
    return worst <= eps


def _cluster(values, radius):
    """Single-linkage clusters of complex values; returns lists of indices."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _snap_gaussian(z: complex) -> Cyclotomic:
    re = Fraction(z.real).limit_denominator(_SNAP_DENOMINATOR)
    im = Fraction(z.imag).limit_denominator(_SNAP_DENOMINATOR)
    return Cyclotomic.gaussian(re, im)


def _float_eigensystem(block):
    """(eigenvalue cluster means, orthogonal projections) for a normal matrix."""
    m = la.to_numpy(block)
    if m.size == 0:
        return [], []
    try:
        t, z = scipy.linalg.schur(m, output="complex")
    except Exception as exc:  # pragma: no cover - backend failure
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    eigs = np.diag(t)
    clusters = _cluster(list(eigs), 2 * get_epsilon())
    vals, projs = [], []
    for idx in clusters:
        vals.append(complex(np.mean([eigs[i] for i in idx])))
        vecs = z[:, idx]
        projs.append(la.from_numpy(vecs @ vecs.conjugate().T))
    return vals, projs


def spectral_decompose(x: AlgebraElement) -> SpectralForm:
    """Split a normal element into eigenvalue/eigenprojection pairs.

    Exact elements are decomposed exactly when their eigenvalues are Gaussian
    rationals (float eigenvalues are snapped and the candidate decomposition
    is verified by exact arithmetic).  Float elements go through a Schur
    decomposition with 2*eps eigenvalue clustering.
    """
    if not is_normal(x):
        raise DomainError("spectral_decompose requires a normal element")
    if x.is_exact():
        return _spectral_decompose_exact(x)
    return _spectral_decompose_float(x)


def _spectral_decompose_float(x):
    vals = []
    per_block = []
    for b in x.blocks:
        v, p = _float_eigensystem(b)
        per_block.append((v, p))
        vals.extend(v)
    clusters = _cluster(vals, 2 * get_epsilon())
    reps = [complex(np.mean([vals[i] for i in c])) for c in clusters]
    pairs = []
    dims = x.algebra.ambient_dims(x.amplification)
    for rep in reps:
        blocks = []
        for (bvals, bprojs), d in zip(per_block, dims):
            acc = la.zeros(d, d, exact=False)
            for v, p in zip(bvals, bprojs):
                if abs(v - rep) <= 2 * get_epsilon():
                    acc = la.mat_add(acc, p)
            blocks.append(acc)
        proj = AlgebraElement(x.algebra, x.amplification, tuple(blocks))
        pairs.append((rep, Projection(proj)))
    return SpectralForm.from_pairs(x.algebra, x.amplification, pairs)


def _spectral_decompose_exact(x):
    candidates = []
    for b in x.blocks:
        m = la.to_numpy(b)
        if m.size:
            candidates.extend(np.linalg.eigvals(m))
    if not candidates:
        snapped = []
    else:
        clusters = _cluster([complex(v) for v in candidates], 2 * get_epsilon())
        snapped = []
        for c in clusters:
            z = _snap_gaussian(complex(np.mean([candidates[i] for i in c])))
            if z not in snapped:
                snapped.append(z)
    pairs = []
    for lam in snapped:
        blocks = []
        for b, d in zip(x.blocks, x.algebra.ambient_dims(x.amplification)):
            proj = la.identity(d)
            for mu in snapped:
                if mu == lam:
                    continue
                diff = la.mat_sub(b, la.scalar_mul(mu, la.identity(d)))
                proj = la.mat_mul(proj, la.scalar_mul((lam - mu).inverse(), diff))
            blocks.append(proj)
        elem = AlgebraElement(x.algebra, x.amplification, tuple(blocks))
        if not elem.is_projection():
            raise NumericalError(
                "eigenvalues are not Gaussian rational; use the float backend "
                "or provide the element as a spectral form")
        pairs.append((lam, elem))
    recon = AlgebraElement.zero(x.algebra, x.amplification)
    for lam, p in pairs:
        recon = recon + p.scale(lam)
    if not recon.equals(x):
        raise NumericalError(
            "exact spectral reconstruction failed; use the float backend "
            "or provide the element as a spectral form")
    kept = [(lam, Projection(p)) for lam, p in pairs if not p.is_zero()]
    return SpectralForm.from_pairs(x.algebra, x.amplification, tuple(kept))


def spectral_projection(a: SpectralForm, e: BorelSetModel) -> Projection:
    """P_a(E): the sum of eigenprojections whose eigenvalue lies in E."""
    exact = a.is_exact() and all(is_exact_scalar(p) for p in e.points)
    acc = AlgebraElement.zero(a.algebra, a.amplification, exact)
    for v, p in a.pairs:
        if e.contains(v):
            acc = acc + p.element
    return Projection(acc)


# ---------------------------------------------------------------------------
# *-homomorphisms

@dataclass(frozen=True)
class StarHomomorphism:
    """Unital *-homomorphism given by Bratteli multiplicities and unitaries.

    ``multiplicities[i][j]`` counts the copies of source factor j inside
    target factor i; ``unitaries`` optionally conjugates each target block.
    """

    source: MultiMatrixAlgebra
    target: MultiMatrixAlgebra
    multiplicities: tuple
    unitaries: tuple | None = None

    def __post_init__(self):
        mult = tuple(tuple(int(m) for m in row) for row in self.multiplicities)
        if len(mult) != self.target.num_factors or any(
                len(row) != self.source.num_factors for row in mult):
            raise ValidationError("multiplicity matrix has wrong shape")
        if any(m < 0 for row in mult for m in row):
            raise ValidationError("negative multiplicity")
        for i, row in enumerate(mult):
            total = sum(m * r for m, r in zip(row, self.source.block_dims))
            if total != self.target.block_dims[i]:
                raise ValidationError(
                    f"homomorphism is not unital on target factor {i}")
        object.__setattr__(self, "multiplicities", mult)
        if self.unitaries is not None:
            us = tuple(la.as_matrix(u) for u in self.unitaries)
            for u, d in zip(us, self.target.block_dims):
                if la.shape(u) != (d, d):
                    raise ValidationError("embedding unitary has wrong size")
                if not la.mat_equal(la.mat_mul(u, la.conj_transpose(u)),
                                    la.identity(d, la.is_exact_matrix(u))):
                    raise ValidationError("embedding matrix is not unitary")
            object.__setattr__(self, "unitaries", us)

    @staticmethod
    def identity_hom(algebra):
        k = algebra.num_factors
        mult = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
        return StarHomomorphism(algebra, algebra, mult)


def _grid_cell(block, r, s, t):
    return tuple(row[t * r:(t + 1) * r] for row in block[s * r:(s + 1) * r])


def apply_hom(phi: StarHomomorphism, x: AlgebraElement) -> AlgebraElement:
    """Entrywise application of phi to an element of M_m(source)."""
    if x.algebra != phi.source:
        raise ValidationError("element is not over the homomorphism source")
    m = x.amplification
    exact = x.is_exact()
    out_blocks = []
    for i, ri in enumerate(phi.target.block_dims):
        u = phi.unitaries[i] if phi.unitaries is not None else None
        grid = [[None] * m for _ in range(m)]
        for s in range(m):
            for t in range(m):
                cells = []
                for j, rj in enumerate(phi.source.block_dims):
                    cell = _grid_cell(x.blocks[j], rj, s, t)
                    cells.extend([cell] * phi.multiplicities[i][j])
                sub = la.block_diag(*cells) if cells else la.zeros(ri, ri, exact)
                if la.shape(sub) != (ri, ri):
                    sub = la.block_diag(sub, la.zeros(ri - la.shape(sub)[0],
                                                      ri - la.shape(sub)[1], exact))
                if u is not None:
                    sub = la.mat_mul(la.mat_mul(u, sub), la.conj_transpose(u))
                grid[s][t] = sub
        rows = []
        for s in range(m):
            for rr in range(ri):
                rows.append(tuple(grid[s][t][rr][cc]
                                  for t in range(m) for cc in range(ri)))
        out_blocks.append(tuple(rows))
    return AlgebraElement(phi.target, m, tuple(out_blocks))


def apply_hom_spectral(phi: StarHomomorphism, a: SpectralForm) -> SpectralForm:
    """Push a spectral form through phi without re-diagonalizing."""
    pairs = tuple((v, Projection(apply_hom(phi, p.element))) for v, p in a.pairs)
    return SpectralForm.from_pairs(phi.target, a.amplification, pairs)


def check_hom_spectral_commute(phi: StarHomomorphism, a: SpectralForm,
                               e: BorelSetModel) -> bool:
    """Does taking spectral projections commute with applying phi?"""
    lhs = spectral_projection(spectral_decompose(apply_hom(phi, a.element())), e)
    rhs = apply_hom(phi, spectral_projection(a, e).element)
    return lhs.element.equals(rhs)
