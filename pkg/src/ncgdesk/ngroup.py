"""K0 and N0 groups of multi-matrix algebras.

Equivalence classes of normal elements are finitely supported maps from
nonzero spectral values to integer rank vectors; all group arithmetic
happens on those supports.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    MultiMatrixAlgebra,
    Projection,
    SpectralForm,
    StarHomomorphism,
)
from .errors import ValidationError
from .scalars import (
    get_epsilon,
    is_exact_scalar,
    scalar_is_zero,
    scalars_equal,
    sort_key,
    to_complex,
)


@dataclass(frozen=True)
class K0Class:
    """Formal difference of projections, recorded as per-factor ranks."""

    ranks: tuple

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))

    def __add__(self, other):
        if len(self.ranks) != len(other.ranks):
            raise ValidationError("K0 classes over different algebras")
        return K0Class(tuple(a + b for a, b in zip(self.ranks, other.ranks)))

    def __neg__(self):
        return K0Class(tuple(-a for a in self.ranks))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n: int):
        return K0Class(tuple(n * a for a in self.ranks))

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.ranks)


def k0_of_projection(p: Projection) -> K0Class:
    """Stable equivalence class of a projection: its per-factor ranks."""
    return K0Class(p.rank_vector())


@dataclass(frozen=True)
class N0Class:
    """Finitely supported map from nonzero spectral values to K0 classes."""

    algebra: MultiMatrixAlgebra
    support: tuple  # ((value, K0Class), ...)

    def __post_init__(self):
        k = self.algebra.num_factors
        merged = []
        for value, cls in self.support:
            if not isinstance(cls, K0Class):
                cls = K0Class(tuple(cls))
            if len(cls.ranks) != k:
                raise ValidationError("K0 class length does not match algebra")
            if scalar_is_zero(value):
                raise ValidationError("N0 support keys must be nonzero")
            hit = None
            for i, (v, _) in enumerate(merged):
                if self._keys_match(v, value):
                    hit = i
                    break
            if hit is None:
                merged.append([value, cls])
            else:
                merged[hit][1] = merged[hit][1] + cls
        pruned = tuple((v, c) for v, c in merged if not c.is_zero())
        object.__setattr__(self, "support",
                           tuple(sorted(pruned, key=lambda kv: sort_key(kv[0]))))

    @staticmethod
    def _keys_match(a, b) -> bool:
        if is_exact_scalar(a) and is_exact_scalar(b):
            return scalars_equal(a, b)
        return abs(to_complex(a) - to_complex(b)) <= 2 * get_epsilon()

    @staticmethod
    def zero(algebra):
        return N0Class(algebra, ())

    def is_zero(self) -> bool:
        return not self.support

    def value_at(self, key) -> K0Class:
        for v, c in self.support:
            if self._keys_match(v, key):
                return c
        return K0Class((0,) * self.algebra.num_factors)

    def __add__(self, other):
        if self.algebra != other.algebra:
            raise ValidationError("N0 classes over different algebras")
        return N0Class(self.algebra, self.support + other.support)

    def __neg__(self):
        return N0Class(self.algebra, tuple((v, -c) for v, c in self.support))

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, N0Class) or self.algebra != other.algebra:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.algebra, self.support))


def n_class(a: SpectralForm) -> N0Class:
    """The N0 class of a normal element: lambda -> [P_a({lambda})]."""
    return N0Class(a.algebra, tuple(
        (v, k0_of_projection(p)) for v, p in a.pairs))


def n_equiv(a: SpectralForm, b: SpectralForm) -> bool:
    """Equivalence of normal elements: equal spectral projections per point.

    For finite spectra every admissible Borel set acts through its
    intersection with sp(a) and sp(b), so singletons decide equivalence.
    """
    if a.algebra != b.algebra:
        raise ValidationError("elements over different algebras")
    return n_class(a) == n_class(b)


def n0_add(x: N0Class, y: N0Class) -> N0Class:
    return x + y


def n0_neg(x: N0Class) -> N0Class:
    return -x


@dataclass(frozen=True)
class K0TensorC:
    """Element of K0(A) tensor C in the per-factor rank basis."""

    coeffs: tuple

    def __add__(self, other):
        return K0TensorC(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return K0TensorC(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __eq__(self, other):
        if not isinstance(other, K0TensorC):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(scalars_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(len(self.coeffs))

    def is_zero(self) -> bool:
        return all(scalar_is_zero(c) for c in self.coeffs)

    @staticmethod
    def zero(k: int):
        from fractions import Fraction
        return K0TensorC((Fraction(0),) * k)


def h_map(x: N0Class) -> K0TensorC:
    """Collapse an N0 class to K0(A) tensor C: sum of value * ranks."""
    from fractions import Fraction
    k = x.algebra.num_factors
    coeffs = [Fraction(0)] * k
    for v, cls in x.support:
        for i, r in enumerate(cls.ranks):
            if r:
                coeffs[i] = coeffs[i] + v * r
    return K0TensorC(tuple(coeffs))


def generator_h(lam, mu, p: Projection) -> N0Class:
    """[(lam+mu) p] - [lam p + mu p] as an N0 class."""
    plus = n_class(SpectralForm.scaled_projection(lam + mu, p))
    split = n_class(SpectralForm.scaled_projection(lam, p).direct_sum(
        SpectralForm.scaled_projection(mu, p)))
    return plus - split


def generator_g(n: int, lam, p: Projection) -> N0Class:
    """[lam p^(n-fold sum)] - [(n lam) p] as an N0 class."""
    if n < 1:
        raise ValidationError("generator index must be positive")
    stacked = p
    for _ in range(n - 1):
        stacked = stacked.direct_sum(p)
    first = n_class(SpectralForm.scaled_projection(lam, stacked))
    second = n_class(SpectralForm.scaled_projection(n * lam, p))
    return first - second


@dataclass(frozen=True)
class SignedHGenerator:
    sign: int
    lam: object
    mu: object
    projection: Projection

    def evaluate(self) -> N0Class:
        g = generator_h(self.lam, self.mu, self.projection)
        return g if self.sign > 0 else -g


def reduce_g_to_h(n: int, lam, p: Projection):
    """Write the n-th stacking generator as a signed sum of pair generators.

    Unrolling the induction g^(n) = g^(n-1) - h_{(n-1)lam, lam; p} gives a
    list of n-1 signed h-generators.
    """
    if n < 1:
        raise ValidationError("generator index must be positive")
    return [SignedHGenerator(-1, k * lam, lam, p) for k in range(1, n)]


def evaluate_h_list(algebra, gens) -> N0Class:
    acc = N0Class.zero(algebra)
    for g in gens:
        acc = acc + g.evaluate()
    return acc


def default_reference_projections(algebra: MultiMatrixAlgebra):
    """One rank-one diagonal unit per factor (the canonical t-map section)."""
    return [Projection.diagonal_unit(algebra, f) for f in range(algebra.num_factors)]


def t_map(v: K0TensorC, generators=None, algebra=None) -> N0Class:
    """Canonical coset representative splitting h: c_i goes to c_i * e_i."""
    if generators is None:
        if algebra is None:
            raise ValidationError("t_map needs reference projections or an algebra")
        generators = default_reference_projections(algebra)
    if algebra is None:
        algebra = generators[0].algebra
    if len(generators) != algebra.num_factors:
        raise ValidationError("one reference projection per factor required")
    support = []
    for i, c in enumerate(v.coeffs):
        if scalar_is_zero(c):
            continue
        support.append((c, k0_of_projection(generators[i])))
    return N0Class(algebra, tuple(support))


def functorial_map(phi: StarHomomorphism, x: N0Class) -> N0Class:
    """Push an N0 class through a *-homomorphism via its multiplicity matrix."""
    if x.algebra != phi.source:
        raise ValidationError("class is not over the homomorphism source")
    support = []
    for v, cls in x.support:
        pushed = tuple(sum(m * r for m, r in zip(row, cls.ranks))
                       for row in phi.multiplicities)
        support.append((v, K0Class(pushed)))
    return N0Class(phi.target, tuple(support))
