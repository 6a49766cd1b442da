"""Seeded random instances: exact unitaries, normal elements, projections,
homomorphisms, and equivariant complexes.

Everything is exact by construction: rotations use Pythagorean cosines,
phases are fourth roots of unity, and complex generation builds the group
action first so that averaging makes the differentials equivariant and a
kernel projection forces d o d = 0.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import linalg as la
from .algebra import (
    AlgebraElement,
    MultiMatrixAlgebra,
    Projection,
    SpectralForm,
    StarHomomorphism,
)
from .errors import ValidationError
from .lefschetz import (
    GAComplex,
    IrrepTable,
    ModuleMap,
    kernel_projection,
)
from .ngroup import K0Class, N0Class
from .scalars import Cyclotomic

_TRIPLES = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (20, 21, 29))
_PHASES = (Cyclotomic.from_rational(1), Cyclotomic.from_rational(-1),
           Cyclotomic.gaussian(0, 1), Cyclotomic.gaussian(0, -1))


def random_exact_unitary(d: int, rng: random.Random):
    """Product of Pythagorean plane rotations and quarter-turn phases."""
    u = la.identity(d)
    for _ in range(d):
        if d >= 2:
            i, j = rng.sample(range(d), 2)
            a, b, c = rng.choice(_TRIPLES)
            cos, sin = Fraction(a, c), Fraction(b, c)
            rot = [[Fraction(1) if s == t else Fraction(0) for t in range(d)]
                   for s in range(d)]
            rot[i][i], rot[j][j] = cos, cos
            rot[i][j], rot[j][i] = -sin, sin
            u = la.mat_mul(u, tuple(tuple(r) for r in rot))
    phase = tuple(tuple(rng.choice(_PHASES) if s == t else Fraction(0)
                        for t in range(d)) for s in range(d))
    return la.mat_mul(u, phase)


def random_unitary_element(algebra: MultiMatrixAlgebra, rng: random.Random,
                           m: int = 1) -> AlgebraElement:
    return AlgebraElement(algebra, m, tuple(
        random_exact_unitary(d, rng) for d in algebra.ambient_dims(m)))


def random_projection(algebra: MultiMatrixAlgebra, rng: random.Random,
                      m: int = 1, nonzero: bool = False) -> Projection:
    while True:
        blocks = []
        total = 0
        for d in algebra.ambient_dims(m):
            pattern = [rng.randint(0, 1) for _ in range(d)]
            total += sum(pattern)
            u = random_exact_unitary(d, rng)
            diag = tuple(tuple(Fraction(pattern[s]) if s == t else Fraction(0)
                               for t in range(d)) for s in range(d))
            blocks.append(la.mat_mul(la.mat_mul(u, diag), la.conj_transpose(u)))
        if total or not nonzero:
            return Projection(AlgebraElement(algebra, m, tuple(blocks)))


def random_gaussian_rational(rng: random.Random, span: int = 2,
                             denominator: int = 4) -> Cyclotomic:
    def part():
        return Fraction(rng.randint(-span * denominator, span * denominator),
                        denominator)
    return Cyclotomic.gaussian(part(), part())


def random_spectrum(rng: random.Random, count: int,
                    near_gap: Fraction | None = None):
    """Distinct nonzero spectral values, optionally with one tight pair."""
    values = []
    while len(values) < count:
        z = random_gaussian_rational(rng)
        if not z.is_zero() and all(not (z - w).is_zero() for w in values):
            values.append(z)
    if near_gap is not None and values:
        twin = values[0] + Cyclotomic.from_rational(near_gap)
        if not twin.is_zero() and all(not (twin - w).is_zero() for w in values):
            values.append(twin)
    return values


def random_orthogonal_family(algebra: MultiMatrixAlgebra, rng: random.Random,
                             parts: int, m: int = 1):
    """Pairwise orthogonal projections from one conjugated diagonal split."""
    units = [random_exact_unitary(d, rng) for d in algebra.ambient_dims(m)]
    assignment = {}
    for f, d in enumerate(algebra.ambient_dims(m)):
        for s in range(d):
            assignment[(f, s)] = rng.randrange(parts)
    family = []
    for part in range(parts):
        blocks = []
        for f, d in enumerate(algebra.ambient_dims(m)):
            diag = tuple(tuple(
                Fraction(1) if s == t and assignment[(f, s)] == part
                else Fraction(0) for t in range(d)) for s in range(d))
            u = units[f]
            blocks.append(la.mat_mul(la.mat_mul(u, diag), la.conj_transpose(u)))
        family.append(Projection(AlgebraElement(algebra, m, tuple(blocks))))
    return family


def random_normal(algebra: MultiMatrixAlgebra, rng: random.Random,
                  m: int = 1, max_values: int = 3,
                  near_gap: Fraction | None = None) -> SpectralForm:
    """A normal element as an exact spectral form with random projections."""
    values = random_spectrum(rng, rng.randint(1, max_values), near_gap)
    family = random_orthogonal_family(algebra, rng, len(values) + 1, m)
    pairs = tuple((v, p) for v, p in zip(values, family[:-1]))
    return SpectralForm.from_pairs(algebra, m, pairs)


def random_n0class(algebra: MultiMatrixAlgebra, rng: random.Random,
                   max_support: int = 4, max_rank: int = 3) -> N0Class:
    values = random_spectrum(rng, rng.randint(0, max_support))
    k = algebra.num_factors
    support = tuple(
        (v, K0Class(tuple(rng.randint(-max_rank, max_rank) for _ in range(k))))
        for v in values)
    return N0Class(algebra, support)


def random_hom(rng: random.Random, max_factors: int = 2):
    """A unital embedding with random multiplicities and a random unitary."""
    src = MultiMatrixAlgebra(tuple(
        rng.randint(1, 2) for _ in range(rng.randint(1, max_factors))))
    mult = []
    target_dims = []
    for _ in range(rng.randint(1, max_factors)):
        row = [rng.randint(0, 2) for _ in src.block_dims]
        if not any(row):
            row[rng.randrange(len(row))] = 1
        mult.append(tuple(row))
        target_dims.append(sum(m * r for m, r in zip(row, src.block_dims)))
    target = MultiMatrixAlgebra(tuple(target_dims))
    unitaries = tuple(random_exact_unitary(d, rng) for d in target_dims)
    return StarHomomorphism(src, target, tuple(mult), unitaries)


# ---------------------------------------------------------------------------
# equivariant complexes

def _kron(a, b):
    ra, ca = la.shape(a)
    rb, cb = la.shape(b)
    return tuple(tuple(a[s // rb][t // cb] * b[s % rb][t % cb]
                       for t in range(ca * cb)) for s in range(ra * rb))


def _module_action(algebra, rep_matrices, p: Projection):
    """Action matrices rho(g) kron p on the module p-stacked-dim(rho) times."""
    out = []
    for rho in rep_matrices:
        blocks = tuple(_kron(rho, p.element.blocks[f])
                       for f in range(algebra.num_factors))
        out.append(AlgebraElement(algebra, la.shape(rho)[0], blocks))
    return out


def _random_module_rep(irreps: IrrepTable, rng: random.Random, max_dim: int):
    """Direct sum of irreps with total dimension within the cap."""
    chosen = []
    total = 0
    pool = [p for p in irreps.irreps if p.dim <= max_dim]
    chosen.append(rng.choice(pool))
    total = chosen[0].dim
    while total < max_dim and rng.random() < 0.5:
        more = [p for p in irreps.irreps if p.dim <= max_dim - total]
        if not more:
            break
        nxt = rng.choice(more)
        chosen.append(nxt)
        total += nxt.dim
    mats = []
    order = irreps.group.order
    for g in range(order):
        mats.append(la.block_diag(*[p.matrices[g] for p in chosen]))
    return mats, total


def _random_a_matrix(algebra, target_size, source_size, rng):
    blocks = []
    for r in algebra.block_dims:
        blocks.append(tuple(tuple(random_gaussian_rational(rng, span=1)
                                  for _ in range(source_size * r))
                            for _ in range(target_size * r)))
    return ModuleMap(algebra, target_size, source_size, tuple(blocks))


def random_ga_complex(algebra: MultiMatrixAlgebra, irreps: IrrepTable,
                      rng: random.Random, length: int = 3,
                      max_module_dim: int = 2) -> GAComplex:
    """A valid complex: representation-shaped modules, averaged equivariant
    differentials, and a kernel projection enforcing d o d = 0."""
    group = irreps.group
    length = max(1, length)
    modules = []
    actions = []  # per module, list over g
    for _ in range(length):
        rep, dim = _random_module_rep(irreps, rng, max_module_dim)
        p = random_projection(algebra, rng, nonzero=True)
        act = _module_action(algebra, rep, p)
        modules.append(Projection(act[group.identity]))
        actions.append(act)
    diffs = []
    for i in range(length - 1):
        raw = _random_a_matrix(algebra, modules[i].amplification,
                               modules[i + 1].amplification, rng)
        avg = ModuleMap.zero(algebra, raw.target_size, raw.source_size)
        for g in group.elements():
            term = ModuleMap.from_element(actions[i][g]).compose(raw).compose(
                ModuleMap.from_element(actions[i + 1][group.inverse(g)]))
            avg = avg + term
        avg = avg.scale(Fraction(1, group.order))
        if i >= 1:
            k = kernel_projection(diffs[i - 1], modules[i])
            avg = ModuleMap.from_element(k).compose(avg)
        diffs.append(avg)
    action_table = tuple(tuple(actions[j][g] for j in range(length))
                         for g in group.elements())
    return GAComplex(algebra, group, tuple(modules), tuple(diffs),
                     action_table)


def acyclic_augmentation(c: GAComplex, rng: random.Random) -> GAComplex:
    """c plus an equivariant acyclic two-term summand 0 -> M -> M -> 0."""
    if c.length < 2:
        raise ValidationError("need at least two modules to augment")
    p = random_projection(c.algebra, rng, nonzero=True)
    trivial_rep = [((Fraction(1),),) for _ in c.group.elements()]
    act = _module_action(c.algebra, trivial_rep, p)
    q = Projection(act[c.group.identity])
    modules = list(c.modules)
    diffs = list(c.diffs)
    actions = [list(row) for row in c.action]
    # append the summand to degrees 0 and 1 via direct sums
    new_modules = [modules[0].direct_sum(q), modules[1].direct_sum(q)] \
        + modules[2:]
    ident = ModuleMap.from_element(q.element)
    new_d0 = _direct_sum_maps(diffs[0], ident)
    new_diffs = [new_d0]
    if len(diffs) > 1:
        new_diffs.append(_pad_target_rows(diffs[1], q))
        new_diffs.extend(diffs[2:])
    new_action = []
    for g in c.group.elements():
        row = [
            _direct_sum_elements(actions[g][0], act[g]),
            _direct_sum_elements(actions[g][1], act[g]),
        ] + actions[g][2:]
        new_action.append(tuple(row))
    return GAComplex(c.algebra, c.group, tuple(new_modules), tuple(new_diffs),
                     tuple(new_action))


def _direct_sum_elements(a: AlgebraElement, b: AlgebraElement):
    return a.direct_sum(b)


def _direct_sum_maps(d: ModuleMap, e: ModuleMap) -> ModuleMap:
    return ModuleMap(d.algebra, d.target_size + e.target_size,
                     d.source_size + e.source_size,
                     tuple(la.block_diag(a, b)
                           for a, b in zip(d.blocks, e.blocks)))


def _pad_target_rows(d: ModuleMap, q: Projection) -> ModuleMap:
    """Extend the target of d by zero rows for an appended summand."""
    extra = q.amplification
    blocks = []
    for b, r in zip(d.blocks, d.algebra.block_dims):
        rows = list(b) + [tuple(Fraction(0) for _ in range(la.shape(b)[1]))
                          for _ in range(extra * r)]
        blocks.append(tuple(rows))
    return ModuleMap(d.algebra, d.target_size + extra, d.source_size,
                     tuple(blocks))
