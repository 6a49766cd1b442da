"""Acceptance gate: eleven timed end-to-end criteria.

Each test prints one pass/fail line.  Tolerances are exact unless the
criterion states a float tolerance; time limits are asserted.
"""

import itertools
import random
import time
from fractions import Fraction

from ncgdesk import linalg as la
from ncgdesk.algebra import (
    AlgebraElement,
    BorelSetModel,
    MultiMatrixAlgebra,
    Projection,
    check_hom_spectral_commute,
)
from ncgdesk.chern import verify_eta_vanishes, verify_th8
from ncgdesk.cyclic import TensorElement, hc_class, hc_dims, hc_space, \
    trace_map
from ncgdesk.generate import (
    acyclic_augmentation,
    random_ga_complex,
    random_gaussian_rational,
    random_hom,
    random_n0class,
    random_normal,
    random_orthogonal_family,
    random_projection,
)
from ncgdesk.lefschetz import (
    IrrepTable,
    generalized_lefschetz,
    lefschetz_first,
    lefschetz_second,
    verify_th4,
    verify_th5,
)
from ncgdesk.ngroup import N0Class
from ncgdesk.scalars import scalar_is_zero
from ncgdesk.verify import (
    battery_norm_bounds,
    battery_th1,
    battery_th2,
    battery_th6,
    battery_th7,
)

C = MultiMatrixAlgebra((1,))
CC2 = MultiMatrixAlgebra((1, 1))
M2 = MultiMatrixAlgebra((2,))


def _report(name, ok, elapsed, limit):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    print(f"{status} {name}: {elapsed:.2f}s (limit {limit}s)")
    assert ok
    assert elapsed < limit


def test_acceptance_01_class_map_isomorphism():
    start = time.monotonic()
    report = battery_th1(101, 200)
    _report("1 class-map isomorphism (200 elements)",
            report.ok, time.monotonic() - start, 10)


def test_acceptance_02_spectral_projections_commute_with_homs():
    start = time.monotonic()
    rng = random.Random(102)
    ok = True
    for _ in range(200):
        phi = random_hom(rng, max_factors=3)
        a = random_normal(phi.source, rng)
        points = [v for v in a.eigenvalues() if rng.random() < 0.6]
        points.append(random_gaussian_rational(rng))
        e = BorelSetModel(tuple(p for p in points if not p.is_zero()))
        ok = ok and check_hom_spectral_commute(phi, a, e)
    _report("2 homomorphisms vs spectral projections (200 triples)",
            ok, time.monotonic() - start, 10)


def test_acceptance_03_kernel_of_h():
    from ncgdesk.ngroup import (
        K0TensorC, evaluate_h_list, generator_g, generator_h, h_map,
        reduce_g_to_h, t_map)
    start = time.monotonic()
    rng = random.Random(103)
    A = MultiMatrixAlgebra((1, 2))
    ok = True
    for _ in range(200):
        p = random_projection(A, rng, nonzero=True)
        lam = random_gaussian_rational(rng)
        mu = random_gaussian_rational(rng)
        ok = ok and h_map(generator_h(lam, mu, p)).is_zero()
    for _ in range(200):
        v = K0TensorC(tuple(random_gaussian_rational(rng)
                            for _ in A.block_dims))
        ok = ok and h_map(t_map(v, algebra=A)) == v
    p = random_projection(A, rng, nonzero=True)
    lam = random_gaussian_rational(rng) + Fraction(7)
    for n in range(1, 21):
        ok = ok and evaluate_h_list(A, reduce_g_to_h(n, lam, p)) \
            == generator_g(n, lam, p)
    _report("3 kernel of h: 200 generators, 200 sections, stacks to n=20",
            ok, time.monotonic() - start, 10)


# -- criterion 4: independent dense oracle over the full tensor space -------

def _dense_homology_dims(algebra, max_degree):
    """Rank-nullity over A^(x(n+1)) without any orbit reduction."""
    units = [(j, a, b) for j, r in enumerate(algebra.block_dims)
             for a in range(r) for b in range(r)]
    dim = len(units)

    def basis(n):
        return list(itertools.product(range(dim), repeat=n + 1))

    def one_minus_tau(n):
        keys = basis(n)
        idx = {k: i for i, k in enumerate(keys)}
        sign = -1 if n % 2 else 1
        cols = []
        for k in keys:
            col = [Fraction(0)] * len(keys)
            col[idx[k]] += 1
            col[idx[k[-1:] + k[:-1]]] -= sign
            cols.append(tuple(col))
        return cols

    def mul(i, j):
        (f1, a, b), (f2, c, d) = units[i], units[j]
        if f1 != f2 or b != c:
            return None
        return units.index((f1, a, d))

    def boundary(n):
        keys = basis(n)
        target = {k: i for i, k in enumerate(basis(n - 1))}
        cols = []
        for k in keys:
            col = [Fraction(0)] * len(target)
            for i in range(n + 1):
                if i < n:
                    u = mul(k[i], k[i + 1])
                    if u is None:
                        continue
                    nk = k[:i] + (u,) + k[i + 2:]
                else:
                    u = mul(k[n], k[0])
                    if u is None:
                        continue
                    nk = (u,) + k[1:n]
                col[target[nk]] += 1 if i % 2 == 0 else -1
            cols.append(tuple(col))
        return cols

    def rank_of(cols):
        if not cols or not cols[0]:
            return 0
        return la.rank(la.from_columns(cols))

    dims = []
    tau_rank = {n: rank_of(one_minus_tau(n)) for n in range(max_degree + 2)}
    for n in range(max_degree + 1):
        cc_n = dim ** (n + 1) - tau_rank[n]
        b_next = boundary(n + 1)
        image = rank_of(b_next + one_minus_tau(n)) - tau_rank[n]
        if n == 0:
            kernel = cc_n
        else:
            induced = rank_of(boundary(n) + one_minus_tau(n - 1)) \
                - tau_rank[n - 1]
            kernel = cc_n - induced
        dims.append(kernel - image)
    return dims


def test_acceptance_04_cyclic_homology_dimensions():
    start = time.monotonic()
    ok = True
    for algebra, max_degree, expected in (
            (C, 4, [1, 0, 1, 0, 1]), (M2, 2, [1, 0, 1])):
        production = hc_dims(algebra, max_degree)
        oracle = _dense_homology_dims(algebra, max_degree)
        ok = ok and production == oracle == expected
    _report("4 cyclic homology dims vs dense full-space oracle",
            ok, time.monotonic() - start, 120)


def test_acceptance_05_trace_isomorphism():
    start = time.monotonic()
    rng = random.Random(105)
    ok = True
    for algebra in (C, CC2):
        for n in (0, 1, 2):
            amp = hc_space(algebra, n, amplification=2)
            base = hc_space(algebra, n)
            ok = ok and amp.dimension == base.dimension  # square
            if amp.dimension == 0:
                continue
            # assemble the induced matrix from spanning cycle samples
            d = amp.dimension
            samples = []
            for _ in range(24):
                p = random_projection(algebra, rng, m=2)
                xi = TensorElement.from_summand((p.element,) * (n + 1))
                samples.append((hc_class(xi).coords,
                                hc_class(trace_map(xi)).coords))
                ups = la.from_columns([list(u) for u, _ in samples], d)
                if la.rank(ups) == d:
                    break
            ups = [list(u) for u, _ in samples]
            downs = [list(v) for _, v in samples]
            u_mat = la.from_columns(ups, d)
            ok = ok and la.rank(u_mat) == d
            pivots = list(la.pivot_columns(u_mat))[:d]
            u_sub = la.from_columns([ups[i] for i in pivots], d)
            d_sub = la.from_columns([downs[i] for i in pivots], d)
            induced = la.mat_mul(d_sub, la.invert(u_sub))
            # consistency on every sample, then invertibility
            for u, v in samples:
                image = la.mat_mul(induced, la.from_columns([list(u)], d))
                ok = ok and la.mat_equal(image, la.from_columns([list(v)], d))
            ok = ok and la.rank(induced) == d
            la.invert(induced)
    _report("5 trace map induces square invertible matrices (n <= 2, r = 2)",
            ok, time.monotonic() - start, 60)


def test_acceptance_06_projective_norm_bounds():
    start = time.monotonic()
    report = battery_norm_bounds(106, 500)
    _report("6 face/trace continuity bounds (500 samples, tol 1e-9)",
            report.ok, time.monotonic() - start, 30)


def test_acceptance_07_obstruction_vanishes():
    start = time.monotonic()
    report = battery_th2(107, 100)
    ok = report.ok
    rng = random.Random(1070)
    witnesses = 0
    while witnesses < 10:
        ps = random_orthogonal_family(C, rng, 2, m=2)
        if any(p.element.is_zero() for p in ps):
            continue
        out = verify_eta_vanishes(ps, 1, witness=True)
        ok = ok and out.ok and (out.trivial or out.witness_found)
        witnesses += 1
    _report("7 obstruction class vanishes (100 families + 10 witnesses)",
            ok, time.monotonic() - start, 120)


def test_acceptance_08_cover_refinement():
    start = time.monotonic()
    report = battery_th6(108, 100)
    _report("8 cover-refined extension equals direct (100 spectra)",
            report.ok, time.monotonic() - start, 60)


def test_acceptance_09_commuting_squares():
    start = time.monotonic()
    ok = battery_th7(109, 200).ok
    rng = random.Random(1090)
    for _ in range(200):
        ok = ok and verify_th8(random_n0class(CC2, rng), 0)
    _report("9 character commuting squares (200 + 200)",
            ok, time.monotonic() - start, 60)


def test_acceptance_10_equivariant_lefschetz():
    start = time.monotonic()
    tables = [IrrepTable.cyclic(2), IrrepTable.cyclic(3),
              IrrepTable.symmetric_3()]
    rng = random.Random(110)
    ok = True
    for _ in range(50):
        table = rng.choice(tables)
        c = random_ga_complex(rng.choice([CC2, M2]), table, rng,
                              length=rng.randint(1, 3))
        g = rng.randrange(table.group.order)
        ok = ok and verify_th4(c, g, table) and verify_th5(c, g, table, 0)
    for _ in range(25):
        table = rng.choice(tables)
        c = random_ga_complex(CC2, table, rng, length=rng.randint(2, 3))
        aug = acyclic_augmentation(c, rng)
        g = rng.randrange(table.group.order)
        ok = ok and lefschetz_first(c, g, table) \
            == lefschetz_first(aug, g, table)
        ok = ok and generalized_lefschetz(c, c.unitary(g)).value \
            == generalized_lefschetz(aug, aug.unitary(g)).value
        ok = ok and lefschetz_second(c, g, table, 0) \
            == lefschetz_second(aug, g, table, 0)
    _report("10 equivariant Lefschetz collapses (50 + 25 augmented)",
            ok, time.monotonic() - start, 300)


def test_acceptance_11_cancellation_semigroup():
    start = time.monotonic()
    rng = random.Random(111)
    A = MultiMatrixAlgebra((1, 2))
    ok = True
    for _ in range(500):
        x = random_n0class(A, rng)
        y = random_n0class(A, rng)
        z = random_n0class(A, rng)
        ok = ok and (x + y) + z == x + (y + z)
        ok = ok and x + y == y + x
        ok = ok and x + N0Class.zero(A) == x
        ok = ok and (x - x).is_zero()
        ok = ok and (x + z == y + z) == (x == y)
    _report("11 cancellation and group laws (500 triples)",
            ok, time.monotonic() - start, 5)
