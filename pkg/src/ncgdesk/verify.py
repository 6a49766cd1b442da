"""Seed-deterministic randomized verification batteries.

Each battery draws instances from the generators, evaluates both sides of
one theorem's identity, and reports pass counts plus reproducible failure
records.  All identities are checked exactly on the exact backend.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    AlgebraElement,
    BorelSetModel,
    MultiMatrixAlgebra,
    Projection,
    SpectralForm,
    check_hom_spectral_commute,
)
from .chern import T_cover, T_direct, verify_eta_vanishes, verify_th7, \
    verify_th8
from .cyclic import DecompositionRep, check_face_bound, check_trace_bound
from .errors import NcgError
from .generate import (
    random_exact_unitary,
    random_ga_complex,
    random_gaussian_rational,
    random_hom,
    random_n0class,
    random_normal,
    random_orthogonal_family,
    random_projection,
    random_spectrum,
)
from .lefschetz import IrrepTable, verify_th4, verify_th5
from .ngroup import (
    N0Class,
    evaluate_h_list,
    generator_g,
    generator_h,
    h_map,
    n_class,
    reduce_g_to_h,
    t_map,
    K0Class,
    K0TensorC,
)


@dataclass
class VerificationReport:
    theorem: str
    instances: int
    passes: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passes == self.instances

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "instances": self.instances,
                "passes": self.passes, "failures": self.failures}


def _small_algebras():
    return [MultiMatrixAlgebra((1,)), MultiMatrixAlgebra((2,)),
            MultiMatrixAlgebra((1, 1)), MultiMatrixAlgebra((1, 2))]


def _run(theorem, seed, count, one):
    rng = random.Random(seed)
    report = VerificationReport(theorem, count, 0)
    for i in range(count):
        try:
            ok, detail = one(rng)
        except NcgError as exc:
            ok, detail = False, {"error": str(exc)}
        if ok:
            report.passes += 1
        else:
            detail = dict(detail or {})
            detail["instance"] = i
            report.failures.append(detail)
    return report


# -- the group isomorphism --------------------------------------------------

def _realize_support(algebra, values_ranks):
    """Diagonal element whose class is the given finite map (needs ranks >= 0)."""
    k = algebra.num_factors
    per_factor_rows = [[] for _ in range(k)]
    for value, ranks in values_ranks:
        for i in range(k):
            per_factor_rows[i].extend([value] * ranks[i])
    m = max(1, max((len(rows) + algebra.block_dims[i] - 1)
                   // algebra.block_dims[i]
                   for i, rows in enumerate(per_factor_rows)))
    pairs = []
    dims = algebra.ambient_dims(m)
    used = [0] * k
    for value, ranks in values_ranks:
        blocks = []
        for i, d in enumerate(dims):
            start = used[i]
            diag = [Fraction(1) if start <= s < start + ranks[i] else Fraction(0)
                    for s in range(d)]
            used[i] += ranks[i]
            blocks.append(tuple(tuple(diag[s] if s == t else Fraction(0)
                                      for t in range(d)) for s in range(d)))
        pairs.append((value, Projection(AlgebraElement(algebra, m, tuple(blocks)))))
    return SpectralForm.from_pairs(algebra, m, tuple(pairs))


def battery_th1(seed: int, count: int) -> VerificationReport:
    algebras = _small_algebras() + [MultiMatrixAlgebra((3,))]

    def one(rng):
        algebra = rng.choice(algebras)
        # invariance under unitary conjugation
        a = random_normal(algebra, rng)
        u = AlgebraElement(algebra, a.amplification, tuple(
            random_exact_unitary(d, rng)
            for d in algebra.ambient_dims(a.amplification)))
        conj = SpectralForm.from_pairs(algebra, a.amplification, tuple(
            (v, Projection(u * p.element * u.star())) for v, p in a.pairs))
        if n_class(a) != n_class(conj):
            return False, {"check": "conjugation invariance"}
        # separation: moving an eigenvalue with support changes the class
        movable = [(i, v, p) for i, (v, p) in enumerate(a.pairs)
                   if any(p.rank_vector())]
        if movable:
            i0, v0, p0 = movable[0]
            taken = a.eigenvalues()
            shift = 1
            while any((v0 + Fraction(shift) - w).is_zero() for w in taken) \
                    or (v0 + Fraction(shift)).is_zero():
                shift += 1
            moved = list(a.pairs)
            moved[i0] = (v0 + Fraction(shift), p0)
            shifted = SpectralForm.from_pairs(algebra, a.amplification,
                                              tuple(moved))
            if n_class(a) == n_class(shifted):
                return False, {"check": "separation"}
        # surjectivity: realize a random finite map
        values = random_spectrum(rng, rng.randint(1, 4))
        wanted = [(v, tuple(rng.randint(0, 2) for _ in algebra.block_dims))
                  for v in values]
        wanted = [(v, r) for v, r in wanted if any(r)]
        realized = _realize_support(algebra, wanted)
        target = N0Class(algebra, tuple(
            (v, K0Class(r)) for v, r in wanted))
        if n_class(realized) != target:
            return False, {"check": "surjectivity"}
        return True, None

    return _run("th1", seed, count, one)


def battery_lem2(seed: int, count: int) -> VerificationReport:
    def one(rng):
        phi = random_hom(rng)
        a = random_normal(phi.source, rng)
        points = [v for v in a.eigenvalues() if rng.random() < 0.6]
        points.append(random_gaussian_rational(rng))
        e = BorelSetModel(tuple(p for p in points if not p.is_zero()))
        ok = check_hom_spectral_commute(phi, a, e)
        return ok, None if ok else {"hom": str(phi.multiplicities)}

    return _run("lem2", seed, count, one)


def battery_kernel_h(seed: int, count: int) -> VerificationReport:
    """h kills the pair generators, splits via t, and g reduces to h."""
    algebras = _small_algebras()

    def one(rng):
        algebra = rng.choice(algebras)
        p = random_projection(algebra, rng, nonzero=True)
        lam = random_gaussian_rational(rng)
        mu = random_gaussian_rational(rng)
        if not h_map(generator_h(lam, mu, p)).is_zero():
            return False, {"check": "h(generator) = 0"}
        v = K0TensorC(tuple(random_gaussian_rational(rng)
                            for _ in algebra.block_dims))
        if h_map(t_map(v, algebra=algebra)) != v:
            return False, {"check": "h o t = id"}
        n = rng.randint(1, 20)
        if lam.is_zero():
            lam = lam + Fraction(1)
        if evaluate_h_list(algebra, reduce_g_to_h(n, lam, p)) \
                != generator_g(n, lam, p):
            return False, {"check": "g reduces to h", "n": n}
        return True, None

    return _run("kernel_h", seed, count, one)


def battery_th2(seed: int, count: int, witness_every: int = 0) \
        -> VerificationReport:
    algebras = [MultiMatrixAlgebra((1,)), MultiMatrixAlgebra((1, 1))]

    def one(rng):
        algebra = rng.choice(algebras)
        want_witness = bool(witness_every) \
            and rng.random() < 1.0 / witness_every
        # witness route works in the amplified complex, so keep it small
        m = rng.randint(1, 2) if want_witness else rng.randint(1, 3)
        parts = rng.randint(1, 4)
        ps = random_orthogonal_family(algebra, rng, parts, m)
        report = verify_eta_vanishes(ps, 1, witness=want_witness)
        return report.ok, None if report.ok else {"m": m, "parts": parts}

    return _run("th2", seed, count, one)


def battery_th6(seed: int, count: int) -> VerificationReport:
    algebras = _small_algebras()

    def one(rng):
        algebra = rng.choice(algebras)
        gap = Fraction(1, 512) if rng.random() < 0.4 else None
        a = random_normal(algebra, rng, max_values=3, near_gap=gap)
        l = 1 if (max(algebra.block_dims) == 1 and rng.random() < 0.3) else 0
        direct = T_direct(a, l)
        lo = T_cover(a, l, policy="smallest")
        hi = T_cover(a, l, policy="largest")
        ok = lo == direct and hi == direct
        return ok, None if ok else {
            "spectrum": [str(v) for v in a.eigenvalues()], "l": l}

    return _run("th6", seed, count, one)


def battery_th7(seed: int, count: int) -> VerificationReport:
    algebras = _small_algebras()

    def one(rng):
        algebra = rng.choice(algebras)
        p = random_projection(algebra, rng)
        l = rng.randint(0, 1)
        ok = verify_th7(p, l)
        return ok, None if ok else {"ranks": p.rank_vector(), "l": l}

    return _run("th7", seed, count, one)


def battery_th8(seed: int, count: int) -> VerificationReport:
    algebras = _small_algebras()

    def one(rng):
        algebra = rng.choice(algebras)
        x = random_n0class(algebra, rng)
        l = rng.randint(0, 1) if max(algebra.block_dims) <= 2 else 0
        ok = verify_th8(x, l)
        return ok, None if ok else {"support": len(x.support), "l": l}

    return _run("th8", seed, count, one)


_TABLES = None


def _irrep_tables():
    global _TABLES
    if _TABLES is None:
        _TABLES = [IrrepTable.cyclic(2), IrrepTable.cyclic(3),
                   IrrepTable.symmetric_3()]
    return _TABLES


def battery_th4(seed: int, count: int) -> VerificationReport:
    algebras = [MultiMatrixAlgebra((1, 1)), MultiMatrixAlgebra((2,))]

    def one(rng):
        table = rng.choice(_irrep_tables())
        algebra = rng.choice(algebras)
        c = random_ga_complex(algebra, table, rng, length=rng.randint(1, 3))
        g = rng.randrange(table.group.order)
        ok = verify_th4(c, g, table)
        return ok, None if ok else {"group": table.group.order, "g": g}

    return _run("th4", seed, count, one)


def battery_th5(seed: int, count: int) -> VerificationReport:
    algebras = [MultiMatrixAlgebra((1, 1)), MultiMatrixAlgebra((2,))]

    def one(rng):
        table = rng.choice(_irrep_tables())
        algebra = rng.choice(algebras)
        c = random_ga_complex(algebra, table, rng, length=rng.randint(1, 3))
        g = rng.randrange(table.group.order)
        ok = verify_th5(c, g, table, 0)
        return ok, None if ok else {"group": table.group.order, "g": g}

    return _run("th5", seed, count, one)


def battery_norm_bounds(seed: int, count: int) -> VerificationReport:
    """Representative-level continuity bounds for faces and the trace."""
    def one(rng):
        algebra = MultiMatrixAlgebra((rng.randint(1, 2),))
        m = rng.randint(1, 2)
        n = rng.randint(1, 2)
        summands = []
        for _ in range(rng.randint(1, 2)):
            summands.append(tuple(
                AlgebraElement(algebra, m, tuple(
                    tuple(tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                                for _ in range(d)) for _ in range(d))
                    for d in algebra.ambient_dims(m)))
                for _ in range(n + 1)))
        rep = DecompositionRep(tuple(summands))
        for i in range(n + 1):
            if not check_face_bound(rep, i):
                return False, {"check": f"face {i}"}
        if not check_trace_bound(rep):
            return False, {"check": "trace"}
        return True, None

    return _run("norm_bounds", seed, count, one)


BATTERIES = {
    "th1": battery_th1,
    "lem2": battery_lem2,
    "kernel_h": battery_kernel_h,
    "th2": battery_th2,
    "th4": battery_th4,
    "th5": battery_th5,
    "th6": battery_th6,
    "th7": battery_th7,
    "th8": battery_th8,
    "norm_bounds": battery_norm_bounds,
}


def run_batteries(names, seed: int, count: int):
    reports = []
    for name in names:
        if name not in BATTERIES:
            raise KeyError(name)
        reports.append(BATTERIES[name](seed, count))
    return reports
