"""Scalar backends.

Two kinds of scalars flow through the package:

* exact scalars -- elements of cyclotomic fields Q(zeta_n), represented by
  :class:`Cyclotomic`.  Gaussian rationals live in Q(zeta_4); roots of unity
  of any small order are exact, which is what the Lefschetz machinery needs.
* float scalars -- plain Python ``complex``, compared against a global
  tolerance (default 1e-9).

Plain ``int`` / ``Fraction`` values interoperate with :class:`Cyclotomic`
through the usual arithmetic operators, so exact matrices may freely store
rationals without wrapping.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

_EPSILON = 1e-9


def get_epsilon() -> float:
    return _EPSILON


def set_epsilon(eps: float) -> None:
    global _EPSILON
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    _EPSILON = eps


# ---------------------------------------------------------------------------
# polynomial helpers over Fraction (coefficients low -> high)

def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    # b has nonzero leading coefficient
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        if not a[-1]:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] / lead
        q[shift] = coef
        for i, y in enumerate(b):
            a[shift + i] -= coef * y
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_mod(a, m):
    return _poly_divmod(a, m)[1]


@lru_cache(maxsize=None)
def _totient(n: int) -> int:
    phi, d, m = 1, 2, n
    while d * d <= m:
        if m % d == 0:
            phi *= d - 1
            m //= d
            while m % d == 0:
                phi *= d
                m //= d
        d += 1
    if m > 1:
        phi *= m - 1
    return phi


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int):
    """Coefficients (low -> high) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (Fraction(-1), Fraction(1))
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not rem
    return tuple(num)


@lru_cache(maxsize=None)
def _divisors(n: int):
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def _embedded_basis(n: int, d: int):
    """Canonical coordinates (at order n) of zeta_d^j for j < phi(d)."""
    phi_n = _totient(n)
    mod = list(cyclotomic_poly(n))
    step = n // d
    vecs = []
    for j in range(_totient(d)):
        poly = [Fraction(0)] * (step * j) + [Fraction(1)]
        poly = _poly_mod(poly, mod)
        vecs.append(tuple(poly + [Fraction(0)] * (phi_n - len(poly))))
    return tuple(vecs)


def _solve_in_span(vecs, target):
    """Express target as a rational combination of vecs, or return None."""
    if not vecs:
        return None
    ncols = len(vecs)
    rows = len(target)
    aug = [[vecs[c][r] for c in range(ncols)] + [target[r]] for r in range(rows)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][c]
        aug[r] = [x / inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    # consistency: rows past rank must have zero RHS
    for i in range(r, rows):
        if aug[i][ncols]:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][ncols]
    # verify (free columns may make the system underdetermined; basis vecs
    # are independent in our usage so this always checks out)
    for r_ in range(rows):
        acc = sum((vecs[c][r_] * sol[c] for c in range(ncols)), Fraction(0))
        if acc != target[r_]:
            return None
    return sol


class Cyclotomic:
    """Exact element of Q(zeta_n), normalized to its minimal cyclotomic field.

    ``order == 1`` means a plain rational; ``order == 4`` covers the Gaussian
    rationals.  Values are immutable and hashable.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs, _normalized=False):
        if _normalized:
            object.__setattr__(self, "order", order)
            object.__setattr__(self, "coeffs", coeffs)
            return
        poly = _poly_mod([Fraction(c) for c in coeffs], list(cyclotomic_poly(order)))
        phi = _totient(order)
        vec = tuple(poly + [Fraction(0)] * (phi - len(poly)))
        o, v = _minimalize(order, vec)
        object.__setattr__(self, "order", o)
        object.__setattr__(self, "coeffs", v)

    def __setattr__(self, *a):  # immutability
        raise AttributeError("Cyclotomic is immutable")

    # -- constructors -------------------------------------------------------
    @staticmethod
    def from_rational(q) -> "Cyclotomic":
        return Cyclotomic(1, (Fraction(q),), _normalized=True)

    @staticmethod
    def gaussian(re, im) -> "Cyclotomic":
        re, im = Fraction(re), Fraction(im)
        if not im:
            return Cyclotomic.from_rational(re)
        return Cyclotomic(4, (re, im))

    @staticmethod
    def root_of_unity(n: int, k: int = 1) -> "Cyclotomic":
        k %= n
        poly = [Fraction(0)] * k + [Fraction(1)]
        return Cyclotomic(n, poly)

    # -- ring/field structure ----------------------------------------------
    def _promoted(self, n):
        """Coefficient vector at order n (self.order | n), reduced mod Phi_n."""
        if n == self.order:
            return list(self.coeffs)
        step = n // self.order
        poly = [Fraction(0)] * (_totient(self.order) * step)
        for j, c in enumerate(self.coeffs):
            poly[step * j] = c
        return _poly_mod(poly, list(cyclotomic_poly(n)))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return Cyclotomic(1, (self.coeffs[0] + other.coeffs[0],), _normalized=True)
        if self.order == 4 and other.order == 4:
            re = self.coeffs[0] + other.coeffs[0]
            im = self.coeffs[1] + other.coeffs[1]
            if not im:
                return Cyclotomic(1, (re,), _normalized=True)
            return Cyclotomic(4, (re, im), _normalized=True)
        if {self.order, other.order} == {1, 4}:
            g, q = (self, other) if self.order == 4 else (other, self)
            return Cyclotomic(4, (g.coeffs[0] + q.coeffs[0], g.coeffs[1]),
                              _normalized=True)
        n = _lcm(self.order, other.order)
        a, b = self._promoted(n), other._promoted(n)
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Cyclotomic(n, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-c for c in self.coeffs), _normalized=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return Cyclotomic(1, (self.coeffs[0] * other.coeffs[0],), _normalized=True)
        if self.order == 1:
            q = self.coeffs[0]
            return Cyclotomic(other.order, tuple(q * c for c in other.coeffs),
                              _normalized=True) if q else _ZERO
        if other.order == 1:
            q = other.coeffs[0]
            return Cyclotomic(self.order, tuple(q * c for c in self.coeffs),
                              _normalized=True) if q else _ZERO
        if self.order == 4 and other.order == 4:
            a, b = self.coeffs
            c, d = other.coeffs
            re, im = a * c - b * d, a * d + b * c
            if not im:
                return Cyclotomic(1, (re,), _normalized=True)
            return Cyclotomic(4, (re, im), _normalized=True)
        n = _lcm(self.order, other.order)
        prod = _poly_mul(self._promoted(n), other._promoted(n))
        return Cyclotomic(n, prod or [Fraction(0)])

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if self.order == 1:
            return Cyclotomic(1, (1 / self.coeffs[0],), _normalized=True)
        # extended Euclid: u*self + v*Phi_n = 1
        mod = list(cyclotomic_poly(self.order))
        a, b = list(self.coeffs), mod
        u0, u1 = [Fraction(1)], []
        while b:
            q, r = _poly_divmod(a, b)
            a, b = b, r
            u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1))
        # a is now the gcd (a nonzero constant, since Phi_n is irreducible)
        c = a[0]
        inv = [x / c for x in u0]
        return Cyclotomic(self.order, _poly_mod(inv, mod))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = _ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Cyclotomic":
        if self.order <= 2:
            return self
        if self.order == 4:
            return Cyclotomic(4, (self.coeffs[0], -self.coeffs[1]),
                              _normalized=True)
        n = self.order
        mod = list(cyclotomic_poly(n))
        out = [Fraction(0)]
        for j, c in enumerate(self.coeffs):
            if c:
                term = [Fraction(0)] * ((n - 1) * j) + [c]
                out = _poly_add(out, _poly_mod(term, mod))
        return Cyclotomic(n, out or [Fraction(0)])

    # -- predicates / views -------------------------------------------------
    def is_zero(self) -> bool:
        return self.order == 1 and not self.coeffs[0]

    def is_rational(self) -> bool:
        return self.order == 1

    def rational_value(self) -> Fraction:
        if self.order != 1:
            raise ValueError("not a rational scalar")
        return self.coeffs[0]

    def is_gaussian(self) -> bool:
        return self.order in (1, 2, 4)

    def gaussian_parts(self):
        """(re, im) as Fractions; only valid for Gaussian rationals."""
        if self.order == 1:
            return self.coeffs[0], Fraction(0)
        if self.order == 4:
            return self.coeffs[0], self.coeffs[1]
        raise ValueError("scalar is not a Gaussian rational")

    def real_part(self) -> "Cyclotomic":
        return (self + self.conjugate()) * Fraction(1, 2)

    def imag_part(self) -> "Cyclotomic":
        return (self - self.conjugate()) * Cyclotomic.gaussian(0, Fraction(-1, 2))

    def __complex__(self):
        z = cmath.exp(2j * math.pi / self.order)
        acc = 0j
        p = 1 + 0j
        for c in self.coeffs:
            acc += float(c) * p
            p *= z
        return acc

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.order == 1:
            return f"Cyc({self.coeffs[0]})"
        if self.order == 4:
            return f"Cyc({self.coeffs[0]}+{self.coeffs[1]}i)"
        return f"Cyc(order={self.order}, coeffs={self.coeffs})"


def _poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _poly_trim(out)


def _poly_sub(a, b):
    return _poly_add(a, [-c for c in b])


def _lcm(a, b):
    return a * b // math.gcd(a, b)


@lru_cache(maxsize=4096)
def _minimalize_cached(order, vec):
    for d in _divisors(order):
        if d == order:
            break
        basis = _embedded_basis(order, d)
        sol = _solve_in_span(basis, vec)
        if sol is not None:
            return _minimalize_cached(d, tuple(sol))
    return order, vec


def _minimalize(order, vec):
    if order == 1:
        return 1, vec
    return _minimalize_cached(order, vec)


def _coerce(x):
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic(1, (Fraction(x),), _normalized=True)
    return NotImplemented


_ZERO = Cyclotomic.from_rational(0)
_ONE = Cyclotomic.from_rational(1)


# ---------------------------------------------------------------------------
# generic scalar helpers (exact Cyclotomic/Fraction/int vs float complex)

def is_exact_scalar(x) -> bool:
    return isinstance(x, (Cyclotomic, Fraction, int))


def ensure_exact(x) -> Cyclotomic:
    c = _coerce(x)
    if c is NotImplemented:
        raise TypeError(f"not an exact scalar: {x!r}")
    return c


def to_complex(x) -> complex:
    if isinstance(x, Cyclotomic):
        return complex(x)
    return complex(x)


def conj_scalar(x):
    if isinstance(x, Cyclotomic):
        return x.conjugate()
    if isinstance(x, (int, Fraction)):
        return x
    return complex(x).conjugate()


def scalar_is_zero(x, eps: float | None = None) -> bool:
    if isinstance(x, Cyclotomic):
        return x.is_zero()
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(complex(x)) <= (eps if eps is not None else _EPSILON)


def scalars_equal(x, y, eps: float | None = None) -> bool:
    if is_exact_scalar(x) and is_exact_scalar(y):
        return ensure_exact(x) == ensure_exact(y)
    return abs(to_complex(x) - to_complex(y)) <= (eps if eps is not None else _EPSILON)


def sort_key(x):
    """Deterministic (re, im)-lexicographic key; works for both backends."""
    z = to_complex(x)
    tie = repr(x) if isinstance(x, Cyclotomic) else ""
    return (round(z.real, 12), round(z.imag, 12), tie)


# ---------------------------------------------------------------------------
# JSON-facing parse/format: numbers are floats, strings "p/q" are exact

def parse_real(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    return float(v)


def parse_scalar(v):
    """[re, im] pair or bare number -> exact or float scalar."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"scalar pair must have two entries: {v!r}")
        re, im = parse_real(v[0]), parse_real(v[1])
        if isinstance(re, Fraction) and isinstance(im, Fraction):
            return Cyclotomic.gaussian(re, im)
        return complex(float(re), float(im))
    if isinstance(v, dict):
        order = int(v["order"])
        coeffs = [Fraction(c) for c in v["coeffs"]]
        return Cyclotomic(order, coeffs)
    re = parse_real(v)
    if isinstance(re, Fraction):
        return Cyclotomic.from_rational(re)
    return complex(re)


def format_scalar(x):
    if isinstance(x, (int, Fraction)):
        x = ensure_exact(x)
    if isinstance(x, Cyclotomic):
        if x.is_gaussian():
            re, im = x.gaussian_parts()
            return [str(re), str(im)]
        return {"order": x.order, "coeffs": [str(c) for c in x.coeffs]}
    z = complex(x)
    return [z.real, z.imag]
