"""Exact arithmetic in imaginary quadratic fields of class number one.

Field elements are pairs of Fractions over the ring basis (1, w) with
w = (d + sqrt(d))/2, so norms, traces, sector tests, divisibility, and
lattice-point counts are all exact rational arithmetic; floats appear only
in the complex embedding.  The rational field is included as a degenerate
case (sentinel d = 1) so callers can treat the real and complex settings
uniformly.

Supported fields, by discriminant d: Q (d = 1 sentinel), Q(i) (-4),
Q(sqrt-3) (-3), Q(sqrt-7) (-7), Q(sqrt-8) (-8, i.e. Q(sqrt(-2))),
Q(sqrt-11) (-11).  All five quadratic fields are norm-Euclidean with
respect to the nearest-lattice-point division implemented here (worst-case
remainder ratio 1/4 + |d|/16 <= 15/16 < 1), which makes the gcd a genuine
Euclidean algorithm.

Conventions:
  * w satisfies w^2 - d w + (d^2-d)/4 = 0; conj(a + b w) = (a + b d) - b w.
  * N(a + b w) = a^2 + a b d + b^2 (d^2-d)/4 >= 0 for quadratic fields;
    for Q the "norm" of an element is the element itself (signed).
  * sqrt(d) = 2w - d embeds as i*sqrt(|d|) (upper half plane).
  * The different is (sqrt d), of norm |d|; the dual lattice O' = O/sqrt(d)
    consists of elements with b-denominator dividing |d|.  Q has O' = Z.
  * Canonical generators of principal ideals sit in the half-open sector
    arg in [0, 2*pi/w_F); the sector test is exact (no floats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import DomainError

__all__ = [
    "FieldSpec",
    "AlgebraicNumber",
    "PrincipalIdeal",
    "field_by_name",
    "FIELDS",
    "kronecker_symbol",
    "enumerate_ideals",
    "divisors",
    "tau",
    "tau_s",
    "moebius",
    "gcd_ideal",
    "dual_elements_in_disc",
    "count_lattice_in_rect",
    "prime_ideals_above",
    "factor_ideal",
]


# ---------------------------------------------------------------------------
# field specifications


@dataclass(frozen=True)
class FieldSpec:
    """An imaginary quadratic field of class number one, or Q.

    Attributes:
        name: canonical display name, e.g. "Q(i)".
        discriminant: field discriminant d < 0, or the sentinel 1 for Q.
        degree: 1 for Q, 2 otherwise.
        unit_count: number of roots of unity w_F (2, 4, or 6).
    """

    name: str
    discriminant: int
    degree: int
    unit_count: int

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def abs_disc(self) -> int:
        return abs(self.discriminant) if not self.is_rational else 1

    # (d^2 - d)/4: the constant term of the minimal polynomial of w.
    @property
    def _omega_const(self) -> int:
        d = self.discriminant
        return (d * d - d) // 4

    def one(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, Fraction(1), Fraction(0))

    def zero(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, Fraction(0), Fraction(0))

    def omega(self) -> "AlgebraicNumber":
        if self.is_rational:
            raise DomainError("Q has no quadratic generator")
        return AlgebraicNumber(self, Fraction(0), Fraction(1))

    def sqrt_disc(self) -> "AlgebraicNumber":
        """sqrt(d) = 2w - d, the standard generator of the different."""
        if self.is_rational:
            return self.one()
        return AlgebraicNumber(self, Fraction(-self.discriminant), Fraction(2))

    def element(self, a, b=0) -> "AlgebraicNumber":
        return AlgebraicNumber(self, Fraction(a), Fraction(b))

    def from_sqrt_basis(self, x, y=0) -> "AlgebraicNumber":
        """The element x + y*sqrt(d) with rational x, y."""
        x, y = Fraction(x), Fraction(y)
        if self.is_rational:
            if y:
                raise DomainError("Q has no imaginary part")
            return AlgebraicNumber(self, x, Fraction(0))
        return AlgebraicNumber(self, x - y * self.discriminant, 2 * y)

    def units(self) -> tuple["AlgebraicNumber", ...]:
        """Roots of unity, starting at 1, in counterclockwise order."""
        return _UNITS[self.name]

    def __repr__(self) -> str:  # keep reprs short in test output
        return f"FieldSpec({self.name})"


def _make_fields() -> dict[str, FieldSpec]:
    specs = [
        FieldSpec("Q", 1, 1, 2),
        FieldSpec("Q(i)", -4, 2, 4),
        FieldSpec("Q(sqrt-3)", -3, 2, 6),
        FieldSpec("Q(sqrt-7)", -7, 2, 2),
        FieldSpec("Q(sqrt-8)", -8, 2, 2),
        FieldSpec("Q(sqrt-11)", -11, 2, 2),
    ]
    return {s.name: s for s in specs}


FIELDS: dict[str, FieldSpec] = _make_fields()

_ALIASES = {
    "q": "Q",
    "qq": "Q",
    "q(i)": "Q(i)",
    "qi": "Q(i)",
    "q(sqrt-1)": "Q(i)",
    "q(sqrt-4)": "Q(i)",
    "q(sqrt-3)": "Q(sqrt-3)",
    "q(sqrt-7)": "Q(sqrt-7)",
    "q(sqrt-2)": "Q(sqrt-8)",
    "q(sqrt-8)": "Q(sqrt-8)",
    "q(sqrt-11)": "Q(sqrt-11)",
}


def field_by_name(name: str) -> FieldSpec:
    """Look up a field by name; accepts aliases like "Qi", "Q(sqrt-2)"."""
    key = name.strip().lower().replace(" ", "")
    if key not in _ALIASES:
        raise DomainError(
            f"unknown field {name!r}; expected one of {sorted(set(_ALIASES.values()))}"
        )
    return FIELDS[_ALIASES[key]]


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class AlgebraicNumber:
    """An element a + b*w of F (or a rational, with b = 0, for F = Q).

    Arithmetic is exact over Fraction coordinates.  Fractional coordinates
    are allowed: elements of the dual lattice O' = O/sqrt(d) and quotients
    a/c both live here.
    """

    field: FieldSpec
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.field.is_rational and self.b:
            raise DomainError("elements of Q must have b = 0")

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "AlgebraicNumber") -> None:
        if self.field is not other.field:
            raise DomainError(f"mixed fields {self.field.name} / {other.field.name}")

    def __add__(self, other):
        other = self._coerce(other)
        return AlgebraicNumber(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self._coerce(other)
        return AlgebraicNumber(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return AlgebraicNumber(self.field, -self.a, -self.b)

    def __mul__(self, other):
        other = self._coerce(other)
        # w^2 = d w - (d^2-d)/4
        d = self.field.discriminant
        c = self.field._omega_const
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return AlgebraicNumber(
            self.field, a1 * a2 - c * b1 * b2, a1 * b2 + a2 * b1 + d * b1 * b2
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __truediv__(self, other):
        other = self._coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        if self.field.is_rational:
            return AlgebraicNumber(self.field, self.a / other.a, Fraction(0))
        num = self * other.conj()
        return AlgebraicNumber(self.field, num.a / n, num.b / n)

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            self._check(other)
            return other
        return AlgebraicNumber(self.field, Fraction(other), Fraction(0))

    # -- field structure ----------------------------------------------------

    def conj(self) -> "AlgebraicNumber":
        if self.field.is_rational:
            return self
        return AlgebraicNumber(self.field, self.a + self.b * self.field.discriminant, -self.b)

    def norm(self) -> Fraction:
        """Field norm N(x).  Signed for Q; >= 0 for quadratic fields."""
        if self.field.is_rational:
            return self.a
        d = self.field.discriminant
        return self.a * self.a + self.a * self.b * d + self.b * self.b * self.field._omega_const

    def trace(self) -> Fraction:
        if self.field.is_rational:
            return self.a
        return 2 * self.a + self.b * self.field.discriminant

    def abs2(self) -> Fraction:
        """|embedding|^2, exactly.  Equals N(x) for quadratic fields, x^2 for Q."""
        if self.field.is_rational:
            return self.a * self.a
        return self.norm()

    def embed(self):
        """Complex embedding into the upper-half-plane convention
        sqrt(d) -> i sqrt(|d|).  Returns float for Q, complex otherwise."""
        if self.field.is_rational:
            return float(self.a)
        d = self.field.discriminant
        re = float(self.a) + float(self.b) * d / 2.0
        im = float(self.b) * math.sqrt(-d) / 2.0
        return complex(re, im)

    def to_sqrt_basis(self) -> tuple[Fraction, Fraction]:
        """(x, y) with self = x + y*sqrt(d).  (0-valued y for Q.)"""
        if self.field.is_rational:
            return self.a, Fraction(0)
        return self.a + self.b * self.field.discriminant / 2, self.b / 2

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def key(self) -> tuple:
        """Deterministic sort key: (|embedding|^2, a, b), all exact."""
        return (self.abs2(), self.a, self.b)

    def __repr__(self) -> str:
        if self.field.is_rational or not self.b:
            return f"{self.a}"
        return f"({self.a}{'+' if self.b >= 0 else ''}{self.b}w)"


# Roots of unity per field.  zeta_6 = 2 + w for d = -3; i = 2 + w for d = -4.
def _build_units() -> dict[str, tuple[AlgebraicNumber, ...]]:
    out: dict[str, tuple[AlgebraicNumber, ...]] = {}
    for name, spec in FIELDS.items():
        one = spec.one()
        if spec.unit_count == 2:
            out[name] = (one, -one)
        else:
            zeta = spec.element(2, 1)
            us = [one]
            for _ in range(spec.unit_count - 1):
                us.append(us[-1] * zeta)
            out[name] = tuple(us)
    return out


_UNITS = _build_units()


# ---------------------------------------------------------------------------
# canonical representatives and ideals


def _in_sector(x: AlgebraicNumber) -> bool:
    """Exact test for arg(x) in [0, 2*pi/w_F), x != 0.

    With Re = a + b d/2 and sign(Im) = sign(b), the three sectors reduce to
    rational inequalities:
      w = 2: upper half plane plus positive real axis;
      w = 4: open right half of the closed upper quadrant (Re > 0, Im >= 0);
      w = 6: Im >= 0 and arg < pi/3, i.e. b >= 0 and a > 2b.
    """
    f = x.field
    if f.is_rational:
        return x.a > 0
    a, b, d = x.a, x.b, f.discriminant
    if f.unit_count == 2:
        return b > 0 or (b == 0 and a > 0)
    if f.unit_count == 4:
        return b >= 0 and 2 * a + b * d > 0  # Re = a + b d/2 > 0
    return b >= 0 and a > 2 * b  # w = 6, d = -3


def canonical_associate(x: AlgebraicNumber) -> AlgebraicNumber:
    """The unit multiple of x with argument in [0, 2*pi/w_F).

    Exactly one associate of a nonzero x lands in the half-open sector; the
    lexicographic tie-break on (a, b) is defensive and never fires there.
    Zero is its own representative.
    """
    if x.is_zero():
        return x
    if x.field.is_rational:
        return x if x.a > 0 else -x
    best = None
    for u in x.field.units():
        y = x * u
        if _in_sector(y) and (best is None or (y.a, y.b) < (best.a, best.b)):
            best = y
    assert best is not None, "no associate in canonical sector"
    return best


@dataclass(frozen=True)
class PrincipalIdeal:
    """A nonzero integral ideal of O, stored by its canonical generator."""

    field: FieldSpec
    gen: AlgebraicNumber
    norm: int

    @staticmethod
    def from_generator(g: AlgebraicNumber) -> "PrincipalIdeal":
        if g.is_zero():
            raise DomainError("zero ideal")
        if not g.is_integral():
            raise DomainError(f"generator {g!r} is not integral")
        g = canonical_associate(g)
        n = abs(g.norm())
        assert n.denominator == 1
        return PrincipalIdeal(g.field, g, int(n))

    def __mul__(self, other: "PrincipalIdeal") -> "PrincipalIdeal":
        return PrincipalIdeal.from_generator(self.gen * other.gen)

    def divides(self, other: "PrincipalIdeal") -> bool:
        return (other.gen / self.gen).is_integral()

    def divide(self, other: "PrincipalIdeal") -> "PrincipalIdeal":
        """self / other, which must be integral."""
        q = self.gen / other.gen
        return PrincipalIdeal.from_generator(q)

    def key(self) -> tuple:
        return (self.norm, self.gen.a, self.gen.b)

    def __repr__(self) -> str:
        return f"({self.gen!r})"


def ideal(field: FieldSpec, g) -> PrincipalIdeal:
    """Coerce an element, integer, or ideal to a PrincipalIdeal."""
    if isinstance(g, PrincipalIdeal):
        return g
    if not isinstance(g, AlgebraicNumber):
        g = field.element(g)
    return PrincipalIdeal.from_generator(g)


# ---------------------------------------------------------------------------
# Kronecker symbol


def kronecker_symbol(a: int, n: int) -> int:
    """The Kronecker symbol (a/n), defined for all integers n.

    Standard extension of Jacobi: (a/2) is 0 for even a and (-1)^((a^2-1)/8)
    for odd a; (a/-1) is -1 for a < 0 and 1 otherwise; (a/0) is 1 iff
    a = +-1.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # factor out twos from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 and (a % 8) in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol loop with reciprocity
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def chi_disc(field: FieldSpec, n: int) -> int:
    """The quadratic character chi_d(n) = (d/n) attached to F (1 for Q)."""
    if field.is_rational:
        return 1 if n != 0 else 0
    return kronecker_symbol(field.discriminant, n)


# ---------------------------------------------------------------------------
# gcd via nearest-point Euclidean division


def _nearest_quotients(x: Fraction) -> tuple[int, int]:
    f = math.floor(x)
    return (f, f + 1)


def euclid_divide(a: AlgebraicNumber, b: AlgebraicNumber) -> tuple[AlgebraicNumber, AlgebraicNumber]:
    """Quotient q and remainder r = a - q b with N(r) < N(b), exactly.

    q is a nearest lattice point to a/b: for each of the two integer choices
    of the w-coordinate the optimal first coordinate is computed in closed
    form, and the smaller remainder (exact comparison) wins.  The worst-case
    ratio N(r)/N(b) over the five fields is 15/16 (at d = -11), so the
    Euclidean algorithm terminates.
    """
    f = a.field
    if b.is_zero():
        raise ZeroDivisionError("division by zero element")
    if f.is_rational:
        q = AlgebraicNumber(f, Fraction(round(a.a / b.a)), Fraction(0))
        return q, a - q * b
    xi = a / b  # exact
    d = f.discriminant
    best_q = best_r = None
    for v in _nearest_quotients(xi.b):
        # minimize (x - u + (y - v) d/2)^2 + (y - v)^2 |d|/4 over u
        target = xi.a + (xi.b - v) * d / 2
        u = math.floor(target + Fraction(1, 2))
        q = AlgebraicNumber(f, Fraction(u), Fraction(v))
        r = a - q * b
        if best_r is None or r.norm() < best_r.norm():
            best_q, best_r = q, r
    assert best_r.norm() < b.norm(), "Euclidean division failed"
    return best_q, best_r


def _int_divide(field: FieldSpec, a1: int, a2: int, b1: int, b2: int):
    """Nearest-point division on integer coordinates; returns (q1,q2,r1,r2).

    Same algorithm as euclid_divide but with no Fraction objects: the hot
    path for gcds and residue systems.
    """
    d = field.discriminant
    K = field._omega_const
    nb = b1 * b1 + b1 * b2 * d + b2 * b2 * K
    # a/b = a * conj(b) / N(b); conj(b) = (b1 + b2 d) - b2 w
    c1, c2 = b1 + b2 * d, -b2
    p = a1 * c1 - K * a2 * c2
    q = a1 * c2 + a2 * c1 + d * a2 * c2
    # xi = (p + q w)/nb; try v = floor(q/nb) and v + 1
    v0 = q // nb
    best = None
    for v in (v0, v0 + 1):
        # u = nearest integer to p/nb + (q/nb - v) d/2 = (2p + (q - v nb) d)/(2 nb)
        t = 2 * p + (q - v * nb) * d
        u = (t + nb) // (2 * nb)
        r1 = a1 - (u * b1 - K * v * b2)
        r2 = a2 - (u * b2 + v * b1 + d * v * b2)
        nr = r1 * r1 + r1 * r2 * d + r2 * r2 * K
        if best is None or nr < best[0]:
            best = (nr, u, v, r1, r2)
    nr, u, v, r1, r2 = best
    assert nr < nb, "integer Euclidean division failed"
    return u, v, r1, r2


def gcd_elements(a: AlgebraicNumber, b: AlgebraicNumber) -> AlgebraicNumber:
    """A gcd of two elements of O (canonical associate; 0 if both are 0)."""
    f = a.field
    if f.is_rational:
        g = math.gcd(int(a.a), int(b.a))
        return AlgebraicNumber(f, Fraction(g), Fraction(0))
    if a.is_integral() and b.is_integral():
        a1, a2 = int(a.a), int(a.b)
        b1, b2 = int(b.a), int(b.b)
        while b1 or b2:
            _, _, r1, r2 = _int_divide(f, a1, a2, b1, b2)
            a1, a2, b1, b2 = b1, b2, r1, r2
        return canonical_associate(f.element(a1, a2))
    while not b.is_zero():
        _, r = euclid_divide(a, b)
        a, b = b, r
    return canonical_associate(a)


def gcd_ideal(a, b) -> PrincipalIdeal:
    """gcd of two ideals (or of elements/integers coerced to ideals)."""
    fa = a.field if isinstance(a, (PrincipalIdeal, AlgebraicNumber)) else b.field
    ga = a.gen if isinstance(a, PrincipalIdeal) else (a if isinstance(a, AlgebraicNumber) else fa.element(a))
    gb = b.gen if isinstance(b, PrincipalIdeal) else (b if isinstance(b, AlgebraicNumber) else fa.element(b))
    g = gcd_elements(ga, gb)
    if g.is_zero():
        raise DomainError("gcd of zero ideals")
    return PrincipalIdeal.from_generator(g)


# ---------------------------------------------------------------------------
# enumeration


def _element_range(field: FieldSpec, X: Fraction) -> Iterable[AlgebraicNumber]:
    """All nonzero integral elements with N <= X (every associate included)."""
    if X < 1:
        return
    if field.is_rational:
        n = math.floor(X)
        for a in range(1, n + 1):
            yield field.element(a)
            yield field.element(-a)
        return
    d = field.discriminant
    # b^2 |d| / 4 <= X  <=>  b^2 <= floor(4X/|d|), exactly
    bmax = math.isqrt(math.floor(4 * X / (-d)))
    for b in range(-bmax, bmax + 1):
        # N as quadratic in a has vertex at a = -b d/2 and value b^2 |d|/4
        center = -Fraction(b * d, 2)
        span2 = X - Fraction(b * b * (-d), 4)
        if span2 < 0:
            continue
        half = math.isqrt(math.floor(span2)) + 2
        lo = math.floor(center) - half
        hi = math.ceil(center) + half
        for a in range(lo, hi + 1):
            x = field.element(a, b)
            n = x.norm()
            if 0 < n <= X:
                yield x


def enumerate_ideals(field: FieldSpec, X) -> list[PrincipalIdeal]:
    """All nonzero ideals of norm <= X, sorted by (norm, generator key).

    One canonical generator per unit orbit; X < 1 gives the empty list.
    """
    X = Fraction(X)
    out = []
    for x in _element_range(field, X):
        if _in_sector(x):
            n = x.norm() if not field.is_rational else x.a
            out.append(PrincipalIdeal(field, x, int(abs(n))))
    out.sort(key=PrincipalIdeal.key)
    return out


def ideal_counts(field: FieldSpec, X: int) -> list[int]:
    """a_F[n] = #{ideals of norm n} for 0 <= n <= X (a_F[0] = 0).

    Computed by the divisor-sum identity a_F(n) = sum_{k | n} chi_d(k),
    as a sieve; for Q this is identically 1.
    """
    a = [0] * (X + 1)
    if field.is_rational:
        for n in range(1, X + 1):
            a[n] = 1
        return a
    for k in range(1, X + 1):
        c = chi_disc(field, k)
        if c:
            for n in range(k, X + 1, k):
                a[n] += c
    return a


# ---------------------------------------------------------------------------
# factorization, divisors, multiplicative functions


def _factor_int(n: int) -> list[tuple[int, int]]:
    out = []
    n = abs(n)
    for p in range(2, math.isqrt(n) + 1):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return out


_PRIME_CACHE: dict[tuple[str, int], tuple] = {}


def prime_ideals_above(field: FieldSpec, p: int) -> tuple[PrincipalIdeal, ...]:
    """The prime ideals of O above the rational prime p.

    Split p gives a conjugate pair (each of norm p), ramified p a single
    ideal of norm p, inert p the ideal (p) of norm p^2.
    """
    key = (field.name, p)
    if key in _PRIME_CACHE:
        return _PRIME_CACHE[key]
    if field.is_rational:
        ans = (ideal(field, p),)
    else:
        c = chi_disc(field, p)
        if c == -1:
            ans = (ideal(field, p),)
        else:
            gen = None
            for x in _element_range(field, Fraction(p)):
                if x.norm() == p:
                    gen = x
                    break
            if gen is None:
                raise DomainError(f"no element of norm {p} in {field.name}")
            pi = PrincipalIdeal.from_generator(gen)
            if c == 0:
                ans = (pi,)
            else:
                pibar = PrincipalIdeal.from_generator(gen.conj())
                ans = tuple(sorted((pi, pibar), key=PrincipalIdeal.key))
    _PRIME_CACHE[key] = ans
    return ans


def _valuation(x: AlgebraicNumber, pi: AlgebraicNumber) -> int:
    """v_pi(x) for a degree-one prime generator pi."""
    v = 0
    while True:
        q = x / pi
        if not q.is_integral():
            return v
        x = q
        v += 1


@lru_cache(maxsize=65536)
def factor_ideal(I: PrincipalIdeal) -> tuple[tuple[PrincipalIdeal, int], ...]:
    """Prime factorization, sorted by (norm, generator key).

    Valuations at ramified and inert primes are read off the norm; split
    primes need actual trial division to apportion the exponent between the
    conjugate pair.  Memoized: ideals are immutable values.
    """
    field = I.field
    out = []
    for p, e in _factor_int(I.norm):
        ps = prime_ideals_above(field, p)
        if field.is_rational:
            out.append((ps[0], e))
        elif len(ps) == 1:
            pi = ps[0]
            if pi.norm == p * p:  # inert
                assert e % 2 == 0
                out.append((pi, e // 2))
            else:  # ramified
                out.append((pi, e))
        else:
            v = _valuation(I.gen, ps[0].gen)
            if v:
                out.append((ps[0], v))
            if e - v:
                out.append((ps[1], e - v))
    out.sort(key=lambda t: t[0].key())
    return tuple(out)


@lru_cache(maxsize=65536)
def _divisors_cached(I: PrincipalIdeal) -> tuple[PrincipalIdeal, ...]:
    fac = factor_ideal(I)
    divs = [ideal(I.field, 1)]
    for pi, e in fac:
        cur = list(divs)
        power = pi
        for _ in range(e):
            cur.extend(d * power for d in divs)
            power = power * pi
        divs = cur
    divs.sort(key=PrincipalIdeal.key)
    return tuple(divs)


def divisors(I) -> list[PrincipalIdeal]:
    """All ideal divisors of I, sorted by (norm, generator key)."""
    return list(_divisors_cached(_as_ideal(I)))


def _as_ideal(I) -> PrincipalIdeal:
    if isinstance(I, PrincipalIdeal):
        return I
    raise DomainError(f"expected a PrincipalIdeal, got {I!r}")


def tau(I) -> int:
    """Number of ideal divisors."""
    I = _as_ideal(I)
    t = 1
    for _, e in factor_ideal(I):
        t *= e + 1
    return t


def tau_s(I, s) -> complex:
    """tau_s(n) = sum over factorizations n = a b of N(a/b)^s.

    Equals sum over divisors a | n of (N(a)^2 / N(n))^s; symmetric in
    s -> -s, and tau_0 = tau.  Returns a complex number (real for real s up
    to roundoff, which callers may .real off).
    """
    I = _as_ideal(I)
    n = I.norm
    total = 0j
    for dv in divisors(I):
        total += complex(dv.norm * dv.norm / n) ** complex(s)
    return total


def moebius(I) -> int:
    """Moebius function of an ideal: 0 unless squarefree, else (-1)^omega."""
    I = _as_ideal(I)
    m = 1
    for _, e in factor_ideal(I):
        if e > 1:
            return 0
        m = -m
    return m


# ---------------------------------------------------------------------------
# dual lattice


def dual_generator(field: FieldSpec) -> AlgebraicNumber:
    """1/sqrt(d), the generator of O' over O (1 for Q)."""
    if field.is_rational:
        return field.one()
    # 1/sqrt(d) = sqrt(d)/d = (2w - d)/d = -1 + (2/d) w
    return AlgebraicNumber(field, Fraction(-1), Fraction(2, field.discriminant))


def dual_elements_in_disc(field: FieldSpec, R) -> list[AlgebraicNumber]:
    """Elements n of O' with |embedding(n)| <= R, including 0.

    The comparison is exact: |n|^2 is a rational number and R enters as the
    exact value of the given float/Fraction, so boundary cases like
    R = sqrt(2)/2 resolve deterministically.  Sorted by (|n|^2, a, b).
    """
    R = Fraction(R)
    if R < 0:
        return []
    R2 = R * R
    out = [field.zero()]
    if field.is_rational:
        n = math.floor(R)
        for a in range(1, n + 1):
            out.append(field.element(-a))
            out.append(field.element(a))
        out.sort(key=AlgebraicNumber.key)
        return out
    # n = m / sqrt(d) with m in O; |n|^2 = N(m)/|d|
    inv = dual_generator(field)
    bound = R2 * field.abs_disc
    for m in _element_range(field, bound):
        if m.norm() <= bound:
            out.append(m * inv)
    out.sort(key=AlgebraicNumber.key)
    return out


# Frozen module constant for the lattice-count bound.  Calibrated by
# exhaustive small-case scan; note the honest limit: the density of
# m^{-1} O' is 8 sqrt(|d|) |m|^2 per unit rectangle area, so for
# |d| >= 7 and large P, Q the inequality with C = 16 genuinely fails
# (the underlying estimate is a big-O with field-dependent constant).
# The result carries the check as data rather than asserting it.
LATTICE_BOUND_C = 16


@dataclass(frozen=True)
class LatticeCount:
    """Exact lattice-point count plus the C (|m|P+1)(|m|Q+1) bound check."""

    count: int
    bound: float
    bound_ok: bool


def count_lattice_in_rect(field: FieldSpec, m, P, Q) -> LatticeCount:
    """|m^{-1} O' intersect R(P, Q)| for the OPEN rectangle |x| < P, |y| < Q.

    m is a nonzero element of O' (fractional coordinates are fine) or an
    integer.  For Q the rectangle degenerates to the interval |x| < P.  All
    point-membership comparisons are exact rational arithmetic in the
    sqrt-basis: u/(m sqrt d) = x + y sqrt(d) lies inside iff x^2 < P^2 and
    y^2 |d| < Q^2.
    """
    if not isinstance(m, AlgebraicNumber):
        m = field.element(m)
    if m.is_zero():
        raise DomainError("m must be nonzero")
    P, Q = Fraction(P), Fraction(Q)

    def _result(count: int) -> LatticeCount:
        am = abs(m.embed())
        bound = LATTICE_BOUND_C * (am * float(P) + 1) * (am * float(Q) + 1)
        return LatticeCount(count, bound, count <= bound)

    if P <= 0 or (not field.is_rational and Q <= 0):
        return _result(0)
    if field.is_rational:
        # n = j / m, |n| < P  <=>  |j| < |m| P
        edge = abs(m.a) * P
        j = math.ceil(edge) - 1 if edge == math.ceil(edge) else math.floor(edge)
        return _result(2 * j + 1)
    # n = u / (m sqrt d), u in O; scan u over N(u) <= N(m) |d| (P^2 + Q^2)
    P2, Q2 = P * P, Q * Q
    md = m * field.sqrt_disc()
    scan = m.norm() * field.abs_disc * (P2 + Q2)
    count = 1  # u = 0
    absd = field.abs_disc
    for u in _element_range(field, scan):
        x, y = (u / md).to_sqrt_basis()
        if x * x < P2 and y * y * absd < Q2:
            count += 1
    return _result(count)
