"""Kloosterman and Ramanujan sums over O, evaluated exactly.

The additive character is psi(x) = e(-Tr(x)) (trace down to Q), so a term
psi((m a + n abar)/c) is a root of unity whose exponent is an exact rational
computed with Fractions; the only floating point is one complex exponential
per distinct exponent.  Residue systems mod c come from a 2x2 Hermite normal
form of the lattice c O, inverses from the extended Euclidean algorithm over
the nearest-point division in bml.fields.

m and n must lie in the dual lattice O' = O/sqrt(d): that is exactly the
condition for a term to be well defined on residue classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .fields import (
    AlgebraicNumber,
    FieldSpec,
    PrincipalIdeal,
    _int_divide,
    divisors,
    euclid_divide,
    factor_ideal,
    gcd_elements,
    ideal,
    moebius,
)

__all__ = [
    "KloostermanQuery",
    "kloosterman",
    "kloosterman_sum",
    "ramanujan",
    "ramanujan_closed",
    "residue_system",
    "unit_residues",
    "unit_count",
    "xgcd",
    "inverse_mod",
]


# ---------------------------------------------------------------------------
# residue systems


def _hnf_columns(field: FieldSpec, c: AlgebraicNumber) -> tuple[int, int, int]:
    """Column HNF (g1, b1, h2) of the lattice c O in (1, w) coordinates.

    The lattice is spanned by (g1, b1) and (0, h2) with g1, h2 > 0 and
    g1 * h2 = N(c).
    """
    if field.is_rational:
        n = abs(int(c.a))
        return n, 0, 1
    K = field._omega_const
    d = field.discriminant
    a, b = int(c.a), int(c.b)
    # columns: c*1 = (a, b), c*w = (-Kb, a + db)
    a1, b1 = a, b
    a2, b2 = -K * b, a + d * b
    while a2:
        q = a1 // a2
        a1, b1, a2, b2 = a2, b2, a1 - q * a2, b1 - q * b2
    if a1 < 0:
        a1, b1 = -a1, -b1
    h2 = abs(b2)
    if a1 == 0:
        raise DomainError("degenerate lattice (zero c?)")
    b1 %= h2
    assert a1 * h2 == abs(int(c.norm()))
    return a1, b1, h2


def _reduce_mod(field: FieldSpec, c: AlgebraicNumber, x: AlgebraicNumber) -> AlgebraicNumber:
    """Canonical representative of x + cO with coordinates in the HNF box."""
    g1, b1, h2 = _hnf_columns(field, c)
    u, v = int(x.a), int(x.b)
    if field.is_rational:
        return field.element(u % g1)
    j, u = divmod(u, g1)
    v -= j * b1
    v %= h2
    return field.element(u, v)


def _unit_scan(field: FieldSpec, c: AlgebraicNumber) -> list[tuple[int, int, int, int]]:
    """(u, v, iu, iv) rows over (O/c)^x, all in integer coordinates.

    One extended-Euclid pass per residue decides invertibility and produces
    the inverse; no exact-rational arithmetic on this path.
    """
    d, K = field.discriminant, field._omega_const
    g1, b1h, h2 = _hnf_columns(field, c)
    if field.is_rational:
        return [(u, 0, pow(u, -1, g1), 0) for u in range(1, g1) if math.gcd(u, g1) == 1]
    c1, c2 = int(c.a), int(c.b)
    out = []
    for u in range(g1):
        for v in range(h2):
            if not (u or v):
                continue
            a1, a2, b1, b2 = u, v, c1, c2
            s1, s2, t1, t2 = 1, 0, 0, 0
            while b1 or b2:
                q1, q2, r1, r2 = _int_divide(field, a1, a2, b1, b2)
                a1, a2, b1, b2 = b1, b2, r1, r2
                n1 = s1 - (q1 * t1 - K * q2 * t2)
                n2 = s2 - (q1 * t2 + q2 * t1 + d * q2 * t2)
                s1, s2, t1, t2 = t1, t2, n1, n2
            if a1 * a1 + a1 * a2 * d + a2 * a2 * K != 1:
                continue
            # s1 a = g (mod c) and N(g) = 1, so a^{-1} = s * conj(g)
            i1 = s1 * (a1 + a2 * d) + K * s2 * a2
            i2 = s2 * a1 - s1 * a2
            j, iu = divmod(i1, g1)
            iv = (i2 - j * b1h) % h2
            out.append((u, v, iu, iv))
    return out


@lru_cache(maxsize=512)
def _residue_data(field_name: str, ckey: tuple) -> tuple:
    """(c, residues, units, inverses, unit_coord_array) for the modulus c."""
    from .fields import FIELDS

    field = FIELDS[field_name]
    c = field.element(Fraction(ckey[0]), Fraction(ckey[1]))
    g1, _, h2 = _hnf_columns(field, c)
    residues = [field.element(u, v) for u in range(g1) for v in range(h2)]
    rows = _unit_scan(field, c)
    units = [field.element(u, v) for u, v, _, _ in rows]
    invs = [field.element(iu, iv) for _, _, iu, iv in rows]
    arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
    return c, residues, units, invs, arr


def _ckey(c: AlgebraicNumber) -> tuple:
    if c.is_zero():
        raise DomainError("c must be nonzero")
    if not c.is_integral():
        raise DomainError("the modulus c must be integral")
    return (str(c.a), str(c.b))


def residue_system(field: FieldSpec, c: AlgebraicNumber) -> list[AlgebraicNumber]:
    """A complete set of representatives of O/cO (HNF box, deterministic)."""
    _, residues, _, _, _ = _residue_data(field.name, _ckey(c))
    return list(residues)


def unit_residues(field: FieldSpec, c: AlgebraicNumber) -> list[tuple[AlgebraicNumber, AlgebraicNumber]]:
    """Pairs (a, a^{-1} mod c) over the unit group (O/c)^x."""
    _, _, units, invs, _ = _residue_data(field.name, _ckey(c))
    return list(zip(units, invs))


def unit_count(field: FieldSpec, c: AlgebraicNumber) -> int:
    """|(O/c)^x| by the Euler product over prime ideals dividing c."""
    I = ideal(field, c)
    phi = Fraction(I.norm)
    for p, _ in factor_ideal(I):
        phi *= Fraction(p.norm - 1, p.norm)
    assert phi.denominator == 1
    return int(phi)


# ---------------------------------------------------------------------------
# extended Euclid


def xgcd(a: AlgebraicNumber, b: AlgebraicNumber):
    """(g, s, t) with s a + t b = g and g a gcd of a and b."""
    f = a.field
    s0, s1 = f.one(), f.zero()
    t0, t1 = f.zero(), f.one()
    while not b.is_zero():
        q, r = euclid_divide(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def inverse_mod(a: AlgebraicNumber, c: AlgebraicNumber) -> AlgebraicNumber:
    """The inverse of a modulo c, as the canonical HNF-box representative."""
    g, s, _ = xgcd(a, c)
    ng = g.norm()
    if abs(ng) != 1:
        raise DomainError(f"{a!r} is not invertible mod {c!r}")
    ginv = g.conj() / ng if not a.field.is_rational else a.field.element(1 / ng)
    return _reduce_mod(a.field, c, s * ginv)


# ---------------------------------------------------------------------------
# character machinery


def _require_dual(field: FieldSpec, x: AlgebraicNumber, label: str) -> None:
    # x in O' <=> x sqrt(d) integral (for Q: x integral)
    if field.is_rational:
        if x.a.denominator != 1:
            raise DomainError(f"{label} must lie in O' = Z")
        return
    if not (x * field.sqrt_disc()).is_integral():
        raise DomainError(f"{label} must lie in the dual lattice O'")


def _trace_pair(field: FieldSpec, m: AlgebraicNumber, c: AlgebraicNumber):
    """Tr(m/c) and Tr(m w/c) as exact Fractions (the second is 0 for Q)."""
    q = m / c
    if field.is_rational:
        return q.a, Fraction(0)
    return q.trace(), (q * field.omega()).trace()


@lru_cache(maxsize=512)
def _phase_table(D: int) -> np.ndarray:
    return np.exp((-2j * math.pi / D) * np.arange(D))


@dataclass(frozen=True)
class KloostermanQuery:
    """S(m, n; c): m, n in O', c in O nonzero."""

    m: AlgebraicNumber
    n: AlgebraicNumber
    c: AlgebraicNumber

    def __post_init__(self):
        f = self.c.field
        if self.c.is_zero():
            raise DomainError("c must be nonzero")
        if not self.c.is_integral():
            raise DomainError("c must be integral")
        _require_dual(f, self.m, "m")
        _require_dual(f, self.n, "n")


def kloosterman(q: KloostermanQuery) -> complex:
    """S(m, n; c) = sum over a in (O/c)^x of psi((m a + n abar)/c).

    Exact phase arithmetic: each term's exponent is reduced mod 1 as a
    Fraction with a common denominator D <= 2|d|N(c), and terms are read
    from a length-D root-of-unity table.  Error is below 1e-12 per term.
    """
    f = q.c.field
    if abs(q.c.norm()) == 1:
        return 1.0 + 0.0j
    _, _, _, _, A = _residue_data(f.name, _ckey(q.c))
    t1, t2 = _trace_pair(f, q.m, q.c)
    s1, s2 = _trace_pair(f, q.n, q.c)
    D = 1
    for fr in (t1, t2, s1, s2):
        D = D * fr.denominator // math.gcd(D, fr.denominator)
    p1, p2 = int(t1 * D), int(t2 * D)
    r1, r2 = int(s1 * D), int(s2 * D)
    k = (A[:, 0] * p1 + A[:, 1] * p2 + A[:, 2] * r1 + A[:, 3] * r2) % D
    table = _phase_table(D)
    return complex(table[k].sum())


def kloosterman_sum(field: FieldSpec, m, n, c) -> complex:
    """Convenience wrapper building the query from raw values."""
    m = m if isinstance(m, AlgebraicNumber) else field.element(m)
    n = n if isinstance(n, AlgebraicNumber) else field.element(n)
    c = c if isinstance(c, AlgebraicNumber) else field.element(c)
    return kloosterman(KloostermanQuery(m, n, c))


# ---------------------------------------------------------------------------
# Ramanujan sums


def ramanujan(field: FieldSpec, m, c) -> complex:
    """S(m, 0; c) summed directly over the unit group."""
    m = m if isinstance(m, AlgebraicNumber) else field.element(m)
    c = c if isinstance(c, AlgebraicNumber) else field.element(c)
    return kloosterman(KloostermanQuery(m, field.zero(), c))


def ramanujan_closed(field: FieldSpec, m, c) -> float:
    """S(m, 0; c) by the divisor formula sum_{d | (m D, c)} N(d) mu(c/d).

    The gcd is of ideals: m D is the integral ideal generated by m sqrt(d).
    """
    m = m if isinstance(m, AlgebraicNumber) else field.element(m)
    c = c if isinstance(c, AlgebraicNumber) else field.element(c)
    if c.is_zero():
        raise DomainError("c must be nonzero")
    _require_dual(field, m, "m")
    if abs(c.norm()) == 1:
        return 1.0
    cI = ideal(field, c)
    if m.is_zero():
        # S(0,0;c) = phi(c); the divisor formula degenerates to d | c
        g = cI
    else:
        mD = ideal(field, m * field.sqrt_disc())
        g = _gcd_ideals(mD, cI)
    total = 0
    for dv in divisors(g):
        total += dv.norm * moebius(cI.divide(dv))
    return float(total)


def _gcd_ideals(a: PrincipalIdeal, b: PrincipalIdeal) -> PrincipalIdeal:
    g = gcd_elements(a.gen, b.gen)
    return PrincipalIdeal.from_generator(g)
