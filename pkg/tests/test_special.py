"""Gamma / digamma / Hurwitz zeta against mpmath, plus hand-derived series
oracles for the two constants everything else leans on.
"""

import math

import mpmath
import numpy as np
import pytest

from bml.errors import DomainError
from bml.special import (
    EULER_GAMMA,
    digamma,
    gammafn,
    hurwitz_zeta,
    loggamma,
    riemann_zeta,
)

mpmath.mp.dps = 30


# ---------------------------------------------------------------------------
# gamma

GAMMA_POINTS = [
    0.5, 1.0, 3.7, 12.25,
    0.5 + 4j, 2.0 - 7j, 8.0 + 25j, 1.5 + 40j,
    -0.5, -3.3, -0.5 + 2j, -6.2 - 5j,   # reflection side
    1e-4, 1e-4 + 1j,
]


@pytest.mark.parametrize("z", GAMMA_POINTS)
def test_gamma_matches_mpmath(z):
    want = complex(mpmath.gamma(z))
    got = complex(gammafn(z))
    assert abs(got - want) <= 1e-12 * abs(want)


def test_gamma_array_shape():
    z = np.array([1.0, 2.5 + 1j, -0.5])
    out = gammafn(z)
    assert out.shape == (3,)
    assert abs(out[1] - complex(mpmath.gamma(2.5 + 1j))) < 1e-12 * abs(out[1])


def test_loggamma_real_part_large_imag():
    # |Gamma| underflows long before log Gamma loses accuracy
    z = 2.0 + 300.0j
    want = mpmath.loggamma(z)
    got = loggamma(z)
    assert abs(got.real - float(want.real)) <= 1e-11 * abs(float(want.real))


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
def test_gamma_pole_raises(z):
    with pytest.raises(DomainError):
        loggamma(z)


# ---------------------------------------------------------------------------
# digamma

DIGAMMA_POINTS = [0.25, 1.0, 5.5, 30.0, 2.0 + 3j, 0.3 - 11j, -2.5, -0.7 + 1.5j]


@pytest.mark.parametrize("z", DIGAMMA_POINTS)
def test_digamma_matches_mpmath(z):
    want = complex(mpmath.digamma(z))
    got = complex(digamma(z))
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_digamma_pole_raises():
    with pytest.raises(DomainError):
        digamma(-4.0)


# ---------------------------------------------------------------------------
# zeta

ZETA_POINTS = [
    2.0, 3.0, 0.5, -1.5,
    0.5 + 14.134j, 1.0 + 1j, 2.0 - 30j, 0.1 + 95.0j,
    -2.0 + 3j,
]


@pytest.mark.parametrize("s", ZETA_POINTS)
def test_riemann_zeta_matches_mpmath(s):
    want = complex(mpmath.zeta(s))
    got = complex(riemann_zeta(s))
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


@pytest.mark.parametrize("a", [0.25, 1.0 / 3.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("s", [2.0, 0.5 + 6j, -1.0 + 2j, 3.0 - 40j])
def test_hurwitz_matches_mpmath(s, a):
    want = complex(mpmath.zeta(s, a))
    got = complex(hurwitz_zeta(s, a))
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_hurwitz_array_matches_scalar():
    s = np.array([2.0 + 1j, 0.5 - 3j, -0.5])
    out = hurwitz_zeta(s, 0.75)
    for si, oi in zip(s, out):
        assert abs(oi - hurwitz_zeta(complex(si), 0.75)) < 1e-13 * max(1.0, abs(oi))


def test_zeta_known_values():
    assert abs(riemann_zeta(2.0) - math.pi**2 / 6) < 1e-12
    assert abs(riemann_zeta(0.0) + 0.5) < 1e-12
    assert abs(riemann_zeta(-1.0) + 1.0 / 12.0) < 1e-12


def test_zeta2_series_tail_oracle():
    # independent of the Euler-Maclaurin engine: direct summation to N, then
    # the hand-derived tail 1/N - 1/(2N^2) + 1/(6N^3) - 1/(30N^5)
    N = 400
    head = sum(1.0 / (n * n) for n in range(1, N + 1))
    tail = 1.0 / N - 1.0 / (2.0 * N**2) + 1.0 / (6.0 * N**3) - 1.0 / (30.0 * N**5)
    assert abs(riemann_zeta(2.0) - (head + tail)) < 1e-12


def test_euler_gamma_harmonic_oracle():
    # H_N - log N - 1/(2N) + 1/(12 N^2) -> gamma with O(N^-4) error
    N = 100_000
    h = float(np.sum(1.0 / np.arange(1, N + 1, dtype=float)))
    oracle = h - math.log(N) - 0.5 / N + 1.0 / (12.0 * N * N)
    assert abs(EULER_GAMMA - oracle) < 1e-12


def test_hurwitz_domain_errors():
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, -1.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0 + 2.0e4j, 0.5)
    with pytest.raises(DomainError):
        hurwitz_zeta(-5.0, 0.5)


def test_zeta_functional_equation_consistency():
    # chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s); zeta(s) = chi(s) zeta(1-s)
    s = 0.3 + 7.0j
    chi = 2.0**s * math.pi ** (s - 1) * np.sin(np.pi * s / 2) * gammafn(1.0 - s)
    assert abs(riemann_zeta(s) - chi * riemann_zeta(1.0 - s)) < 1e-10
