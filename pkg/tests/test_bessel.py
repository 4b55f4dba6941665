"""Place kernels: branch seams, symmetries, asymptotic certificates, Mellin law.

Oracles are live mpmath evaluations of the classical Bessel combinations.
The complex-place reference boosts its working precision by ~0.9*|Im w|
digits so its J+iY summations survive the cancellation that the module's
H-product route avoids structurally; a separate low-altitude point checks
the defining J-product form directly.
"""

import cmath
import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from bml.bessel import (
    AsymptoticForm,
    KernelOrder,
    asymptotic_complex,
    asymptotic_real,
    gamma_ratio,
    kernel_complex,
    kernel_real,
    mellin_check,
    mellin_kernel,
)
from bml.errors import DomainError, RegimeError
from bml.fields import FIELDS

mpmath.mp.dps = 40

Q = FIELDS["Q"]
QI = FIELDS["Q(i)"]

MELLIN_S = (0.05, 0.1, 0.15, 0.2)
MELLIN_T = (0.0, 0.05, 0.1)


def ref_real(s, x):
    s = mpmath.mpmathify(s)
    if x > 0:
        w = 4 * mpmath.pi * mpmath.sqrt(x)
        if s == 0:
            return complex(-2 * mpmath.pi * mpmath.bessely(0, w))
        return complex(
            mpmath.pi / mpmath.sin(mpmath.pi * s)
            * (mpmath.besselj(-2 * s, w) - mpmath.besselj(2 * s, w))
        )
    w = 4 * mpmath.pi * mpmath.sqrt(-x)
    return complex(4 * mpmath.cos(mpmath.pi * s) * mpmath.besselk(2 * s, w))


def ref_complex(s, z):
    s = mpmath.mpmathify(s)
    z = mpmath.mpmathify(z)
    if mpmath.im(z) < 0:
        z = mpmath.conj(z)
    w1 = 4 * mpmath.pi * mpmath.sqrt(z)
    boost = int(0.9 * abs(float(mpmath.im(w1)))) + 20
    with mpmath.workdps(mpmath.mp.dps + boost):
        nu = 2 * s
        e = mpmath.expjpi(2 * s)
        val = mpmath.pi**2 * 1j * (
            e * mpmath.hankel1(nu, w1) * mpmath.hankel1(nu, mpmath.conj(w1))
            - mpmath.hankel2(nu, w1) * mpmath.hankel2(nu, mpmath.conj(w1)) / e
        )
    return complex(val)


def rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------------------
# real-place kernel


def test_kernel_real_small_argument_branch():
    for s in (0.1, 0.24, 0.1j, 0.12 + 0.12j, -0.2):
        for x in (1e-8, 0.01, 0.5, 0.9):
            assert rel(kernel_real(s, x), ref_real(s, x)) < 1e-10


def test_kernel_real_contour_branch():
    for s in (0.0, 0.2, 0.1j, 0.2j, 0.12 + 0.12j):
        for x in (1.0, 2.0, 4.0, 5.6):
            assert rel(kernel_real(s, x), ref_real(s, x)) < 1e-10


def test_kernel_real_expansion_branch():
    for s in (0.0, 0.24, 0.2j, 0.12 + 0.12j):
        for x in (6.0, 57.0, 1e3, 1e4):
            assert rel(kernel_real(s, x), ref_real(s, x)) < 1e-10


def test_kernel_real_order_zero_series_limit():
    # order exactly zero takes the J0/Y0 route below the first seam
    assert rel(kernel_real(0.0, 0.25), ref_real(0, 0.25)) < 1e-12
    assert rel(kernel_real(0.0, 1e-6), ref_real(0, 1e-6)) < 1e-12


def test_kernel_real_negative_axis():
    for s in (0.0, 0.2, 0.1j, 0.12 + 0.12j):
        for x in (-0.04, -1.0, -4.0):
            assert rel(kernel_real(s, x), ref_real(s, x)) < 1e-10


def test_kernel_real_negative_unit_equals_k_bessel_quadrature():
    # independent check: 4*K_0(4 pi) by direct cosh-integral quadrature
    val, err = quad(lambda u: math.exp(-4 * math.pi * math.cosh(u)), 0, 12)
    got = kernel_real(0.0, -1.0)
    assert abs(got.imag) < 1e-15
    assert abs(got.real - 4 * val) < 1e-12 + 10 * err


def test_kernel_real_far_negative_is_exponentially_dead():
    assert abs(kernel_real(0.0, -100.0)) <= 2.0 * math.exp(-40 * math.pi) / math.sqrt(10)
    assert kernel_real(0.0, -1e6) == 0


def test_kernel_real_even_in_order():
    assert abs(kernel_real(0.1j, 2.0) - kernel_real(-0.1j, 2.0)) < 1e-9
    rng = np.random.default_rng(7)
    for _ in range(20):
        s = complex(rng.uniform(-0.24, 0.24), rng.uniform(-0.2, 0.2))
        x = float(rng.uniform(-30, 30)) or 1.0
        a, b = kernel_real(s, x), kernel_real(-s, x)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_kernel_real_small_order_continuity():
    assert abs(kernel_real(1e-4j, 1.0) - kernel_real(0.0, 1.0)) < 1e-6


def test_kernel_real_rejects_bad_input():
    with pytest.raises(DomainError):
        kernel_real(0.25, 1.0)
    with pytest.raises(DomainError):
        kernel_real(-0.3 + 0.1j, 1.0)
    with pytest.raises(DomainError):
        kernel_real(0.1, 0.0)
    with pytest.raises(DomainError):
        KernelOrder(0.26)


def test_kernel_order_type():
    k = KernelOrder(0.1 + 0.05j)
    assert k.negated.s == -k.s
    assert kernel_real(k, 2.0) == kernel_real(k.s, 2.0)
    assert kernel_complex(k, 2.0 + 1j) == kernel_complex(k.s, 2.0 + 1j)


@pytest.mark.parametrize("wseam", [12.0, 30.0])
def test_kernel_real_seam_continuity(wseam):
    # the branch switch must be invisible: values straddling the seam by
    # a relative 1e-12 gap may differ only at the 1e-8 level
    x_seam = (wseam / (4 * math.pi)) ** 2
    rng = np.random.default_rng(int(wseam))
    for _ in range(50):
        s = complex(rng.uniform(-0.24, 0.24), rng.uniform(-0.2, 0.2))
        lo = kernel_real(s, x_seam * (1 - 1e-12))
        hi = kernel_real(s, x_seam * (1 + 1e-12))
        assert abs(lo - hi) <= 1e-8 * max(abs(lo), 1e-3)


# ---------------------------------------------------------------------------
# complex-place kernel


def test_kernel_complex_defining_product_form():
    # low-altitude point checked against the literal J-product definition
    s = mpmath.mpf("0.1")
    z = mpmath.mpc("0.5", "0.5")
    w1 = 4 * mpmath.pi * mpmath.sqrt(z)
    w2 = mpmath.conj(w1)
    ref = (2 * mpmath.pi**2 / mpmath.sin(2 * mpmath.pi * s)) * (
        mpmath.besselj(-2 * s, w1) * mpmath.besselj(-2 * s, w2)
        - mpmath.besselj(2 * s, w1) * mpmath.besselj(2 * s, w2)
    )
    assert rel(kernel_complex(0.1, 0.5 + 0.5j), complex(ref)) < 1e-10


def test_kernel_complex_matches_reference():
    pts = [0.001 + 0.001j, 0.02, 0.5 + 0.5j, 2 + 1j, 5.7, -3 + 0.001j,
           8j, 3 - 4j, -80 + 1j, 100j, 1e4]
    for s in (0.0, 0.1, 0.24, 0.1j, 0.2j, 0.12 + 0.12j):
        for z in pts:
            assert rel(kernel_complex(s, z), ref_complex(s, z)) < 1e-9


def test_kernel_complex_conjugation_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(25):
        t = rng.uniform(-0.2, 0.2)
        z = complex(rng.uniform(-20, 20), rng.uniform(-20, 20)) or (1 + 1j)
        a = kernel_complex(1j * t, z)
        b = kernel_complex(1j * t, z.conjugate())
        assert abs(a - b.conjugate()) <= 1e-9 * max(1.0, abs(a))


def test_kernel_complex_branch_invariance():
    # the value may not depend on which square root of z is taken: the
    # two signed-zero representations of the cut agree, and both match
    # the off-axis limit
    a = kernel_complex(0.1, complex(-2.0, 0.0))
    b = kernel_complex(0.1, complex(-2.0, -0.0))
    assert a == b
    c = kernel_complex(0.1, -2.0 + 1e-9j)
    assert abs(a - c) < 1e-6
    z = 1 + 1j
    assert abs(kernel_complex(0.1, z) - kernel_complex(0.1, z.conjugate()).conjugate()) < 1e-9


def test_kernel_complex_small_order_continuity():
    assert abs(kernel_complex(1e-6, 2 + 1j) - kernel_complex(0.0, 2 + 1j)) < 1e-6


def test_kernel_complex_even_in_order():
    rng = np.random.default_rng(13)
    for _ in range(15):
        s = complex(rng.uniform(-0.24, 0.24), rng.uniform(-0.2, 0.2))
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10)) or (1 + 1j)
        a, b = kernel_complex(s, z), kernel_complex(-s, z)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


def test_kernel_complex_seam_continuity():
    rho = (30.0 / (4 * math.pi)) ** 2
    rng = np.random.default_rng(30)
    for _ in range(50):
        s = complex(rng.uniform(-0.24, 0.24), rng.uniform(-0.2, 0.2))
        phi = rng.uniform(0.0, math.pi)
        z = rho * cmath.exp(1j * phi)
        lo = kernel_complex(s, z * (1 - 1e-12))
        hi = kernel_complex(s, z * (1 + 1e-12))
        assert abs(lo - hi) <= 1e-8 * max(abs(lo), 1e-3)


def test_kernel_complex_inner_seam_continuity():
    rho = (2.0 / (4 * math.pi)) ** 2
    rng = np.random.default_rng(2)
    for _ in range(30):
        s = complex(rng.uniform(-0.24, 0.24), rng.uniform(-0.2, 0.2))
        phi = rng.uniform(0.0, math.pi)
        z = rho * cmath.exp(1j * phi)
        lo = kernel_complex(s, z * (1 - 1e-12))
        hi = kernel_complex(s, z * (1 + 1e-12))
        assert abs(lo - hi) <= 1e-8 * max(abs(lo), 1e-3)


def test_kernel_complex_rejects_bad_input():
    with pytest.raises(DomainError):
        kernel_complex(0.3, 1 + 1j)
    with pytest.raises(DomainError):
        kernel_complex(0.1, 0)


# ---------------------------------------------------------------------------
# asymptotic certificates


def test_asymptotic_real_certificate_at_hundred():
    form = asymptotic_real(100.0, 2)
    err = abs(kernel_real(0.0, 100.0) - form.main_term(100.0))
    assert err <= form.error_bound(100.0)
    assert form.error_bound(100.0) == pytest.approx(1.2e-4 * 100.0 ** -1.25)


def test_asymptotic_real_certificates_sampled():
    rng = np.random.default_rng(17)
    for K in range(5):
        for _ in range(12):
            s = complex(rng.uniform(-0.24, 0.24), rng.uniform(-0.2, 0.2))
            x = float(np.exp(rng.uniform(np.log(1.05), np.log(1e4))))
            form = asymptotic_real(x, K, s=s)
            err = abs(kernel_real(s, x) - form.main_term(x))
            assert err <= form.error_bound(x)


def test_asymptotic_complex_certificates_sampled():
    rng = np.random.default_rng(19)
    for K in range(5):
        for _ in range(12):
            s = complex(rng.uniform(-0.24, 0.24), rng.uniform(-0.2, 0.2))
            r = float(np.exp(rng.uniform(np.log(1.1), np.log(1e4))))
            z = r * cmath.exp(1j * rng.uniform(0.0, math.pi))
            form = asymptotic_complex(z, K, s=s)
            err = abs(kernel_complex(s, z) - form.main_term(z))
            assert err <= form.error_bound(z)


def test_asymptotic_complex_residual_slope():
    # along the ray through 50+50i the K=2 residual must fall at least
    # like |z|^{-3/2} (slope fitted on a log-log grid)
    s = 0.0
    radii = np.geomspace(20.0, 2000.0, 12)
    resid = []
    for r in radii:
        z = r * cmath.exp(1j * math.pi / 4)
        form = asymptotic_complex(z, 2, s=s)
        resid.append(abs(kernel_complex(s, z) - form.main_term(z)))
    slope = np.polyfit(np.log(radii), np.log(resid), 1)[0]
    assert slope <= -1.5 + 0.1


def test_asymptotic_out_of_regime():
    with pytest.raises(RegimeError):
        asymptotic_real(0.9, 2)
    with pytest.raises(RegimeError):
        asymptotic_complex(0.5 + 0.5j, 2)
    form = asymptotic_real(2.0, 2)
    with pytest.raises(RegimeError):
        form.main_term(0.5)
    with pytest.raises(DomainError):
        asymptotic_real(2.0, 9)


def test_asymptotic_smooth_factor_derivative_bounds():
    # x^j d^j/dx^j of the smooth factors stays O(1) through the regime
    for s in (0.0, 0.2, 0.1j, 0.12 + 0.12j):
        form = asymptotic_real(2.0, 4, s=s)
        for x in (4.0, 25.0, 400.0):
            h = 1e-4 * x
            w0, wp, wm = (form.w_plus(x), form.w_plus(x + h), form.w_plus(x - h))
            d1 = (wp - wm) / (2 * h)
            d2 = (wp - 2 * w0 + wm) / h**2
            assert abs(x * d1) < 1.0
            assert abs(x * x * d2) < 1.0
    cform = asymptotic_complex(2.0, 2)
    with pytest.raises(DomainError):
        cform.w_plus(4.0)


# ---------------------------------------------------------------------------
# Mellin transform = gamma-factor quotient


def test_mellin_real_grid():
    for t in MELLIN_T:
        for s in MELLIN_S:
            assert rel(mellin_kernel(Q, s, t), gamma_ratio(Q, s, t)) < 1e-7


def test_mellin_complex_grid():
    for t in MELLIN_T:
        for s in MELLIN_S:
            assert rel(mellin_kernel(QI, s, t), gamma_ratio(QI, s, t)) < 1e-6


def test_mellin_real_closed_form():
    # the transform has the closed form
    # 2 (cos(pi i t) + cos(pi s)) (2 pi)^{-2s} Gamma(s+it) Gamma(s-it)
    for (s, t) in ((0.125, 0.0), (0.2, 0.1)):
        disp = complex(
            2 * (mpmath.cos(mpmath.pi * 1j * t) + mpmath.cos(mpmath.pi * s))
            * (2 * mpmath.pi) ** (-2 * s)
            * mpmath.gamma(s + 1j * t) * mpmath.gamma(s - 1j * t)
        )
        assert rel(mellin_kernel(Q, s, t), disp) < 1e-6


def test_mellin_complex_closed_form():
    # 2 (cos(2 pi i t) - cos(2 pi s)) (2 pi)^{-4s} (Gamma(s+it) Gamma(s-it))^2
    for (s, t) in ((0.15, 0.0), (0.2, 0.1)):
        disp = complex(
            2 * (mpmath.cos(2 * mpmath.pi * 1j * t) - mpmath.cos(2 * mpmath.pi * s))
            * (2 * mpmath.pi) ** (-4 * s)
            * (mpmath.gamma(s + 1j * t) * mpmath.gamma(s - 1j * t)) ** 2
        )
        assert rel(mellin_kernel(QI, s, t), disp) < 1e-4


def test_mellin_gamma_quotient_reference_value():
    want = complex(
        mpmath.pi ** mpmath.mpf("0.75")
        * mpmath.gamma(mpmath.mpf(1) / 16) ** 2
        / mpmath.gamma(mpmath.mpf(7) / 16) ** 2
    )
    assert rel(gamma_ratio(Q, 0.125, 0.0), want) < 1e-12
    assert rel(mellin_kernel(Q, 0.125, 0.0), want) < 1e-6


def test_mellin_rejects_outside_strip():
    for bad_s, bad_t in ((0.25, 0.0), (0.3, 0.0), (0.0, 0.0), (-0.1, 0.0), (0.1, 0.2j)):
        with pytest.raises(DomainError):
            mellin_kernel(Q, bad_s, bad_t)
        with pytest.raises(DomainError):
            mellin_kernel(QI, bad_s, bad_t)


def test_mellin_check_report():
    rep = mellin_check(Q, 0.125, 0.0)
    assert rep.passed
    assert rep.kind == "rel"
    assert rep.details["tail_certificate"] < 1e-8
    assert rep.details["place"] == "real"
    d = rep.as_dict()
    assert {"lhs", "rhs", "tol"} <= set(d)
    rep2 = mellin_check(QI, 0.15, 0.05)
    assert rep2.passed and rep2.details["place"] == "complex"
