import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from korteweg.dispersion import (
    EVANESCENT,
    PROPAGATING,
    dispersion_residual,
    evanescent_depth,
    frequency,
    kirchhoff_love_mu,
    penetration_depth,
    penetration_depth_asymptotic,
    phase_speed,
    quartic_relative_residual,
    real_wavenumber,
    relative_dispersion_residual,
    roots_from_omega_tau,
    solve_wavenumbers,
    speed_ratio,
    tir_alpha,
)
from korteweg.medium import Director, MaterialParams, omega_for_omega_tau, tau2

FIG3 = MaterialParams(u1=1e-3, u2=5e-4)


def numpy_roots(x):
    """Generic companion-matrix oracle for the quartic in kappa."""
    return np.roots([x * x / 4.0, 0.0, 1.0, 0.0, -1.0])


def match_roots(a, b):
    a = sorted(a, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    b = sorted(b, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    return np.max(np.abs(np.array(a) - np.array(b)) / np.abs(np.array(b)))


def test_helmholtz_degenerate_pair():
    r = solve_wavenumbers(MaterialParams(), omega=1.0)
    assert r.degenerate
    assert list(r.roots) == [1.0, -1.0]
    assert r.evanescent is None


def test_omega_tau_one_values():
    r = roots_from_omega_tau(1.0)
    # kappa^2 = -2 +- 2 sqrt(2)
    assert r.propagating == pytest.approx(math.sqrt(-2 + 2 * math.sqrt(2)), rel=1e-14)
    assert r.propagating == pytest.approx(0.9101797, abs=1e-7)
    assert r.evanescent.imag == pytest.approx(2.1973682, abs=1e-7)
    assert r.kinds == (PROPAGATING, PROPAGATING, EVANESCENT, EVANESCENT)
    assert match_roots(r.roots, numpy_roots(1.0)) < 1e-12


def test_u1_example_against_companion_oracle():
    r = solve_wavenumbers(MaterialParams(u1=1e-3), omega=1.0)
    assert match_roots(r.roots, numpy_roots(r.omega_tau)) < 1e-10
    assert r.propagating == pytest.approx(0.999501, abs=1e-6)
    assert r.evanescent.imag == pytest.approx(31.6386, abs=1e-4)


@given(st.floats(1e-8, 1e4))
def test_roots_residual_pairs_and_vieta(x):
    r = roots_from_omega_tau(x)
    assert np.all(r.residuals() < 1e-12)
    assert sorted(-r.roots, key=lambda z: (z.real, z.imag)) == sorted(r.roots, key=lambda z: (z.real, z.imag))
    assert r.vieta_product() == pytest.approx(-4.0 / x**2, rel=1e-12)
    assert r.kinds.count(PROPAGATING) == 2 and r.kinds.count(EVANESCENT) == 2


@given(st.floats(1e-3, 1e3))
def test_roots_match_companion_oracle(x):
    assert match_roots(roots_from_omega_tau(x).roots, numpy_roots(x)) < 1e-8


def test_dimensional_roots_satisfy_dispersion():
    n = Director(1.0, 0.0)
    for xi in (0.0, 0.4, np.pi / 2):
        omega = 7.0
        r = solve_wavenumbers(FIG3, omega, xi)
        d = [math.cos(xi), math.sin(xi)]
        k = r.wavenumbers(omega, FIG3.c0)
        assert np.all(relative_dispersion_residual(FIG3, n, k, d, omega) < 1e-13)


def test_dispersion_residual_classical_and_orthogonal():
    p = MaterialParams(c0=2.0)
    assert dispersion_residual(p, Director(0, 1), 1.5 / 2.0, [1.0, 0.0], 1.5) == 0.0
    n = Director(0.0, 1.0)
    iso = MaterialParams(u1=1e-3)
    assert dispersion_residual(FIG3, n, 3.0, [1.0, 0.0], 2.0) == dispersion_residual(iso, n, 3.0, [1.0, 0.0], 2.0)


def test_speed_ratio_values():
    assert speed_ratio(0.0) == 1.0
    assert speed_ratio(1.0) == pytest.approx(0.9101797, abs=1e-7)
    assert speed_ratio(10.0) == pytest.approx(math.sqrt((-2 + 2 * math.sqrt(101)) / 100), rel=1e-14)
    assert speed_ratio(10.0) == pytest.approx(0.425438, abs=1e-6)


def test_speed_ratio_monotone_and_helmholtz_limit():
    # below x ~ 1e-7 the deviation from 1 is under one ulp
    x = np.logspace(-3, 4, 400)
    s = speed_ratio(x)
    assert np.all(np.diff(s) < 0)
    assert speed_ratio(1e-6) == pytest.approx(1.0, abs=1e-5)
    assert roots_from_omega_tau(1e-6).evanescent.imag > 1e5


def test_speed_ratio_small_argument_accuracy():
    # series 1 - x^2/8 + ... is cancellation-free at x = 1e-8
    assert 1.0 - speed_ratio(1e-4) == pytest.approx(1e-8 / 8, rel=1e-6)


def test_speed_is_greatest_along_director():
    omega = 12.0
    xis = np.linspace(0, np.pi, 37)
    ratios = [speed_ratio(omega * tau2(FIG3, xi)) for xi in xis]
    assert min(ratios) == ratios[0]
    assert phase_speed(FIG3, omega, 0.0) > phase_speed(FIG3, omega, np.pi / 2)


@given(st.floats(-6, 6), st.floats(0.1, 100))
def test_outputs_symmetric_in_xi(xi, omega):
    for f in (real_wavenumber, penetration_depth):
        a = f(FIG3, omega, xi)
        assert f(FIG3, omega, -xi) == pytest.approx(a, rel=1e-12)
        assert f(FIG3, omega, np.pi - xi) == pytest.approx(a, rel=1e-12)


def test_frequency_inverts_real_wavenumber():
    for xi in (0.0, 1.0):
        k = real_wavenumber(FIG3, 30.0, xi)
        assert frequency(FIG3, k, xi) == pytest.approx(30.0, rel=1e-13)


def test_penetration_depth_values():
    p = MaterialParams(u1=0.25)  # tau = 1
    assert penetration_depth(p, 1.0) == pytest.approx(0.776887, abs=1e-6)
    # equals c0 / (omega sqrt(alpha_+)) at c = c0
    assert penetration_depth(p, 1.0) == pytest.approx(1.0 / math.sqrt(tir_alpha(1.0).plus), rel=1e-14)
    with pytest.raises(ValueError):
        penetration_depth(MaterialParams(), 1.0)


def test_penetration_depth_asymptotics():
    p = MaterialParams(u1=0.25 * 100**2)  # omega tau = 100 at omega = 1
    exact = penetration_depth(p, 1.0)
    assert penetration_depth_asymptotic(p, 1.0) == 5.0
    assert abs(exact - 5.0) / exact < 0.005


def test_penetration_depth_largest_along_director():
    for omega in (0.5, 5.0, 50.0):
        assert penetration_depth(FIG3, omega, 0.0) > penetration_depth(FIG3, omega, np.pi / 2)


def test_evanescent_depth_is_inverse_imaginary_root():
    p = MaterialParams(u1=0.25)
    assert evanescent_depth(p, 1.0) == pytest.approx(1.0 / 2.1973682, rel=1e-7)
    assert evanescent_depth(MaterialParams(), 1.0) == math.inf


def test_tir_alpha_values():
    a = tir_alpha(1.0)
    assert a.plus == pytest.approx(4 * (math.sqrt(2) - 1), rel=1e-14)
    assert a.plus == pytest.approx(1.6568542, abs=1e-7)
    assert a.minus == pytest.approx(-9.6568542, abs=1e-7)
    assert a.physical == a.plus
    assert tir_alpha(1.0, 2.0).plus == pytest.approx(6.6274170, abs=1e-7)
    assert tir_alpha(1e-4).plus == pytest.approx(2.0, abs=1e-8)


@given(st.floats(1e-3, 1e3), st.floats(0.1, 10.0))
def test_tir_alpha_solves_its_quadratic(x, c):
    a = tir_alpha(x, c)
    q = 1.0 / c**2
    for alpha in a:
        val = -1.0 + q * alpha / 2.0 + x**2 / 16.0 * q * q * alpha**2
        scale = 1.0 + q * abs(alpha) / 2.0 + x**2 / 16.0 * q * q * alpha**2
        assert abs(val) / scale < 1e-13
    assert a.plus >= 0.0 > a.minus


def test_kirchhoff_love_mu():
    assert kirchhoff_love_mu(MaterialParams(u1=1.0), 1.0) == 1.0
    assert kirchhoff_love_mu(MaterialParams(u1=1e-3), 2.0) == pytest.approx(4000.0)
    with pytest.raises(ZeroDivisionError):
        kirchhoff_love_mu(MaterialParams(), 1.0)


def test_relative_residual_helper():
    assert quartic_relative_residual(np.array([1.0]), 0.0)[0] == 0.0
