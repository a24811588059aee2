import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from korteweg.medium import Director, MaterialParams
from korteweg.reflection import (
    IMPEDANCE,
    SOUND_HARD,
    SOUND_SOFT,
    ImpedanceResonance,
    InterfaceSpec,
    NoTotalInternalReflection,
    PlaneWave,
    Superposition,
    boundary_residual,
    critical_angle,
    incoming_wave,
    reflect_amplitude,
    reflected_field,
    snell_transmit,
    tir_decay_parameter,
    tir_transmitted_wave,
)

FIG3 = MaterialParams(u1=1e-3, u2=5e-4)
X1 = np.linspace(-3.0, 3.0, 41)


def random_waves(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = Director.from_angle(rng.uniform(0, np.pi))
        omega = rng.uniform(0.5, 40.0)
        theta = rng.uniform(0.0, 1.5)
        yield incoming_wave(FIG3, n, omega, theta, s0=complex(*rng.normal(size=2))), n, omega


def test_soft_and_hard_amplitudes():
    w = PlaneWave.from_angle(2.0, -1.0)
    assert reflect_amplitude(w, InterfaceSpec(SOUND_SOFT)) == -1
    assert reflect_amplitude(w, InterfaceSpec(SOUND_HARD)) == 1


def test_boundary_residual_for_reflected_fields():
    for i, (w, n, omega) in enumerate(random_waves(20, 1)):
        assert w.is_admissible(FIG3, n, omega)
        zeta = complex(*np.random.default_rng(i).normal(size=2)) * w.k
        for iface in (InterfaceSpec(SOUND_SOFT), InterfaceSpec(SOUND_HARD), InterfaceSpec(IMPEDANCE, zeta)):
            assert boundary_residual(reflected_field(w, iface), iface, X1) < 1e-10


def test_wrong_amplitude_is_detected():
    w = PlaneWave.from_angle(1.0, -2.0)
    bad = Superposition((w, w.mirror(0.5)))
    assert boundary_residual(bad, InterfaceSpec(SOUND_SOFT), X1) > 0.5
    assert boundary_residual(reflected_field(w, InterfaceSpec(SOUND_SOFT)), InterfaceSpec(SOUND_SOFT), X1) < 1e-12


def test_impedance_limits():
    w = PlaneWave.from_angle(3.0, -1.2)
    assert reflect_amplitude(w, InterfaceSpec(IMPEDANCE, 0.0)) == pytest.approx(-1.0, abs=1e-15)
    assert reflect_amplitude(w, InterfaceSpec(IMPEDANCE, 1e10)) == pytest.approx(1.0, abs=1e-8)


def test_impedance_resonance():
    w = PlaneWave.from_angle(2.0, -np.pi / 2)
    with pytest.raises(ImpedanceResonance):
        reflect_amplitude(w, InterfaceSpec(IMPEDANCE, w.d[1] * w.k))


def test_rejects_outgoing_wave_and_bad_spec():
    with pytest.raises(ValueError):
        reflect_amplitude(PlaneWave.from_angle(1.0, 1.0), InterfaceSpec())
    with pytest.raises(ValueError):
        InterfaceSpec("clamped")
    with pytest.raises(ValueError):
        InterfaceSpec(IMPEDANCE, complex(math.inf, 0))
    with pytest.raises(ValueError):
        InterfaceSpec(refractive_pair=(1.0, 0.0))


@given(st.floats(0.1, 50.0), st.floats(-np.pi + 0.01, -0.01), st.floats(-1e3, 1e3))
def test_unit_modulus_for_lossless_impedance(k, angle, b):
    w = PlaneWave.from_angle(k, angle)
    try:
        a = reflect_amplitude(w, InterfaceSpec(IMPEDANCE, 1j * b))
    except ImpedanceResonance:
        return
    assert abs(a) == pytest.approx(1.0, rel=1e-12)


def test_resistive_impedance_absorbs():
    w = PlaneWave.from_angle(2.0, -np.pi / 2)
    assert abs(reflect_amplitude(w, InterfaceSpec(IMPEDANCE, 1.0))) < 1.0


@pytest.mark.parametrize("zeta", [0.5, 5.0, 15.0, 40.0])
def test_nematic_impedance_anisotropy(zeta):
    # normal incidence: director along the wave (xi = 0) or across it (xi = pi/2)
    omega = 20.0
    along = incoming_wave(FIG3, Director(0.0, 1.0), omega, 0.0)
    across = incoming_wave(FIG3, Director(1.0, 0.0), omega, 0.0)
    assert along.k < across.k
    iface = InterfaceSpec(IMPEDANCE, zeta)
    a0, a90 = abs(reflect_amplitude(along, iface)), abs(reflect_amplitude(across, iface))
    assert a0 != pytest.approx(a90, rel=1e-3)
    # for real zeta, |A| = |k - zeta|/(k + zeta) falls with k below zeta and rises above it
    if across.k < zeta:
        assert a0 > a90
    elif along.k > zeta:
        assert a0 < a90


def test_snell_examples():
    d = snell_transmit(0.3, 1.2, 1.2)
    assert d.real == pytest.approx([0.2955202, 0.9553365], abs=1e-7)
    assert list(snell_transmit(0.0, 1.0, 2.0)) == [0.0, 1.0]
    d = snell_transmit(np.pi / 3, 1.5, 1.0)
    assert d[0].real == pytest.approx(1.2990381, abs=1e-7)
    assert d[1].real == 0.0 and d[1].imag == pytest.approx(math.sqrt(0.6875))


@given(st.floats(0.0, 1.5), st.floats(0.5, 2.0), st.floats(0.5, 2.0))
def test_snell_reciprocity(theta, n, nT):
    d = snell_transmit(theta, n, nT)
    if d[1].imag != 0.0 or abs(d[0].real) >= 1.0 - 1e-9:
        return
    theta_t = math.asin(d[0].real)
    back = snell_transmit(theta_t, nT, n)
    assert math.asin(back[0].real) == pytest.approx(theta, abs=1e-12)


def test_critical_angle():
    assert critical_angle(1.5, 1.0) == pytest.approx(0.7297277, abs=1e-7)
    assert critical_angle(1.3, 1.3) == pytest.approx(np.pi / 2)
    with pytest.raises(NoTotalInternalReflection):
        critical_angle(1.0, 1.5)


def test_tir_transmitted_wave():
    kt = tir_transmitted_wave(np.pi / 3, 1.0, 1.5, 1.0)
    assert tir_decay_parameter(np.pi / 3, 1.0, 1.5, 1.0) == pytest.approx(0.3055556, abs=1e-7)
    assert kt[0].real == pytest.approx(0.8660254, abs=1e-7)
    assert abs(kt[1]) == pytest.approx(math.sqrt(11.0 / 36.0), rel=1e-14)
    # 1/e decay at depth 1/sqrt(alpha) below the interface
    depth = 1.0 / abs(kt[1])
    assert abs(np.exp(1j * kt[1] * (-depth))) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert tir_decay_parameter(critical_angle(1.5, 1.0), 2.0, 1.5, 1.0) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        tir_transmitted_wave(0.2, 1.0, 1.5, 1.0)
