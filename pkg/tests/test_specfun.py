import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import j_series, y_ref

from korteweg.specfun import (
    bessel_j,
    bessel_j_orders,
    bessel_y,
    bessel_y_orders,
    hankel1,
    hankel1_orders,
    signed_orders,
)

GRID = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0]


def rel(a, b):
    return abs(a - b) / abs(b)


def test_trivial_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert abs(bessel_j(0, 2.4048256)) < 1e-6


def test_y_and_hankel_examples():
    assert bessel_y(0, 1.0) == pytest.approx(0.0882570, abs=1e-7)
    assert bessel_y(1, 1.0) == pytest.approx(-0.7812128, abs=1e-7)
    h = hankel1(0, 1.0)
    assert h.real == pytest.approx(0.7651977, abs=1e-7)
    assert h.imag == pytest.approx(0.0882570, abs=1e-7)


def test_domain_errors():
    with pytest.raises(ValueError):
        bessel_j(0, -1.0)
    with pytest.raises(ValueError):
        bessel_y(0, 0.0)
    with pytest.raises(ValueError):
        hankel1(2, -0.5)
    with pytest.raises(ValueError):
        bessel_j(201, 1.0)
    assert bessel_y(0, 1e-9) == -math.inf


@pytest.mark.parametrize("x", GRID)
def test_j_matches_power_series(x):
    jv = bessel_j_orders(50, x)
    for n in range(51):
        ref = j_series(n, x)
        if abs(ref) > 1e-250:
            assert rel(jv[n], ref) < 1e-10, (n, x)


@pytest.mark.parametrize("x", GRID + [30.0, 45.0, 50.0])
def test_y_matches_reference(x):
    yv = bessel_y_orders(50, x)
    for n in range(51):
        ref = y_ref(n, x)
        if math.isfinite(yv[n]) and abs(ref) < 1e300:
            assert rel(yv[n], ref) < 1e-9, (n, x)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 50.0), st.integers(0, 50))
def test_wronskian(x, j):
    jv = bessel_j_orders(j + 1, x)
    yv = bessel_y_orders(j + 1, x)
    w = jv[j + 1] * yv[j] - jv[j] * yv[j + 1]
    if math.isfinite(w):
        assert rel(w, 2.0 / (math.pi * x)) < 1e-9


def test_wronskian_example():
    assert bessel_j(6, 3.0) * bessel_y(5, 3.0) - bessel_j(5, 3.0) * bessel_y(6, 3.0) == pytest.approx(
        2 / (3 * math.pi), rel=1e-9
    )


@settings(max_examples=60, deadline=None)
@given(st.floats(0.5, 50.0), st.integers(1, 40))
def test_three_term_recurrence(x, j):
    for f in (bessel_j_orders, bessel_y_orders):
        c = f(j + 1, x)
        lhs = c[j - 1] + c[j + 1]
        rhs = 2 * j / x * c[j]
        scale = max(abs(c[j - 1]), abs(c[j + 1]), abs(rhs))
        assert abs(lhs - rhs) <= 1e-9 * scale


@pytest.mark.parametrize("x", [0.1, 1.0, 7.3, 20.0, 50.0])
def test_normalization_identity(x):
    jv = bessel_j_orders(int(x) + 60, x)
    assert jv[0] ** 2 + 2 * np.sum(jv[1:] ** 2) == pytest.approx(1.0, abs=1e-10)


def test_negative_orders():
    for j in range(-7, 0):
        assert bessel_j(j, 3.3) == (-1) ** j * bessel_j(-j, 3.3)
        assert bessel_y(j, 3.3) == (-1) ** j * bessel_y(-j, 3.3)
    full = signed_orders(hankel1_orders(5, 2.0))
    assert full[0] == -hankel1(5, 2.0)
    assert full[5] == hankel1(0, 2.0)


def test_vector_argument():
    x = np.array([0.5, 1.0, 2.0])
    assert bessel_j(2, x) == pytest.approx([j_series(2, v) for v in x], rel=1e-12)


def test_large_argument_modulus():
    assert abs(hankel1(0, 40.0)) * math.sqrt(math.pi * 40.0 / 2.0) == pytest.approx(1.0, abs=1e-3)


def test_continuity_at_asymptotic_switch():
    for n in (0, 1, 5):
        for x in (25.0 - 1e-9, 25.0 + 1e-9):
            assert rel(bessel_y(n, x), y_ref(n, x)) < 1e-9
