"""Bessel functions of integer order and real argument.

``J_j`` comes from Miller's downward recurrence normalized with
``J_0 + 2 sum_k J_2k = 1``.  ``Y_0`` and ``Y_1`` use their Neumann series in
the same ``J`` values for moderate arguments and the Hankel asymptotic
expansion for large ones; higher ``Y_j`` follow by upward recurrence.
Negative orders use ``C_{-j} = (-1)^j C_j``.
"""

from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 200

#: Above this argument ``Y_0, Y_1`` switch from the Neumann series to the asymptotic expansion.
#: The asymptotic remainder there is below ``exp(-2x) ~ 1e-22``.
ASYMPTOTIC_SWITCH = 25.0

#: ``Y_j(x)`` is reported as ``-inf`` for ``0 < x`` below this value.
Y_UNDERFLOW = 1e-8

_RESCALE = 1e250


def _check_order(j: int) -> int:
    j = int(j)
    if abs(j) > MAX_ORDER:
        raise ValueError(f"|order| must not exceed {MAX_ORDER}, got {j}")
    return j


def _sign(j: int) -> int:
    """Factor relating ``C_{-|j|}`` to ``C_{|j|}``."""
    return -1 if (j < 0 and j % 2) else 1


def _miller_start(jmax: int, x: float) -> int:
    m = max(jmax, int(x)) + 30 + int(math.sqrt(40.0 * max(jmax, x, 1.0)))
    return m + (m % 2)


def bessel_j_orders(jmax: int, x: float) -> np.ndarray:
    """``J_0(x), ..., J_jmax(x)`` for a single ``x >= 0``."""
    if x < 0.0 or not math.isfinite(x):
        raise ValueError(f"bessel_j needs finite x >= 0, got {x!r}")
    out = np.zeros(jmax + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    m = _miller_start(jmax, x)
    f = np.zeros(m + 2)
    f[m] = 1e-30
    for k in range(m, 0, -1):
        f[k - 1] = 2.0 * k / x * f[k] - f[k + 1]
        if abs(f[k - 1]) > _RESCALE:
            f[k - 1 :] /= _RESCALE
    norm = f[0] + 2.0 * np.sum(f[2 : m + 1 : 2])
    out[:] = f[: jmax + 1] / norm
    return out


def _y01_series(x: float) -> tuple:
    """``Y_0, Y_1`` from the Neumann series over Miller ``J`` values."""
    m = _miller_start(0, x)
    jv = bessel_j_orders(m, x)
    k = np.arange(1, m // 2)
    alt = np.where(k % 2, -1.0, 1.0)
    lg = math.log(x / 2.0) + np.euler_gamma
    y0 = lg * jv[0] - 2.0 * np.sum(alt * jv[2 * k] / k)
    y1 = -jv[0] / x + lg * jv[1] + np.sum(alt * (jv[2 * k - 1] - jv[2 * k + 1]) / k)
    return 2.0 / math.pi * y0, 2.0 / math.pi * y1


def _pq(nu: int, x: float) -> tuple:
    """Asymptotic amplitude series ``P_nu(x), Q_nu(x)``."""
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    term = 1.0
    last = math.inf
    for k in range(1, 200):
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) > last or term == 0.0:
            break
        last = abs(term)
        # a_k / x^k enters P with sign (-1)^(k/2) for even k, Q with (-1)^((k-1)/2) for odd k
        if k % 2:
            q += term * (-1.0 if (k // 2) % 2 else 1.0)
        else:
            p += term * (-1.0 if (k // 2) % 2 else 1.0)
        if last < 1e-17:
            break
    return p, q


def _y01_asymptotic(x: float) -> tuple:
    s, c = math.sin(x), math.cos(x)
    amp = math.sqrt(2.0 / (math.pi * x))
    # chi_0 = x - pi/4, chi_1 = x - 3pi/4
    sin0, cos0 = (s - c) / math.sqrt(2.0), (c + s) / math.sqrt(2.0)
    sin1, cos1 = -cos0, sin0
    p0, q0 = _pq(0, x)
    p1, q1 = _pq(1, x)
    return amp * (p0 * sin0 + q0 * cos0), amp * (p1 * sin1 + q1 * cos1)


def bessel_y_orders(jmax: int, x: float) -> np.ndarray:
    """``Y_0(x), ..., Y_jmax(x)`` for a single ``x > 0``.

    Orders beyond the overflow threshold come back as ``-inf``.
    """
    if not x > 0.0 or not math.isfinite(x):
        raise ValueError(f"bessel_y needs finite x > 0, got {x!r}")
    out = np.empty(jmax + 1)
    if x < Y_UNDERFLOW:
        out[:] = -np.inf
        return out
    y0, y1 = _y01_series(x) if x <= ASYMPTOTIC_SWITCH else _y01_asymptotic(x)
    out[0] = y0
    if jmax >= 1:
        out[1] = y1
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, jmax):
            if not math.isfinite(out[k]):
                out[k + 1 :] = -np.inf
                break
            out[k + 1] = 2.0 * k / x * out[k] - out[k - 1]
    return out


def hankel1_orders(jmax: int, x: float) -> np.ndarray:
    """``H^(1)_0(x), ..., H^(1)_jmax(x)`` for a single ``x > 0``."""
    return bessel_j_orders(jmax, x) + 1j * bessel_y_orders(jmax, x)


def _apply(kernel, j: int, x):
    j = _check_order(j)
    xs = np.asarray(x, dtype=float)
    vals = np.array([kernel(abs(j), float(v))[abs(j)] for v in xs.ravel()]).reshape(xs.shape)
    vals = _sign(j) * vals
    return vals[()] if vals.ndim == 0 else vals


def bessel_j(j: int, x):
    """Bessel function of the first kind ``J_j(x)``, ``x >= 0``."""
    return _apply(bessel_j_orders, j, x)


def bessel_y(j: int, x):
    """Bessel function of the second kind ``Y_j(x)``, ``x > 0``."""
    return _apply(bessel_y_orders, j, x)


def hankel1(j: int, x):
    """Hankel function of the first kind ``J_j(x) + i Y_j(x)``, ``x > 0``."""
    return _apply(hankel1_orders, j, x)


def signed_orders(values: np.ndarray) -> np.ndarray:
    """Extend ``C_0..C_m`` to ``C_{-m}..C_m`` using ``C_{-j} = (-1)^j C_j``."""
    m = len(values) - 1
    j = np.arange(-m, m + 1)
    sign = np.where((j < 0) & (j % 2 == 1), -1.0, 1.0)
    return sign * values[np.abs(j)]
