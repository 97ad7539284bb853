"""Gamma function and Bessel functions of the first kind of real order.

Only what the Bochner-Riesz and ball kernels need: real arguments, positive
Gamma arguments, orders 0 <= nu <= 40 and arguments 0 <= x <= 1e4.

Bessel evaluation uses three branches:

* ascending power series for ``x <= 12``;
* Hankel's large-argument expansion for ``x > 12`` when its terms get small
  enough before they start to diverge (at least 8 correction terms);
* Miller's backward recurrence, normalized with the Neumann-type sum
  ``(x/2)**f = sum_k (f+2k) Gamma(f+k)/k! J_{f+2k}(x)``, for the remaining
  band where ``x`` is moderate but not large compared with ``nu``.
"""

from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 40.0
MAX_ARG = 1e4
SERIES_CUTOFF = 12.0
MIN_HANKEL_TERMS = 8

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)


def gamma_fn(x: float) -> float:
    """Gamma function for ``0 < x <= 170``."""
    x = float(x)
    if not (0.0 < x <= 170.0):
        raise ValueError(f"gamma_fn is defined here for 0 < x <= 170, got {x}")
    if x.is_integer():
        return float(math.factorial(int(x) - 1))
    if (2.0 * x).is_integer():
        # Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
        n = int(x - 0.5)
        return math.factorial(2 * n) / (4**n * math.factorial(n)) * _SQRT_PI
    if x < 0.5:
        return gamma_fn(x + 1.0) / x
    z = x - 1.0
    a = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        a += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power so that t**(z + 1/2) does not overflow near x = 170
    half = t ** ((z + 0.5) / 2.0)
    return _SQRT_2PI * half * (half * math.exp(-t)) * a


def _check_order(nu: float):
    if not (0.0 <= nu <= MAX_ORDER):
        raise ValueError(f"Bessel order must lie in [0, {MAX_ORDER}], got {nu}")


def _check_args(x: np.ndarray):
    if np.any(~np.isfinite(x)) or np.any(x < 0) or np.any(x > MAX_ARG):
        raise ValueError(f"Bessel argument must lie in [0, {MAX_ARG:g}]")


def _series_sum(nu: float, x: np.ndarray) -> np.ndarray:
    """``sum_k (-x^2/4)^k / (k! Gamma(k+nu+1))``, so that J = (x/2)^nu * sum."""
    q = -0.25 * x * x
    term = np.full_like(x, 1.0 / gamma_fn(nu + 1.0))
    total = term.copy()
    for k in range(1, 400):
        term = term * q / (k * (k + nu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _bessel_series(nu: float, x: np.ndarray) -> np.ndarray:
    return np.power(0.5 * x, nu) * _series_sum(nu, x)


def _hankel(nu: float, x: np.ndarray, tol: float = 1e-11, max_terms: int = 60):
    """Hankel expansion; returns (values, accepted-mask).

    Terms are added while their magnitude decreases. A point is accepted when
    at least ``MIN_HANKEL_TERMS`` corrections went in and the smallest one is
    below ``tol``. For half-integer order the expansion terminates and is
    summed in full.
    """
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    if (2.0 * nu) % 2.0 == 1.0:
        # half-integer order: the expansion is a finite sum, exact when the
        # terms are small enough not to cancel catastrophically
        biggest = np.ones_like(x)
        coef = 1.0
        for k in range(1, int(nu + 0.5) + 1):
            coef *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
            term = coef / np.power(x, k)
            sign = -1.0 if (k // 2) % 2 else 1.0
            if k % 2:
                q = q + sign * term
            else:
                p = p + sign * term
            biggest = np.maximum(biggest, np.abs(term))
        ok = biggest <= 1e3
    else:
        last = np.full_like(x, np.inf)
        used = np.zeros(x.shape, dtype=int)
        active = np.ones(x.shape, dtype=bool)
        coef = 1.0
        for k in range(1, max_terms + 1):
            coef *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
            term = coef / np.power(x, k)
            mag = np.abs(term)
            active &= mag < last
            if not active.any():
                break
            sign = -1.0 if (k // 2) % 2 else 1.0
            if k % 2:
                q = np.where(active, q + sign * term, q)
            else:
                p = np.where(active, p + sign * term, p)
            last = np.where(active, mag, last)
            used += active
        ok = (used >= MIN_HANKEL_TERMS) & (last <= tol)
    omega = x - (0.5 * nu + 0.25) * np.pi
    value = np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(omega) - q * np.sin(omega))
    return value, ok


def _bessel_miller(nu: float, x: float) -> float:
    """Backward recurrence from far above ``max(x, nu)``."""
    n0 = int(math.floor(nu))
    f = nu - n0
    big = max(x, nu)
    top = int(big) + 30 + int(12.0 * math.sqrt(big))
    j_next, j_cur = 0.0, 1e-280
    target = 0.0
    # normalization sum over even offsets: sum_k c_k J_{f+2k}
    norm = 0.0
    c_factor = _miller_coefficients(f, top // 2 + 2)
    for k in range(top, -1, -1):
        # j_cur currently holds J_{f+k} up to scale
        if k == n0:
            target = j_cur
        if k % 2 == 0:
            norm += c_factor[k // 2] * j_cur
        if k == 0:
            break
        j_prev = 2.0 * (f + k) / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            target *= 1e-250
            norm *= 1e-250
    return target * (0.5 * x) ** f / norm


def _miller_coefficients(f: float, count: int) -> list[float]:
    """``c_k = (f + 2k) Gamma(f + k) / k!`` with ``c_0 = Gamma(1 + f)``."""
    out = [gamma_fn(1.0 + f)]
    g = gamma_fn(1.0 + f)  # Gamma(f + 1) / 1!
    for k in range(1, count):
        out.append((f + 2 * k) * g)
        g *= (f + k) / (k + 1)
    return out


def bessel_j(nu: float, x):
    """Bessel function ``J_nu(x)`` for ``0 <= nu <= 40`` and ``0 <= x <= 1e4``.

    Accepts a scalar or an array for ``x``; the result has the same shape.
    """
    nu = float(nu)
    _check_order(nu)
    arr = np.asarray(x, dtype=float)
    _check_args(np.atleast_1d(arr))
    return _bessel_j(nu, arr)


def _bessel_j(nu: float, arr: np.ndarray):
    """Unchecked evaluation; beyond 1e4 only the Hankel branch is used, which
    is where it is most accurate."""
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    low = flat <= SERIES_CUTOFF
    if low.any():
        out[low] = _bessel_series(nu, flat[low])
    high = ~low
    if high.any():
        vals, ok = _hankel(nu, flat[high])
        idx = np.flatnonzero(high)
        out[idx[ok]] = vals[ok]
        for i in idx[~ok]:
            out[i] = _bessel_miller(nu, float(flat[i]))
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def bessel_j_ratio(nu: float, z):
    """``J_nu(z) / z**nu``, finite at ``z = 0`` where it equals ``1 / (2**nu Gamma(nu+1))``.

    Large arguments are allowed here (the ratio decays like ``z**(-nu-1/2)``
    and only the Hankel expansion is involved).
    """
    nu = float(nu)
    _check_order(nu)
    arr = np.asarray(z, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    if np.any(~np.isfinite(flat)) or np.any(flat < 0):
        raise ValueError("Bessel argument must be finite and nonnegative")
    out = np.empty_like(flat)
    low = flat <= SERIES_CUTOFF
    if low.any():
        out[low] = 2.0 ** (-nu) * _series_sum(nu, flat[low])
    if (~low).any():
        zz = flat[~low]
        out[~low] = _bessel_j(nu, zz) / np.power(zz, nu)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in R^d."""
    return math.pi ** (d / 2.0) / gamma_fn(d / 2.0 + 1.0)
