"""Gauss-type quadrature for oscillatory integrands over intervals and balls.

Node counts are driven by a *bandwidth* ``B``: the integrand is assumed to
oscillate no faster than ``exp(2 pi i B |xi|)``. Every rule is checked
against a refined one and :class:`QuadratureError` is raised if the two do not
agree to ``tol`` relative to the integral of the absolute value.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

PANEL_ORDER = 8
MAX_REFINEMENTS = 4


class QuadratureError(RuntimeError):
    """Quadrature did not reach its accuracy target."""


@lru_cache(maxsize=None)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=256)
def _jacobi(n: int, alpha: float, beta: float):
    return roots_jacobi(n, alpha, beta)


def panel_rule(a: float, b: float, max_width: float, order: int = PANEL_ORDER):
    """Composite Gauss-Legendre nodes and weights on ``[a, b]``."""
    if b <= a:
        return np.zeros(0), np.zeros(0)
    panels = max(1, math.ceil((b - a) / max_width))
    x, w = _legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _accept(coarse, fine, l1, tol):
    return abs(coarse - fine) <= tol * max(l1, 1e-300)


def integrate_interval(f, a: float, b: float, bandwidth: float, tol: float = 1e-6) -> complex:
    """``int_a^b f`` with panels no wider than ``min(1, 1/(4 B))``."""
    width = min(1.0, 1.0 / (4.0 * bandwidth)) if bandwidth > 0 else 1.0
    nodes, weights = panel_rule(a, b, width)
    coarse = complex(np.sum(weights * f(nodes)))
    for _ in range(MAX_REFINEMENTS):
        width *= 0.5
        nodes, weights = panel_rule(a, b, width)
        values = f(nodes)
        fine = complex(np.sum(weights * values))
        l1 = float(np.sum(weights * np.abs(values)))
        if _accept(coarse, fine, l1, tol):
            return fine
        coarse = fine
    raise QuadratureError(f"interval quadrature on [{a}, {b}] did not converge")


def _ball_rule(d: int, radius: float, alpha: float, n: int, m: int):
    """Nodes/weights for ``int_{|xi|<=radius} (1 - |xi|^2/radius^2)^alpha g(xi) dxi``."""
    if d == 1:
        u, w = _jacobi(n, alpha, alpha)
        return (radius * u)[:, None], radius * w
    # radial variable v = (r / radius)^2 on [0, 1]
    beta = 0.5 * d - 1.0
    x, w = _jacobi(n, alpha, beta)
    v = 0.5 * (1.0 + x)
    wv = w * 2.0 ** (-alpha - beta - 1.0)
    r = radius * np.sqrt(v)
    radial_w = wv * 0.5 * radius**d
    theta = 2.0 * np.pi * np.arange(m) / m
    if d == 2:
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        dir_w = np.full(m, 2.0 * np.pi / m)
    elif d == 3:
        s, sw = _legendre(n)
        sin_s = np.sqrt(1.0 - s * s)
        dirs = np.stack([
            (sin_s[:, None] * np.cos(theta)[None, :]).ravel(),
            (sin_s[:, None] * np.sin(theta)[None, :]).ravel(),
            np.repeat(s, m),
        ], axis=1)
        dir_w = (sw[:, None] * np.full(m, 2.0 * np.pi / m)[None, :]).ravel()
    else:
        raise ValueError(f"ball quadrature is implemented for d <= 3, got d = {d}")
    nodes = (r[:, None, None] * dirs[None, :, :]).reshape(-1, d)
    weights = (radial_w[:, None] * dir_w[None, :]).ravel()
    return nodes, weights


def _ball_sizes(d: int, c: float, scale: float):
    if d == 1:
        n = math.ceil(scale * (0.55 * c + 24))
        return n, 0
    n = math.ceil(scale * (0.3 * c + 24))
    m = 2 * math.ceil(scale * (0.5 * c + 16))
    return n, m


def integrate_ball(f, radius: float, d: int, bandwidth: float, alpha: float = 0.0,
                   tol: float = 1e-6) -> complex:
    """``int_{|xi| <= radius} (1 - |xi|^2/radius^2)^alpha f(xi) dxi`` for ``d <= 3``.

    ``f`` takes an ``(n, d)`` array of points. The radial weight is absorbed
    exactly by Gauss-Jacobi nodes, so ``alpha`` may be fractional.
    """
    c = 2.0 * np.pi * radius * max(bandwidth, 0.0)
    scale = 1.0
    nodes, weights = _ball_rule(d, radius, alpha, *_ball_sizes(d, c, scale))
    coarse = complex(np.sum(weights * f(nodes)))
    for _ in range(MAX_REFINEMENTS):
        scale *= 1.5
        nodes, weights = _ball_rule(d, radius, alpha, *_ball_sizes(d, c, scale))
        values = f(nodes)
        fine = complex(np.sum(weights * values))
        l1 = float(np.sum(np.abs(weights) * np.abs(values)))
        if _accept(coarse, fine, l1, tol):
            return fine
        coarse = fine
    raise QuadratureError(f"ball quadrature (d={d}, radius={radius}) did not converge")
