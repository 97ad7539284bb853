"""Weighted Fourier means on R^d built by scaling a nonnegative profile.

For a nonnegative integrable profile ``psi`` with transform ``psi_hat``,

    (1/(R^d psi_hat(0))) int psi(xi/R) mu_hat(xi) exp(2 pi i <x, xi>) dxi
        = (1/psi_hat(0)) int psi_hat(R (t - x)) dmu(t)

and both sides tend to ``mu({x})`` as ``R -> infinity``. Three profiles are
provided: the Gaussian ``exp(-pi |xi|^2)`` (its own transform), the cube
indicator of ``[-1, 1]^d`` and the Bochner-Riesz weight
``m_alpha(xi) = (1 - |xi|^2)_+^alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier import gaussian_cutoff, separable_terms, sinc
from .measures import GAUSSIAN, Measure
from .quadrature import integrate_ball, integrate_interval
from .records import RunRecord, truth_of
from .special import bessel_j_ratio, gamma_fn

KERNEL_GAUSSIAN = "gaussian"
KERNEL_BOX = "box"
KERNEL_BR = "bochner_riesz"

SMALL_ARG = 1e-4
# exp(-pi u^2) < 1e-17 beyond this many multiples of R
_GAUSS_PROFILE_REACH = math.sqrt(40.0 / math.pi)


def m_alpha(xi, alpha: float):
    """Bochner-Riesz weight ``(1 - |xi|^2)_+^alpha``; rows of ``xi`` are points."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim <= 1
    r2 = np.sum(np.atleast_2d(xi) ** 2, axis=1)
    out = np.power(np.clip(1.0 - r2, 0.0, None), alpha)
    return float(out[0]) if single else out


def m_alpha_hat_zero(d: int, alpha: float) -> float:
    """``pi^(d/2) Gamma(alpha+1) / Gamma(d/2+alpha+1)``: the transform at the origin."""
    return math.pi ** (d / 2.0) * gamma_fn(alpha + 1.0) / gamma_fn(d / 2.0 + alpha + 1.0)


def _m_alpha_hat_radial(s, d: int, alpha: float) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    nu = d / 2.0 + alpha
    z = 2.0 * np.pi * s
    zero_value = m_alpha_hat_zero(d, alpha)
    small = z < SMALL_ARG
    out = np.empty_like(z)
    out[small] = zero_value * (1.0 - z[small] ** 2 / (4.0 * (nu + 1.0)))
    big = ~small
    if big.any():
        const = 2.0**alpha * (2.0 * math.pi) ** (d / 2.0) * gamma_fn(alpha + 1.0)
        out[big] = const * bessel_j_ratio(nu, z[big])
    return out


def m_alpha_hat(t, d: int, alpha: float):
    """Transform of ``m_alpha`` on R^d:
    ``2^alpha (2 pi)^(d/2) Gamma(alpha+1) J_{d/2+alpha}(2 pi |t|) / (2 pi |t|)^(d/2+alpha)``.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    t = np.asarray(t, dtype=float)
    single = t.ndim <= 1
    pts = t.reshape(1, -1) if single else t
    if pts.shape[-1] != d:
        raise ValueError(f"points must have {d} coordinates")
    out = _m_alpha_hat_radial(np.sqrt(np.sum(pts * pts, axis=1)), d, alpha)
    return float(out[0]) if single else out


@dataclass(frozen=True)
class WeightKernel:
    """A nonnegative profile together with its closed-form transform."""

    kind: str
    d: int
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in (KERNEL_GAUSSIAN, KERNEL_BOX, KERNEL_BR):
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if self.kind == KERNEL_BR and not (self.alpha is not None and self.alpha > 0):
            raise ValueError("Bochner-Riesz kernels need alpha > 0")

    @classmethod
    def gaussian(cls, d: int) -> "WeightKernel":
        return cls(KERNEL_GAUSSIAN, d)

    @classmethod
    def box(cls, d: int) -> "WeightKernel":
        return cls(KERNEL_BOX, d)

    @classmethod
    def bochner_riesz(cls, d: int, alpha: float) -> "WeightKernel":
        return cls(KERNEL_BR, d, float(alpha))

    @property
    def is_radial(self) -> bool:
        return self.kind != KERNEL_BOX

    def profile(self, xi) -> np.ndarray:
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        if self.kind == KERNEL_GAUSSIAN:
            return np.exp(-np.pi * np.sum(xi * xi, axis=1))
        if self.kind == KERNEL_BOX:
            return np.all(np.abs(xi) <= 1.0, axis=1).astype(float)
        return m_alpha(xi, self.alpha)

    def transform(self, t) -> np.ndarray:
        t = np.atleast_2d(np.asarray(t, dtype=float))
        if self.kind == KERNEL_GAUSSIAN:
            return np.exp(-np.pi * np.sum(t * t, axis=1))
        if self.kind == KERNEL_BOX:
            return np.prod(2.0 * sinc(2.0 * np.pi * t), axis=1)
        return m_alpha_hat(t, self.d, self.alpha)

    def transform_at_zero(self) -> float:
        if self.kind == KERNEL_GAUSSIAN:
            return 1.0
        if self.kind == KERNEL_BOX:
            return 2.0**self.d
        return m_alpha_hat_zero(self.d, self.alpha)

    def phi(self, R: float, xi) -> np.ndarray:
        """Normalized dilated transform ``psi_hat(R xi) / psi_hat(0)``."""
        return self.transform(R * np.atleast_2d(np.asarray(xi, dtype=float))) / self.transform_at_zero()


def _check_context(mu: Measure, kernel: WeightKernel):
    if not mu.ctx.is_euclidean:
        raise ValueError(f"weighted means are defined here on R^d, not on {mu.ctx}")
    if kernel.d != mu.ctx.d:
        raise ValueError("kernel and measure dimensions differ")


def _frequency_term(kernel: WeightKernel, R: float, x: np.ndarray, term, tol: float) -> complex:
    """``int psi(xi/R) exp(2 pi i <x, xi>) term(xi) dxi`` for one separable term."""
    d = kernel.d
    band = np.abs(x - term.center) + term.extent
    cutoff = gaussian_cutoff(term.width) if term.kind == GAUSSIAN else np.inf
    coef = complex(term.coefficient)

    if kernel.kind in (KERNEL_GAUSSIAN, KERNEL_BOX):
        reach = R * _GAUSS_PROFILE_REACH if kernel.kind == KERNEL_GAUSSIAN else R
        lim = min(reach, cutoff)
        total = coef
        for j, f in enumerate(term.factors):
            if kernel.kind == KERNEL_GAUSSIAN:
                def integrand(t, f=f, xj=x[j]):
                    return np.exp(-np.pi * (t / R) ** 2 + 2j * np.pi * xj * t) * f(t)
            else:
                def integrand(t, f=f, xj=x[j]):
                    return np.exp(2j * np.pi * xj * t) * f(t)
            total *= integrate_interval(integrand, -lim, lim, band[j], tol)
        return total

    def full(xi):
        val = np.exp(2j * np.pi * (xi @ x))
        for j, f in enumerate(term.factors):
            val = val * f(xi[:, j])
        return val

    bw = float(np.linalg.norm(band))
    if cutoff < R:
        def weighted(xi):
            return full(xi) * m_alpha(xi / R, kernel.alpha)
        return coef * integrate_ball(weighted, cutoff, d, bw, tol=tol)
    return coef * integrate_ball(full, R, d, bw, alpha=kernel.alpha, tol=tol)


def frequency_side_mean(mu: Measure, kernel: WeightKernel, R: float, x, tol: float = 1e-9) -> complex:
    """First form: quadrature of ``psi(xi/R) mu_hat(xi) exp(2 pi i <x, xi>)``."""
    _check_context(mu, kernel)
    if not R > 0:
        raise ValueError("R must be positive")
    x = np.asarray(mu.ctx.point(x), dtype=float)
    total = sum(_frequency_term(kernel, R, x, term, tol) for term in separable_terms(mu))
    return complex(total) / (R**kernel.d * kernel.transform_at_zero())


def scaled_weight_mean(mu: Measure, kernel: WeightKernel, R: float, x,
                       tol: float = 1e-9) -> complex:
    """Weighted mean at scale ``R``, evaluated on the spatial side.

    Atoms contribute ``w psi_hat(R (t - x)) / psi_hat(0)`` exactly; continuous
    parts are integrated on the frequency side, where their transforms are
    smooth and, for Gaussians, rapidly decaying.
    """
    _check_context(mu, kernel)
    if not R > 0:
        raise ValueError("R must be positive")
    x = np.asarray(mu.ctx.point(x), dtype=float)
    total = 0j
    norm = kernel.transform_at_zero()
    for term in separable_terms(mu):
        if term.kind == "atom":
            total += complex(term.coefficient) * float(kernel.transform(R * (term.center - x))[0]) / norm
        else:
            total += _frequency_term(kernel, R, x, term, tol) / (R**kernel.d * norm)
    return total


@dataclass(frozen=True)
class SideComparison:
    spatial: complex
    frequency: complex

    @property
    def discrepancy(self) -> float:
        return abs(self.spatial - self.frequency)

    def relative(self, scale: float) -> float:
        """Discrepancy relative to ``max(|spatial|, scale)``."""
        return self.discrepancy / max(abs(self.spatial), scale)


def compare_sides(mu: Measure, kernel: WeightKernel, R: float, x, tol: float = 1e-9) -> SideComparison:
    """Evaluate both forms of the mean (verification mode)."""
    return SideComparison(scaled_weight_mean(mu, kernel, R, x, tol),
                          frequency_side_mean(mu, kernel, R, x, tol))


def br_mean_rd(mu: Measure, R: float, alpha: float, x) -> complex:
    """Bochner-Riesz mean
    ``Gamma(d/2+alpha+1) / (R^d pi^(d/2) Gamma(alpha+1)) int (1-|xi|^2/R^2)_+^alpha e^{2 pi i x xi} mu_hat(xi) dxi``.
    """
    return scaled_weight_mean(mu, WeightKernel.bochner_riesz(mu.ctx.d, alpha), R, x)


def sup_outside(kernel: WeightKernel, R: float, eta: float, span: float = 60.0,
                step: float = 0.01, directions: int = 180) -> float:
    """Numerical ``sup_{|xi| >= eta} |psi_hat(R xi)| / psi_hat(0)``.

    Scans radii ``|xi|`` from ``eta`` over ``span / R`` beyond it on a grid of
    ``step / R``, along one direction for radial kernels and over a fan of
    directions in the first quadrant (plus the axes) for the box profile.
    """
    s = eta + np.arange(0.0, span, step) / R
    if kernel.is_radial:
        dirs = np.eye(kernel.d)[:1]
    else:
        rng = np.random.default_rng(0)
        extra = np.abs(rng.normal(size=(directions, kernel.d)))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
        dirs = np.vstack([np.eye(kernel.d), extra])
    best = 0.0
    for u in dirs:
        vals = np.abs(kernel.phi(R, s[:, None] * u[None, :]))
        best = max(best, float(vals.max()))
    return best


def weighted_recover(mu: Measure, kernel: WeightKernel, x, scales) -> list[RunRecord]:
    scales = list(scales)
    if not scales:
        raise ValueError("scales must be nonempty")
    method = "gaussian" if kernel.kind == KERNEL_GAUSSIAN else (
        "bochner_riesz_rd" if kernel.kind == KERNEL_BR else "box_mean")
    point = tuple(float(v) for v in mu.ctx.point(x))
    truth = truth_of(mu, x)
    return [RunRecord(method, kernel.alpha, R, point, scaled_weight_mean(mu, kernel, R, x), truth)
            for R in scales]
