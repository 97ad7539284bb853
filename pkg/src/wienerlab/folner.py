"""Averages of ``mu_hat`` over Folner sets of the dual group.

On the torus the dual is Z^d and the average over a finite set ``F`` is a
finite sum. On R^d the average

    (1/|F|) int_F exp(2 pi i <x, xi>) mu_hat(xi) dxi

is evaluated spatially for atoms, as ``sum_t w_t phi_F(t - x)`` with
``phi_F`` the normalized transform of the indicator of ``F``, and by
frequency-side quadrature for the continuous parts. A frequency-only path is
available to cross-check the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .fourier import gaussian_cutoff, mu_hat, separable_terms, sinc
from .groups import GroupContext
from .measures import GAUSSIAN, Measure
from .quadrature import integrate_ball, integrate_interval
from .records import RunRecord, truth_of
from .special import bessel_j_ratio, gamma_fn, unit_ball_volume

CUBE = "cube"
BALL = "ball"
BOX = "box"
ELLIPSOID = "ellipsoid"
FINITE_BOX = "finite_box"

LATTICE = "lattice"
REAL = "real"
FINITE = "finite"


@dataclass(frozen=True)
class FolnerSet:
    """A bounded region of the dual group.

    ``axes`` holds the half-widths (cube, box), radius repeated (ball),
    semi-axes (ellipsoid) or side lengths (finite_box, the lexicographic box
    ``{0..s_1-1} x ... x {0..s_d-1}`` of a finite dual).
    """

    kind: str
    dual: str
    axes: tuple

    def __post_init__(self):
        if self.kind not in (CUBE, BALL, BOX, ELLIPSOID, FINITE_BOX):
            raise ValueError(f"unknown Folner set kind {self.kind!r}")
        if self.dual not in (LATTICE, REAL, FINITE):
            raise ValueError(f"unknown dual {self.dual!r}")
        if (self.kind == FINITE_BOX) != (self.dual == FINITE):
            raise ValueError("finite_box sets live exactly on finite duals")
        if not self.axes:
            raise ValueError("a Folner set needs at least one axis")
        # the closed lattice ball/cube of radius 0 is {0}; everything else is open-bodied
        allow_zero = self.dual == LATTICE and self.kind in (CUBE, BALL)
        if any(a < 0 or (a == 0 and not allow_zero) for a in self.axes):
            raise ValueError(f"Folner set sizes must be positive, got {self.axes}")
        if self.kind in (CUBE, BALL) and len(set(self.axes)) != 1:
            raise ValueError(f"a {self.kind} has a single size")

    @classmethod
    def cube(cls, n, d: int, dual: str = LATTICE) -> "FolnerSet":
        return cls(CUBE, dual, (float(n),) * d)

    @classmethod
    def ball(cls, n, d: int, dual: str = LATTICE) -> "FolnerSet":
        return cls(BALL, dual, (float(n),) * d)

    @classmethod
    def box(cls, half_widths, dual: str = REAL) -> "FolnerSet":
        return cls(BOX, dual, tuple(float(h) for h in half_widths))

    @classmethod
    def ellipsoid(cls, semi_axes, dual: str = REAL) -> "FolnerSet":
        return cls(ELLIPSOID, dual, tuple(float(a) for a in semi_axes))

    @classmethod
    def finite_box(cls, sizes) -> "FolnerSet":
        return cls(FINITE_BOX, FINITE, tuple(int(s) for s in sizes))

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def radius(self) -> float:
        return self.axes[0]

    @property
    def inner_radius(self) -> float:
        """Radius of the largest ball inside the set (as a subset of R^d)."""
        if self.kind == FINITE_BOX:
            return min(self.axes) / 2.0
        return min(self.axes)

    def measure(self) -> float:
        """Haar measure: a point count on discrete duals, a volume on R^d."""
        if self.dual != REAL:
            return float(lattice_count(self))
        a = np.asarray(self.axes)
        if self.kind in (CUBE, BOX):
            return float(np.prod(2.0 * a))
        return unit_ball_volume(self.d) * float(np.prod(a))

    def check_dual(self, ctx: GroupContext):
        expected = {"torus": LATTICE, "euclidean": REAL, "finite": FINITE}[ctx.kind]
        if self.dual != expected or self.d != ctx.d:
            raise ValueError(f"{self.kind} set on a {self.dual} dual of dimension {self.d} "
                             f"does not fit {ctx}")
        if ctx.is_finite and any(s > m for s, m in zip(self.axes, ctx.moduli)):
            raise ValueError("finite box is larger than the dual group")


# -- lattice enumeration -------------------------------------------------

@lru_cache(maxsize=None)
def _ball_points(d: int, r2: int) -> np.ndarray:
    """Integer points with ``|k|^2 <= r2``, exact integer arithmetic."""
    top = math.isqrt(r2)
    if d == 1:
        return np.arange(-top, top + 1, dtype=np.int64)[:, None]
    blocks = []
    for k1 in range(-top, top + 1):
        rest = _ball_points(d - 1, r2 - k1 * k1)
        blocks.append(np.hstack([np.full((len(rest), 1), k1, dtype=np.int64), rest]))
    out = np.vstack(blocks)
    out.setflags(write=False)
    return out


def _box_points(bounds) -> np.ndarray:
    ranges = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    grid = np.meshgrid(*ranges, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


@lru_cache(maxsize=256)
def _lattice_points_cached(fset: FolnerSet) -> np.ndarray:
    if fset.kind == FINITE_BOX:
        grid = np.indices(fset.axes).reshape(fset.d, -1).T
        pts = grid.astype(np.int64)
    elif fset.kind == BALL:
        n = fset.radius
        r2 = int(round(n)) ** 2 if float(n).is_integer() else math.floor(n * n)
        pts = _ball_points(fset.d, r2)
    elif fset.kind in (CUBE, BOX):
        pts = _box_points([int(math.floor(a)) for a in fset.axes])
    else:
        a = np.asarray(fset.axes)
        pts = _box_points([int(math.floor(v)) for v in a])
        keep = np.sum((pts / a) ** 2, axis=1) <= 1.0 + 1e-12
        pts = pts[keep]
    pts = np.ascontiguousarray(pts)
    pts.setflags(write=False)
    return pts


def lattice_points(fset: FolnerSet) -> tuple[np.ndarray, int]:
    """All dual-lattice points of ``fset`` and their number."""
    if fset.dual == REAL:
        raise ValueError("lattice enumeration needs a discrete dual")
    pts = _lattice_points_cached(fset)
    return pts, len(pts)


def lattice_count(fset: FolnerSet) -> int:
    return lattice_points(fset)[1]


def _keys(pts: np.ndarray, lo: np.ndarray, span: np.ndarray) -> np.ndarray:
    shifted = pts - lo
    strides = np.cumprod(np.concatenate([[1], span[:-1]]))
    return shifted @ strides


def folner_defect(fset: FolnerSet, gamma0) -> Fraction:
    """``|F sym-diff (gamma0 + F)| / |F|`` computed exactly by enumeration."""
    pts, count = lattice_points(fset)
    shift = np.atleast_1d(np.asarray(gamma0, dtype=np.int64))
    if shift.shape != (fset.d,):
        raise ValueError(f"shift must have {fset.d} coordinates")
    moved = pts + shift
    if fset.dual == FINITE:
        raise ValueError("defects are measured on Z^d, not on a finite dual")
    lo = np.minimum(pts.min(axis=0), moved.min(axis=0))
    span = np.maximum(pts.max(axis=0), moved.max(axis=0)) - lo + 1
    common = np.intersect1d(_keys(pts, lo, span), _keys(moved, lo, span)).size
    return Fraction(2 * (count - common), count)


# -- averages -----------------------------------------------------------

def lattice_mean(ctx: GroupContext, freqs: np.ndarray, coeffs: np.ndarray, xs) -> np.ndarray:
    """``sum_k coeffs[k] exp(2 pi i <k, x>)`` for every row of ``xs``."""
    xs = ctx.point(xs)
    xs = np.atleast_2d(xs)
    out = np.empty(len(xs), dtype=complex)
    chunk = max(1, 4_000_000 // max(1, len(freqs)))
    for start in range(0, len(xs), chunk):
        block = xs[start:start + chunk]
        phase = ctx.pairing(freqs[None, :, :], block[:, None, :])
        out[start:start + chunk] = np.exp(2j * np.pi * phase) @ coeffs
    return out


def indicator_transform(fset: FolnerSet, t) -> np.ndarray:
    """``phi_F(t) = (1/|F|) int_F exp(-2 pi i <t, xi>) dxi`` for a set in R^d."""
    if fset.dual != REAL:
        raise ValueError("closed-form indicator transforms are for R^d")
    t = np.atleast_2d(np.asarray(t, dtype=float))
    a = np.asarray(fset.axes)
    if fset.kind in (CUBE, BOX):
        return np.prod(sinc(2.0 * np.pi * a * t), axis=1)
    nu = fset.d / 2.0
    z = 2.0 * np.pi * np.sqrt(np.sum((a * t) ** 2, axis=1))
    return gamma_fn(nu + 1.0) * 2.0**nu * bessel_j_ratio(nu, z)


def _frequency_term(fset: FolnerSet, x: np.ndarray, term, tol) -> complex:
    """``int_F exp(2 pi i <x, xi>) term(xi) dxi`` for one separable term."""
    a = np.asarray(fset.axes)
    band = np.abs(x - term.center) + term.extent
    cutoff = gaussian_cutoff(term.width) if term.kind == GAUSSIAN else np.inf
    if fset.kind in (CUBE, BOX):
        total = complex(term.coefficient)
        for j, f in enumerate(term.factors):
            lim = min(a[j], cutoff)

            def integrand(t, f=f, xj=x[j]):
                return np.exp(2j * np.pi * xj * t) * f(t)

            total *= integrate_interval(integrand, -lim, lim, band[j], tol)
        return total

    def full(xi):
        val = np.exp(2j * np.pi * (xi @ x))
        for j, f in enumerate(term.factors):
            val = val * f(xi[:, j])
        return val

    if cutoff < a.min():
        # the Gaussian has died out well inside the set
        return complex(term.coefficient) * integrate_ball(
            full, cutoff, fset.d, float(np.linalg.norm(band)), tol=tol)

    def mapped(u):
        return full(u * a)

    bw = float(np.linalg.norm(band * a))
    return (complex(term.coefficient) * float(np.prod(a))
            * integrate_ball(mapped, 1.0, fset.d, bw, tol=tol))


def euclidean_average(mu: Measure, fset: FolnerSet, x, path: str = "spatial",
                      tol: float = 1e-6) -> complex:
    x = np.asarray(mu.ctx.point(x), dtype=float)
    vol = fset.measure()
    total = 0j
    for term in separable_terms(mu):
        if term.kind == "atom" and path == "spatial":
            total += complex(term.coefficient) * float(indicator_transform(fset, term.center - x)[0])
        else:
            total += _frequency_term(fset, x, term, tol) / vol
    return total


def folner_average(mu, fset: FolnerSet, x, path: str = "spatial") -> complex:
    """Normalized average ``(1/|F|) int_F gamma(x) mu_hat(gamma) dgamma``.

    ``path`` only matters on R^d: ``"spatial"`` (closed form for atoms) or
    ``"frequency"`` (quadrature for everything).
    """
    ctx = mu.ctx
    fset.check_dual(ctx)
    if ctx.is_euclidean:
        if path not in ("spatial", "frequency"):
            raise ValueError(f"unknown evaluation path {path!r}")
        return euclidean_average(mu, fset, x, path)
    pts, count = lattice_points(fset)
    coeffs = mu_hat(mu, pts) / count
    return complex(lattice_mean(ctx, pts, coeffs, x)[0])


def folner_average_many(mu, fset: FolnerSet, xs) -> np.ndarray:
    """Vectorized :func:`folner_average` over many probe points (discrete duals)."""
    ctx = mu.ctx
    fset.check_dual(ctx)
    if ctx.is_euclidean:
        return np.array([euclidean_average(mu, fset, x) for x in np.atleast_2d(xs)])
    pts, count = lattice_points(fset)
    return lattice_mean(ctx, pts, mu_hat(mu, pts) / count, xs)


def nested_cube_averages(mu, x, n_max: int) -> np.ndarray:
    """Cube averages on T^d at ``x`` for every ``n = 0..n_max`` in one pass.

    Terms are grouped by the sup-norm of ``k`` and accumulated, so entry ``n``
    is the average over ``{|k|_inf <= n}``.
    """
    ctx = mu.ctx
    if not ctx.is_torus:
        raise ValueError("nested cube sweeps run on the torus")
    n_max = int(n_max)
    pts, _ = lattice_points(FolnerSet.cube(n_max, ctx.d))
    point = ctx.point(x).reshape(-1, ctx.d)[0]
    terms = mu_hat(mu, pts) * np.exp(2j * np.pi * ctx.pairing(pts, point))
    shell = np.max(np.abs(pts), axis=1)
    sums = (np.bincount(shell, weights=terms.real, minlength=n_max + 1)
            + 1j * np.bincount(shell, weights=terms.imag, minlength=n_max + 1))
    counts = (2.0 * np.arange(n_max + 1) + 1.0) ** ctx.d
    return np.cumsum(sums) / counts


# -- sequences -----------------------------------------------------------

@dataclass(frozen=True)
class FolnerSequence:
    name: str
    generator: Callable[[float], FolnerSet]

    def __call__(self, n) -> FolnerSet:
        return self.generator(n)

    def measures(self, indices) -> list[float]:
        return [self(n).measure() for n in indices]

    def inner_radii(self, indices) -> list[float]:
        return [self(n).inner_radius for n in indices]

    def check_increasing(self, indices) -> bool:
        m = self.measures(indices)
        return all(b > a for a, b in zip(m, m[1:]))


def _dual_of(ctx: GroupContext) -> str:
    return {"torus": LATTICE, "euclidean": REAL, "finite": FINITE}[ctx.kind]


def cubes(ctx: GroupContext) -> FolnerSequence:
    dual = _dual_of(ctx)
    return FolnerSequence("folner_cube", lambda n: FolnerSet.cube(n, ctx.d, dual))


def balls(ctx: GroupContext) -> FolnerSequence:
    dual = _dual_of(ctx)
    return FolnerSequence("folner_ball", lambda n: FolnerSet.ball(n, ctx.d, dual))


def boxes(ctx: GroupContext, base_half_widths) -> FolnerSequence:
    """``F_n = n * base`` for an axis-aligned box; inner radius ``n * min(base)``."""
    base = np.asarray(base_half_widths, dtype=float)
    dual = _dual_of(ctx)
    return FolnerSequence("folner_box", lambda n: FolnerSet.box(n * base, dual))


def ellipsoids(ctx: GroupContext, base_semi_axes) -> FolnerSequence:
    base = np.asarray(base_semi_axes, dtype=float)
    dual = _dual_of(ctx)
    return FolnerSequence("folner_ellipsoid", lambda n: FolnerSet.ellipsoid(n * base, dual))


def finite_boxes(ctx: GroupContext) -> FolnerSequence:
    """Lexicographic boxes ``{0..min(n, m_j)-1}`` exhausting a finite dual."""
    moduli = ctx.moduli
    return FolnerSequence(
        "finite_box",
        lambda n: FolnerSet.finite_box([min(int(n), m) for m in moduli]),
    )


def wiener_recover(mu, sequence: FolnerSequence, x, indices) -> list[RunRecord]:
    """One :class:`RunRecord` per index: the Folner average at ``x`` against ``mu({x})``."""
    indices = list(indices)
    if not indices:
        raise ValueError("indices must be nonempty")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError("indices must be increasing")
    point = tuple(float(v) for v in np.atleast_1d(mu.ctx.point(x)).ravel())
    truth = truth_of(mu, x)
    return [
        RunRecord(sequence.name, None, n, point, folner_average(mu, sequence(n), x), truth)
        for n in indices
    ]
