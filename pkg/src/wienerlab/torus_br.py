"""Bochner-Riesz means on the torus T^d.

``B_N^{d,delta}(x) = sum_{k in Z^d} (1 - |k|^2/N^2)_+^delta exp(2 pi i <k, x>)``
with normalizer ``beta_N^{d,delta} = B_N^{d,delta}(0)``. For ``delta = 0`` the
kernel is the spherical Dirichlet kernel (all ``|k| <= N``, boundary included).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .folner import _ball_points, lattice_mean
from .fourier import mu_hat
from .groups import GroupContext
from .records import RunRecord, truth_of


@dataclass(frozen=True)
class SquaredRadiusShells:
    """Lattice points of the ball ``|k| <= N`` grouped by ``j = |k|^2``.

    ``sq[i]`` is the squared norm of ``points[i]``; ``counts[j]`` is the size
    of the shell ``{|k|^2 = j}`` (possibly zero).
    """

    N: int
    d: int
    points: np.ndarray
    sq: np.ndarray
    counts: np.ndarray

    def shell(self, j: int) -> np.ndarray:
        return self.points[self.sq == j]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@lru_cache(maxsize=64)
def shells(N: int, d: int) -> SquaredRadiusShells:
    if N < 0 or d < 1:
        raise ValueError("need N >= 0 and d >= 1")
    pts = _ball_points(d, N * N)
    sq = np.sum(pts * pts, axis=1)
    counts = np.bincount(sq, minlength=N * N + 1)
    sq.setflags(write=False)
    counts.setflags(write=False)
    return SquaredRadiusShells(N, d, pts, sq, counts)


def _as_points(d: int, x) -> tuple[np.ndarray, bool]:
    ctx = GroupContext.torus(d)
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 0 or (arr.ndim == 1 and (d > 1 or arr.size == 1))
    return ctx.point(x).reshape(-1, d), single


def _weights(sq: np.ndarray, N: int, delta: float) -> np.ndarray:
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta == 0:
        return np.ones(len(sq))
    return np.clip(1.0 - sq / float(N * N), 0.0, None) ** delta


def _kernel(N: int, delta: float, d: int, x):
    sh = shells(N, d)
    xs, single = _as_points(d, x)
    vals = lattice_mean(GroupContext.torus(d), sh.points, _weights(sh.sq, N, delta).astype(complex), xs)
    return complex(vals[0]) if single else vals


def dirichlet_spherical(N: int, d: int, x):
    """``D_N^d(x) = sum_{|k| <= N} exp(2 pi i <k, x>)``."""
    return _kernel(N, 0.0, d, x)


def dirichlet_closed_form(N: int, x):
    """``sin((2N+1) pi x) / sin(pi x)`` on T^1, with the value ``2N+1`` on Z."""
    x = np.asarray(x, dtype=float)
    r = x - np.round(x)
    on_lattice = r == 0.0
    safe = np.where(on_lattice, 0.5, r)
    out = np.sin((2 * N + 1) * np.pi * safe) / np.sin(np.pi * safe)
    out = np.where(on_lattice, 2.0 * N + 1.0, out)
    return float(out) if out.ndim == 0 else out


def br_kernel_torus(N: int, delta: float, d: int, x):
    """Direct lattice sum ``B_N^{d,delta}(x)``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return _kernel(N, delta, d, x)


def beta(N: int, delta: float, d: int) -> float:
    """``beta_N^{d,delta} = sum_{|k| <= N} (1 - |k|^2/N^2)^delta``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    sh = shells(N, d)
    j = np.arange(len(sh.counts))
    return float(np.sum(sh.counts * _weights(j, N, delta)))


def beta_exact(N: int, delta: int, d: int) -> Fraction:
    """``beta`` as an exact rational, for integer ``delta >= 0``."""
    if int(delta) != delta or delta < 0:
        raise ValueError("exact normalizers need a nonnegative integer delta")
    if N < 1:
        raise ValueError("N must be at least 1")
    sh = shells(N, d)
    n2 = N * N
    return sum((int(c) * Fraction(n2 - j, n2) ** int(delta)
                for j, c in enumerate(sh.counts) if c), Fraction(0))


def _shell_sums(sh: SquaredRadiusShells, x: np.ndarray) -> np.ndarray:
    """``s_j = sum_{|k|^2 = j} exp(2 pi i <k, x>)`` for ``j = 0..N^2``."""
    p = GroupContext.torus(sh.d).pairing(sh.points, x)
    angle = 2.0 * np.pi * p
    n = len(sh.counts)
    return (np.bincount(sh.sq, weights=np.cos(angle), minlength=n)
            + 1j * np.bincount(sh.sq, weights=np.sin(angle), minlength=n))


def abel_identity_check(N: int, delta: float, d: int, x):
    """Compare ``B_N^{d,delta}(x)`` with its summation-by-parts form

    ``1 - (1 - 1/N^2)^delta + sum_{j=1}^{N^2-1} (w_j - w_{j+1}) T_j``

    where ``w_j = (1 - j/N^2)_+^delta`` and ``T_j`` is the sum of
    ``exp(2 pi i <k, x>)`` over ``|k|^2 <= j``.

    Returns ``(direct, rearranged, |direct - rearranged|)``.
    """
    if not delta > 0:
        raise ValueError("the rearranged form needs delta > 0")
    if N < 1:
        raise ValueError("N must be at least 1")
    xs, _ = _as_points(d, x)
    direct = complex(br_kernel_torus(N, delta, d, xs[0]))
    sh = shells(N, d)
    T = np.cumsum(_shell_sums(sh, xs[0]))
    n2 = N * N
    j = np.arange(n2 + 1)
    w = np.clip(1.0 - j / n2, 0.0, None) ** delta
    inner = np.sum((w[1:n2] - w[2:n2 + 1]) * T[1:n2]) if n2 > 1 else 0j
    rearranged = complex(1.0 - (1.0 - 1.0 / n2) ** delta + inner)
    return direct, rearranged, abs(direct - rearranged)


@dataclass(frozen=True)
class GrowthReport:
    kernel: str
    d: int
    point: tuple
    Ns: tuple
    normalized: tuple

    @property
    def maximum(self) -> float:
        return max(self.normalized)

    def window_ratio(self, fraction: float = 0.25) -> float:
        """Max over the last window divided by max over the first one."""
        w = max(1, int(len(self.normalized) * fraction))
        return max(self.normalized[-w:]) / max(self.normalized[:w])


def growth_diagnostic(kernel: str, d: int, x, Ns, delta: float = 0.0) -> GrowthReport:
    """``|K_N(x)| / N^(d-1)`` along ``Ns`` for ``K = D^d`` or ``B^{d,delta}``.

    Shell sums are computed once on the largest ball and reweighted for
    every ``N``.
    """
    if kernel == "dirichlet":
        delta = 0.0
    elif kernel != "br":
        raise ValueError(f"kernel must be 'dirichlet' or 'br', got {kernel!r}")
    Ns = [int(n) for n in Ns]
    if not Ns or min(Ns) < 1:
        raise ValueError("Ns must be a nonempty list of positive integers")
    xs, _ = _as_points(d, x)
    if np.all(xs[0] == 0.0):
        raise ValueError("the diagnostic is undefined on Z^d, where the kernel peaks")
    s = _shell_sums(shells(max(Ns), d), xs[0])
    out = []
    for N in Ns:
        j = np.arange(N * N + 1)
        val = np.sum(_weights(j, N, delta) * s[:N * N + 1])
        out.append(float(abs(val)) / N ** (d - 1))
    return GrowthReport(kernel, d, tuple(float(v) for v in xs[0]), tuple(Ns), tuple(out))


def wiener_br_torus(mu, N: int, delta: float, x):
    """``(1/beta_N) sum_{|k| <= N} (1 - |k|^2/N^2)_+^delta mu_hat(k) exp(2 pi i <k, x>)``.

    ``x`` may be a single point or a batch of points.
    """
    ctx = mu.ctx
    if not ctx.is_torus:
        raise ValueError(f"torus Bochner-Riesz means need a torus, not {ctx}")
    if N < 1:
        raise ValueError("N must be at least 1")
    sh = shells(N, ctx.d)
    w = _weights(sh.sq, N, delta)
    coeffs = w * mu_hat(mu, sh.points) / np.sum(w)
    xs, single = _as_points(ctx.d, x)
    vals = lattice_mean(ctx, sh.points, coeffs, xs)
    return complex(vals[0]) if single else vals


def br_torus_recover(mu, delta: float, x, Ns) -> list[RunRecord]:
    Ns = list(Ns)
    if not Ns:
        raise ValueError("Ns must be nonempty")
    point = tuple(float(v) for v in mu.ctx.point(x).ravel())
    truth = truth_of(mu, x)
    return [RunRecord("bochner_riesz_td", delta, N, point, wiener_br_torus(mu, int(N), delta, x), truth)
            for N in Ns]
