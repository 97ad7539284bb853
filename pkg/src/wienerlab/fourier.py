"""Fourier transforms of model measures.

Convention: ``mu_hat(gamma) = int conj(gamma(x)) dmu(x)`` with
``gamma(x) = exp(2 pi i <gamma, x>)``. On finite groups the inverse carries
the factor ``1/|G|``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .groups import GroupContext, char_eval, finite_elements, haar_normalizers
from .measures import BOX, GAUSSIAN, LEBESGUE, Measure, make_measure, weight_array

CANTOR_STOP = 1e-8
SINC_TAYLOR = 1e-3


def sinc(u):
    """``sin(u)/u`` with a Taylor branch near 0."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < SINC_TAYLOR
    safe = np.where(small, 1.0, u)
    u2 = u * u
    taylor = 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0
    return np.where(small, taylor, np.sin(safe) / safe)


def _phase(t):
    """``exp(-2 pi i t)`` after reducing ``t`` mod 1."""
    t = np.asarray(t, dtype=float)
    return np.exp(-2j * np.pi * (t - np.round(t)))


def cantor_hat(xi):
    """Transform of the middle-thirds Cantor law on [0, 1].

    ``exp(-pi i xi) * prod_k cos(2 pi xi / 3^k)``; factors are multiplied
    until their angle drops below 1e-8 and the rest of the product is replaced
    by the Gaussian tail ``exp(-sum theta_j^2 / 2)``.
    """
    xi = np.asarray(xi, dtype=float)
    out = _phase(0.5 * xi).astype(complex)
    top = float(np.max(np.abs(xi))) if xi.size else 0.0
    k = 0
    while 2.0 * np.pi * top * 3.0 ** -(k + 1) >= CANTOR_STOP:
        k += 1
        u = xi / 3.0**k
        out = out * np.cos(2.0 * np.pi * (u - np.round(u)))
    tail = (2.0 * np.pi * xi) ** 2 * 9.0 ** (-k) / 16.0
    return out * np.exp(-tail)


def _batch(ctx: GroupContext, gamma):
    k = ctx.frequency(gamma)
    single = k.ndim == 1
    return np.atleast_2d(k), single


def _atoms_hat(mu: Measure, k: np.ndarray) -> np.ndarray:
    if not mu.atoms:
        return np.zeros(len(k), dtype=complex)
    pos = np.array([a.position for a in mu.atoms])
    w = mu.atom_weights()
    out = np.zeros(len(k), dtype=complex)
    for p, wt in zip(pos, w):
        out += wt * np.conj(char_eval(mu.ctx, k, p))
    return out


def _ac_hat(ctx: GroupContext, comp, k: np.ndarray) -> np.ndarray:
    if comp.kind == LEBESGUE:
        return comp.coefficient * np.all(k == 0, axis=1).astype(complex)
    kf = k.astype(float)
    shift = _phase(kf @ np.asarray(comp.center, dtype=float))
    if comp.kind == GAUSSIAN:
        envelope = np.exp(-2.0 * np.pi**2 * comp.width**2 * np.sum(kf * kf, axis=1))
    else:
        hw = np.asarray(comp.half_widths, dtype=float)
        envelope = np.prod(sinc(2.0 * np.pi * kf * hw), axis=1)
    return comp.coefficient * shift * envelope


def mu_hat(mu, gamma):
    """Fourier-Stieltjes transform of ``mu`` at ``gamma`` (a single frequency or a batch).

    ``mu`` may also be a :class:`TabulatedSpectrum`, in which case the
    coefficients are looked up.
    """
    if isinstance(mu, TabulatedSpectrum):
        return mu.coefficients(gamma)
    k, single = _batch(mu.ctx, gamma)
    out = _atoms_hat(mu, k)
    for comp in mu.ac:
        out = out + _ac_hat(mu.ctx, comp, k)
    if mu.cantor is not None:
        xi = k[:, 0].astype(float)
        out = out + mu.cantor.coefficient * _phase(xi * mu.cantor.offset) * cantor_hat(xi)
    return complex(out[0]) if single else out


@dataclass(frozen=True)
class SeparableTerm:
    """``coefficient * prod_j factors[j](xi_j)``, one piece of ``mu_hat`` on R^d.

    ``center`` and ``extent`` bound where the piece lives in space, which sets
    the oscillation rate of its transform.
    """

    kind: str
    coefficient: complex
    factors: tuple
    center: np.ndarray
    extent: np.ndarray
    width: float | None = None


def separable_terms(mu: Measure) -> list[SeparableTerm]:
    """Split ``mu_hat`` on R^d into products of one-dimensional factors.

    The sum of the terms reproduces :func:`mu_hat`.
    """
    ctx = mu.ctx
    if not ctx.is_euclidean:
        raise ValueError("separable splitting is only used on R^d")
    terms = []
    for a in mu.atoms:
        factors = tuple(lambda t, p=p: _phase(t * p) for p in a.position)
        terms.append(SeparableTerm("atom", a.weight, factors, np.asarray(a.position),
                                   np.zeros(ctx.d)))
    for comp in mu.ac:
        center = np.asarray(comp.center, dtype=float)
        if comp.kind == GAUSSIAN:
            s = comp.width
            factors = tuple(
                lambda t, c=c: _phase(t * c) * np.exp(-2.0 * np.pi**2 * s**2 * t * t)
                for c in center
            )
            terms.append(SeparableTerm(GAUSSIAN, comp.coefficient, factors, center,
                                       np.full(ctx.d, 8.0 * s), width=s))
        else:
            factors = tuple(
                lambda t, c=c, h=h: _phase(t * c) * sinc(2.0 * np.pi * h * t)
                for c, h in zip(center, comp.half_widths)
            )
            terms.append(SeparableTerm(BOX, comp.coefficient, factors, center,
                                       np.asarray(comp.half_widths, dtype=float)))
    if mu.cantor is not None:
        off = mu.cantor.offset
        factors = (lambda t: _phase(t * off) * cantor_hat(t),)
        terms.append(SeparableTerm("cantor", mu.cantor.coefficient, factors,
                                   np.array([off + 0.5]), np.array([0.5])))
    return terms


def gaussian_cutoff(width: float, eps: float = 1e-17) -> float:
    """Frequency radius beyond which ``exp(-2 pi^2 width^2 |xi|^2)`` is below ``eps``."""
    return float(np.sqrt(-np.log(eps) / (2.0 * np.pi**2 * width**2)))


# -- finite groups --------------------------------------------------------

@dataclass(frozen=True)
class SpectrumTable:
    """``mu_hat`` at every frequency of a finite group, shaped like the group."""

    ctx: GroupContext
    values: np.ndarray

    def __post_init__(self):
        if not self.ctx.is_finite:
            raise ValueError("spectrum tables live on finite groups")
        if np.shape(self.values) != self.ctx.moduli:
            raise ValueError(f"table shape {np.shape(self.values)} does not match {self.ctx}")

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([f"k_{j + 1}" for j in range(self.ctx.d)] + ["re", "im"])
            for idx, v in np.ndenumerate(self.values):
                writer.writerow(list(idx) + [repr(float(v.real)), repr(float(v.imag))])


def _require_atomic_finite(mu: Measure):
    if not mu.ctx.is_finite:
        raise ValueError("expected a measure on a finite group")
    if not mu.is_atomic:
        raise ValueError("finite groups carry only atoms")


def finite_dft(mu: Measure) -> SpectrumTable:
    _require_atomic_finite(mu)
    freqs = finite_elements(mu.ctx)
    values = mu_hat(mu, freqs).reshape(mu.ctx.moduli)
    return SpectrumTable(mu.ctx, values)


def _inverse_values(ctx: GroupContext, g: np.ndarray, chunk: int = 512) -> np.ndarray:
    """``(1/|G|) sum_gamma g(gamma) gamma(x)`` for every x, as a flat array."""
    elems = finite_elements(ctx)
    flat_g = np.asarray(g, dtype=complex).ravel()
    _, inv_c = haar_normalizers(ctx)
    out = np.empty(len(elems), dtype=complex)
    for start in range(0, len(elems), chunk):
        xs = elems[start:start + chunk]
        chars = char_eval(ctx, elems[None, :, :], xs[:, None, :])
        out[start:start + chunk] = inv_c * (chars @ flat_g)
    return out


def finite_inverse(table: SpectrumTable) -> np.ndarray:
    """Weight map ``x -> (1/|G|) sum_gamma table[gamma] gamma(x)`` shaped like the group."""
    return _inverse_values(table.ctx, table.values).reshape(table.ctx.moduli)


def finite_inverse_measure(table: SpectrumTable, tol: float = 0.0) -> Measure:
    weights = finite_inverse(table)
    if tol > 0:
        weights = np.where(np.abs(weights) > tol, weights, 0)
    atoms = [(idx, w) for idx, w in np.ndenumerate(weights) if w != 0]
    return make_measure(table.ctx, atoms)


def parseval_measure_check(g, mu: Measure):
    """Both sides of Parseval's identity for measures on a finite group,

    ``sum_x [(1/|G|) sum_gamma g(gamma) conj(gamma(x))] mu({x}) = (1/|G|) sum_gamma g(gamma) mu_hat(gamma)``.

    The function paired with ``mu`` is the forward transform of ``g`` on the
    dual group; the left side is an explicit double sum that never calls
    :func:`mu_hat`. Returns ``(lhs, rhs, |lhs - rhs|)``.
    """
    _require_atomic_finite(mu)
    ctx = mu.ctx
    g = np.asarray(g, dtype=complex)
    if g.size != ctx.order:
        raise ValueError(f"g must have {ctx.order} entries, got {g.size}")
    # conj(sum conj(g) gamma(x)) = sum g conj(gamma(x))
    fwd_g = np.conj(_inverse_values(ctx, np.conj(g)))
    lhs = complex(np.sum(fwd_g * weight_array(mu).ravel()))
    _, inv_c = haar_normalizers(ctx)
    rhs = complex(inv_c * np.sum(g.ravel() * mu_hat(mu, finite_elements(ctx))))
    return lhs, rhs, abs(lhs - rhs)


# -- tabulated torus spectra ---------------------------------------------

class MissingCoefficientError(ValueError):
    pass


class TabulatedSpectrum:
    """Fourier coefficients of an unknown measure on T^d, given as a table.

    Any coefficient that a sum needs but the table lacks raises
    :class:`MissingCoefficientError`; sums are never silently truncated.
    ``truth`` optionally holds a measure with the known atoms, used only to
    fill the ground-truth columns of run records.
    """

    def __init__(self, ctx: GroupContext, table: dict, truth: Measure | None = None):
        if not ctx.is_torus:
            raise ValueError("tabulated spectra are only accepted on the torus")
        if truth is not None and truth.ctx != ctx:
            raise ValueError("truth measure lives on a different group")
        self.ctx = ctx
        self.table = {tuple(int(v) for v in k): complex(c) for k, c in table.items()}
        self.truth = truth

    @classmethod
    def from_csv(cls, path, d: int | None = None, truth: Measure | None = None) -> "TabulatedSpectrum":
        table = {}
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    vals = [float(v) for v in row]
                except ValueError:
                    continue  # header
                k = tuple(int(round(v)) for v in vals[:-2])
                if d is not None and len(k) != d:
                    raise ValueError(f"row {row} has {len(k)} frequency columns, expected {d}")
                table[k] = complex(vals[-2], vals[-1])
        if not table:
            raise ValueError(f"no coefficients found in {path}")
        dims = {len(k) for k in table}
        if len(dims) != 1:
            raise ValueError("inconsistent number of frequency columns")
        return cls(GroupContext.torus(dims.pop()), table, truth)

    def coefficients(self, gamma):
        k, single = _batch(self.ctx, gamma)
        out = np.empty(len(k), dtype=complex)
        for i, row in enumerate(map(tuple, k.tolist())):
            try:
                out[i] = self.table[row]
            except KeyError:
                raise MissingCoefficientError(f"coefficient at k={row} is not tabulated") from None
        return complex(out[0]) if single else out
