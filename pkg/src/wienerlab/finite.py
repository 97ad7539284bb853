"""Exact Wiener recovery on finite abelian groups.

Averaging ``gamma(x) mu_hat(gamma)`` over the whole (finite) dual is Fourier
inversion at ``x``, so the limit in Wiener's lemma is attained exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .folner import folner_average, finite_boxes
from .fourier import finite_dft, finite_inverse, mu_hat
from .groups import char_eval, finite_elements
from .measures import Measure, true_atom


def _require_finite(mu: Measure):
    if not mu.ctx.is_finite:
        raise ValueError(f"exact recovery needs a finite group, not {mu.ctx}")


def exact_wiener(mu: Measure, x) -> complex:
    """``(1/|G|) sum_gamma gamma(x) mu_hat(gamma)``, which equals ``mu({x})``."""
    _require_finite(mu)
    ctx = mu.ctx
    freqs = finite_elements(ctx)
    chars = char_eval(ctx, freqs, ctx.point(x))
    return complex(np.sum(chars * mu_hat(mu, freqs)) / ctx.order)


def exact_wiener_all(mu: Measure) -> np.ndarray:
    """:func:`exact_wiener` at every group element, shaped like the group."""
    _require_finite(mu)
    return finite_inverse(finite_dft(mu))


@dataclass(frozen=True)
class CrossCheckReport:
    """Partial averages over an exhausting box sequence of the dual.

    ``values[i]`` is the average over the box of index ``indices[i]``; the last
    box is the full dual, where the value must equal ``exact``.
    """

    point: tuple
    indices: tuple
    values: tuple
    exact: complex
    truth: complex
    total_variation: float

    @property
    def errors(self) -> tuple:
        return tuple(abs(v - self.exact) for v in self.values)

    @property
    def final_error(self) -> float:
        return self.errors[-1]

    @property
    def within_bound(self) -> bool:
        """Every partial average is bounded by the total variation (``|gamma| = 1``)."""
        return all(abs(v) <= self.total_variation * (1 + 1e-12) for v in self.values)


def oracle_cross_check(mu: Measure, x) -> CrossCheckReport:
    """Compare :func:`exact_wiener` with Folner averages over lexicographic boxes."""
    _require_finite(mu)
    ctx = mu.ctx
    seq = finite_boxes(ctx)
    indices = tuple(range(1, max(ctx.moduli) + 1))
    values = tuple(folner_average(mu, seq(n), x) for n in indices)
    point = tuple(int(v) for v in np.ravel(ctx.point(x)))
    return CrossCheckReport(point, indices, values, exact_wiener(mu, x), true_atom(mu, x),
                            mu.total_variation_bound())
