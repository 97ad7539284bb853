"""Quick invariant checks, one group per module, for the ``selftest`` command."""

from __future__ import annotations

import math
import os
import tempfile
from fractions import Fraction

import numpy as np

from . import finite, folner, fourier, harness, measures, special, torus_br, weighted
from .groups import GroupContext, char_eval
from .records import RunRecord


def _groups(rng):
    ctx = GroupContext.finite((12, 5))
    m = np.array([12, 5])
    x, y, gamma = rng.integers(0, 60, (3, 2)) % m
    lhs = char_eval(ctx, gamma, (x + y) % m)
    rhs = char_eval(ctx, gamma, x) * char_eval(ctx, gamma, y)
    torus = GroupContext.torus(2)
    return [
        ("character is a homomorphism", abs(lhs - rhs) < 1e-12),
        ("torus points wrap to [0, 1)", np.allclose(torus.point([1.25, -0.25]), [0.25, 0.75])),
    ]


def _measures(rng):
    ctx = GroupContext.torus(1)
    mu = measures.make_measure(ctx, [((0.1,), 0.5), ((0.1 + 1e-12,), 0.25)])
    moved = measures.translate(mu, 0.3)
    return [
        ("nearby atoms merge", len(mu.atoms) == 1 and abs(mu.atoms[0].weight - 0.75) < 1e-15),
        ("translation moves atoms", abs(measures.true_atom(moved, 0.4) - 0.75) < 1e-15),
    ]


def _fourier(rng):
    ctx = GroupContext.finite((12, 5))
    mu = measures.random_atomic_measure(ctx, 10, rng)
    back = fourier.finite_inverse(fourier.finite_dft(mu))
    g = rng.normal(size=ctx.moduli) + 1j * rng.normal(size=ctx.moduli)
    c1 = abs(fourier.cantor_hat(1.0))
    c8 = abs(fourier.cantor_hat(3.0**8))
    return [
        ("finite inversion is exact", np.max(np.abs(back - measures.weight_array(mu))) < 1e-12),
        ("Parseval for measures", fourier.parseval_measure_check(g, mu)[2] < 1e-12),
        ("Cantor coefficients do not decay along 3^k", abs(c1 - c8) < 1e-8),
    ]


def _folner(rng):
    ok_defect = all(folner.folner_defect(folner.FolnerSet.cube(n, 1), (1,)) == Fraction(2, 2 * n + 1)
                    for n in range(1, 60))
    ctx = GroupContext.torus(1)
    mu = measures.dirac(ctx, 0.3)
    val = folner.folner_average(mu, folner.FolnerSet.cube(40, 1), 0.3)
    rd = GroupContext.euclidean(2)
    nu = measures.random_atomic_measure(rd, 3, rng)
    fset = folner.FolnerSet.ball(3.0, 2, folner.REAL)
    a = folner.folner_average(nu, fset, (0.1, 0.2))
    b = folner.folner_average(nu, fset, (0.1, 0.2), path="frequency")
    return [
        ("cube defect is 2/(2n+1)", ok_defect),
        ("average of a Dirac at its atom is 1", abs(val - 1) < 1e-12),
        ("R^2 ball average, both paths agree", abs(a - b) < 1e-6 * max(1.0, abs(a))),
    ]


def _special(rng):
    from scipy.special import jv

    x = rng.uniform(0, 60, 50)
    nu = rng.uniform(0, 20, 50)
    err = max(abs(float(special.bessel_j(n, t)) - jv(n, t)) for n, t in zip(nu, x))
    return [
        ("J_1/2(pi/2) = 2/pi", abs(float(special.bessel_j(0.5, math.pi / 2)) - 2 / math.pi) < 1e-9),
        ("Gamma(5) = 24", abs(special.gamma_fn(5.0) - 24.0) < 1e-12),
        ("Bessel J against an independent implementation", err < 1e-10),
    ]


def _weighted(rng):
    ok = all(abs(weighted.m_alpha_hat(np.zeros(d), d, a) - weighted.m_alpha_hat_zero(d, a)) < 1e-12
             for d in (1, 2, 3) for a in (0.5, 1.0, 2.0))
    ctx = GroupContext.euclidean(2)
    mu = measures.random_atomic_measure(ctx, 3, rng)
    worst = max(weighted.compare_sides(mu, k, 5.0, (0.1, -0.2)).relative(1.0)
                for k in (weighted.WeightKernel.gaussian(2), weighted.WeightKernel.bochner_riesz(2, 1.0)))
    return [
        ("transform at the origin", ok),
        ("spatial and frequency sides agree", worst < 1e-5),
    ]


def _torus_br(rng):
    abel = max(torus_br.abel_identity_check(10, 1.0, 2, rng.random(2))[2] for _ in range(3))
    xs = rng.random(200)
    dir_err = np.max(np.abs(torus_br.dirichlet_spherical(20, 1, xs) - torus_br.dirichlet_closed_form(20, xs)))
    return [
        ("beta_3 = 35/9", torus_br.beta_exact(3, 1, 1) == Fraction(35, 9)),
        ("summation by parts", abel < 1e-9),
        ("Dirichlet closed form", dir_err < 1e-10),
    ]


def _finite(rng):
    ctx = GroupContext.finite((9,))
    report = finite.oracle_cross_check(measures.dirac(ctx, 0), 0)
    mu = measures.random_atomic_measure(GroupContext.finite((12, 5)), 10, rng)
    err = max(abs(finite.exact_wiener(mu, a.position) - a.weight) for a in mu.atoms)
    return [
        ("full dual recovers the atom", report.final_error < 1e-12),
        ("exact recovery of random measures", err < 1e-12),
    ]


def _harness(rng):
    doc = {"group": {"kind": "torus", "d": 1},
           "measure": {"atoms": [{"position": 0.0, "weight": 0.5}], "ac": [{"kind": "lebesgue"}]},
           "method": "folner_cube", "sweep": [1, 10, 100], "points": [0.0, 0.5]}
    cfg = harness.parse_config(doc)
    with tempfile.TemporaryDirectory() as tmp:
        paths = [os.path.join(tmp, f"run{i}.csv") for i in range(2)]
        for p in paths:
            harness.run_scenario(cfg, p)
        with open(paths[0], "rb") as a, open(paths[1], "rb") as b:
            same = a.read() == b.read()
    recs = [RunRecord("synthetic", None, n, (0.0,), 3.0 / n, 0j) for n in (10, 20, 40, 80, 160)]
    fit = harness.rate_fit(recs)
    return [
        ("runs are byte-reproducible", same),
        ("rate fit of C/N has slope -1", abs(fit.slope + 1.0) < 1e-6),
    ]


CHECKS = {
    "group-context": _groups,
    "measure-model": _measures,
    "fourier-oracle": _fourier,
    "folner-averaging": _folner,
    "special-functions": _special,
    "weighted-means": _weighted,
    "torus-bochner-riesz": _torus_br,
    "finite-oracle": _finite,
    "harness-cli": _harness,
}


def run_selftest(seed: int = 0, stream=None) -> bool:
    """Run every check, print one line per module, return overall success."""
    import sys

    stream = stream or sys.stdout
    rng = np.random.default_rng(seed)
    all_ok = True
    for module, check in CHECKS.items():
        try:
            results = check(rng)
            failed = [name for name, ok in results if not ok]
        except Exception as exc:  # report and keep going
            failed = [f"{type(exc).__name__}: {exc}"]
        all_ok &= not failed
        status = "PASS" if not failed else "FAIL"
        detail = "" if not failed else "  (" + "; ".join(failed) + ")"
        print(f"{status}  {module}{detail}", file=stream)
    return all_ok
