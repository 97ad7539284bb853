import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from wienerlab.folner import (REAL, FolnerSet, balls, boxes, cubes, ellipsoids, folner_average,
                              folner_average_many, folner_defect, indicator_transform,
                              lattice_points, nested_cube_averages, wiener_recover)
from wienerlab.groups import GroupContext
from wienerlab.measures import (AcComponent, CantorComponent, dirac, make_measure,
                                random_atomic_measure, translate)

T1 = GroupContext.torus(1)
R2 = GroupContext.euclidean(2)


def brute_ball_count(d, n):
    rng = range(-n, n + 1)
    return sum(1 for k in itertools.product(rng, repeat=d) if sum(v * v for v in k) <= n * n)


def test_lattice_point_examples():
    assert lattice_points(FolnerSet.ball(0, 2))[1] == 1
    pts, count = lattice_points(FolnerSet.cube(2, 1))
    assert count == 5 and sorted(pts[:, 0].tolist()) == [-2, -1, 0, 1, 2]
    assert lattice_points(FolnerSet.ball(2, 2))[1] == 13


@pytest.mark.parametrize("d,n", [(1, 7), (2, 9), (3, 5), (4, 3)])
def test_ball_counts_against_brute_force(d, n):
    assert lattice_points(FolnerSet.ball(n, d))[1] == brute_ball_count(d, n)


def test_lattice_ellipsoid_and_box():
    pts, count = lattice_points(FolnerSet.ellipsoid((3.0, 1.5), "lattice"))
    brute = [(i, j) for i in range(-3, 4) for j in range(-1, 2) if (i / 3) ** 2 + (j / 1.5) ** 2 <= 1]
    assert count == len(brute)
    assert lattice_points(FolnerSet.box((2.5, 1.0), "lattice"))[1] == 5 * 3


def test_torus_average_examples():
    for n in (0, 1, 10, 57):
        assert folner_average(dirac(T1, 0.0), FolnerSet.cube(n, 1), 0.0) == pytest.approx(1.0)
        # sum_{k=-n}^{n} (-1)^k = (-1)^n
        expected = (-1) ** n / (2 * n + 1)
        assert abs(folner_average(dirac(T1, 0.5), FolnerSet.cube(n, 1), 0.0) - expected) < 1e-14


def test_euclidean_box_at_atom():
    x0 = (0.4, -1.1)
    for R in (0.5, 3.0, 40.0):
        assert abs(folner_average(dirac(R2, x0), FolnerSet.box((R, 2 * R), REAL), x0) - 1) < 1e-15


def test_defect_examples():
    assert folner_defect(FolnerSet.ball(5, 2), (0, 0)) == 0
    assert folner_defect(FolnerSet.cube(4, 1), (1,)) == Fraction(2, 9)
    defects = [folner_defect(FolnerSet.ball(n, 2), (1, 0)) for n in range(10, 101)]
    assert all(b < a for a, b in zip(defects, defects[1:]))
    assert 0 <= folner_defect(FolnerSet.cube(2, 1), (10,)) == 2


def test_recover_dirichlet_bound():
    mu = dirac(T1, 1 / 3, 0.25)
    recs = wiener_recover(mu, cubes(T1), 0.0, [1, 2, 5, 10, 100, 1000])
    for r in recs:
        assert r.truth == 0
        assert abs(r.value) <= 0.25 / ((2 * r.index + 1) * math.sin(math.pi / 3)) + 1e-15


def test_recover_cantor():
    mu = make_measure(T1, cantor=CantorComponent())
    (rec,) = wiener_recover(mu, cubes(T1), 0.0, [10_000])
    assert rec.abs_error < 0.1


def test_recover_euclidean_boxes_with_gaussian():
    x0 = (0.3, -0.2)
    mu = make_measure(R2, [(x0, 1.0)], ac=[AcComponent("gaussian", 1.0, (0.0, 0.0), width=1.0)])
    recs = wiener_recover(mu, boxes(R2, (1.0, 1.0)), x0, [1, 10, 100])
    errs = [r.abs_error for r in recs]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 0.01


def test_recover_rejects_bad_indices():
    with pytest.raises(ValueError):
        wiener_recover(dirac(T1), cubes(T1), 0.0, [])
    with pytest.raises(ValueError):
        wiener_recover(dirac(T1), cubes(T1), 0.0, [3, 2])


@pytest.mark.parametrize("fset", [FolnerSet.ball(1.7, 2, REAL), FolnerSet.ellipsoid((1.0, 2.5), REAL),
                                  FolnerSet.box((0.8, 1.9), REAL)])
def test_indicator_transform_against_quadrature(fset):
    a = np.asarray(fset.axes)
    t = np.array([0.35, -0.6])
    if fset.kind == "box":
        re = integrate.dblquad(lambda y, x: math.cos(2 * math.pi * (t[0] * x + t[1] * y)),
                               -a[0], a[0], -a[1], a[1], epsabs=1e-12)[0]
    else:
        # polar coordinates on the unit disc, mapped by the semi-axes
        re = integrate.dblquad(
            lambda r, th: r * math.cos(2 * math.pi * (t[0] * a[0] * r * math.cos(th)
                                                      + t[1] * a[1] * r * math.sin(th))),
            0, 2 * math.pi, 0, 1, epsabs=1e-12)[0] * a[0] * a[1]
    assert abs(indicator_transform(fset, t)[0] - re / fset.measure()) < 1e-9


@pytest.mark.parametrize("fset", [FolnerSet.box((3.0, 5.0), REAL), FolnerSet.ball(4.0, 2, REAL),
                                  FolnerSet.ellipsoid((2.0, 6.0), REAL)])
def test_spatial_and_frequency_paths_agree(fset):
    mu = random_atomic_measure(R2, 4, np.random.default_rng(2), spread=1.5)
    for x in ((0.0, 0.0), (0.7, -0.3)):
        a = folner_average(mu, fset, x)
        b = folner_average(mu, fset, x, path="frequency")
        assert abs(a - b) < 1e-6


def test_three_dimensional_ball_paths_agree():
    ctx = GroupContext.euclidean(3)
    mu = random_atomic_measure(ctx, 2, np.random.default_rng(4), spread=1.0)
    fset = FolnerSet.ball(2.0, 3, REAL)
    x = (0.1, 0.2, -0.3)
    assert abs(folner_average(mu, fset, x) - folner_average(mu, fset, x, path="frequency")) < 1e-6


def test_continuous_parts_on_euclidean_sets():
    ctx = GroupContext.euclidean(1)
    mu = make_measure(ctx, ac=[AcComponent("box", 1.0, (0.5,), half_widths=(0.5,))])
    # the density is 1 on [0, 1]; the average at x is int_0^1 sin(2 pi R (t - x)) / (2 pi R (t - x)) dt
    R, x = 3.0, 0.25

    def kernel(t):
        u = 2 * math.pi * R * (t - x)
        return math.sin(u) / u if u else 1.0

    expected = integrate.quad(kernel, 0, 1, points=[x], limit=200)[0]
    assert abs(folner_average(mu, FolnerSet.cube(R, 1, REAL), x) - expected) < 1e-6


def test_nested_cube_sweep_in_two_dimensions():
    ctx = GroupContext.torus(2)
    mu = random_atomic_measure(ctx, 3, np.random.default_rng(5))
    sweep = nested_cube_averages(mu, (0.2, 0.7), 12)
    for n in (0, 3, 12):
        assert abs(sweep[n] - folner_average(mu, FolnerSet.cube(n, 2), (0.2, 0.7))) < 1e-12


def test_sequences_grow():
    idx = [1, 2, 4, 8]
    for seq in (cubes(T1), balls(GroupContext.torus(2)), boxes(R2, (1.0, 3.0)),
                ellipsoids(R2, (2.0, 0.5))):
        assert seq.check_increasing(idx)
        assert seq.inner_radii(idx) == sorted(seq.inner_radii(idx))
    assert ellipsoids(R2, (2.0, 0.5))(4).inner_radius == 2.0


def test_invalid_sets():
    with pytest.raises(ValueError):
        FolnerSet.box((1.0, -1.0))
    with pytest.raises(ValueError):
        FolnerSet.ball(0.0, 2, REAL)
    with pytest.raises(ValueError):
        folner_average(dirac(T1), FolnerSet.cube(2, 1, REAL), 0.0)
    with pytest.raises(ValueError):
        folner_average(dirac(T1), FolnerSet.cube(2, 2), (0.0,))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 30), st.floats(0, 1), st.floats(-1, 1))
def test_torus_linearity_covariance_and_bound(seed, n, x, x0):
    rng = np.random.default_rng(seed)
    mu = random_atomic_measure(T1, 3, rng)
    nu = make_measure(T1, [((0.2,), 0.5)], ac=[AcComponent("gaussian", 0.3, (0.6,), width=0.05)])
    for fset in (FolnerSet.cube(n, 1), FolnerSet.ball(n, 1)):
        a, b = 0.7 - 0.2j, -1.3
        combo = folner_average(mu.scale(a) + nu.scale(b), fset, x)
        assert abs(combo - (a * folner_average(mu, fset, x) + b * folner_average(nu, fset, x))) < 1e-12
        moved = folner_average(translate(mu, x0), fset, x + x0)
        assert abs(moved - folner_average(mu, fset, x)) < 1e-10
        assert abs(folner_average(mu, fset, x)) <= mu.total_variation_bound() * (1 + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.5, 20), st.floats(-2, 2), st.floats(-2, 2))
def test_euclidean_covariance(seed, R, a, b):
    rng = np.random.default_rng(seed)
    mu = random_atomic_measure(R2, 3, rng)
    x, x0 = np.array([0.1, 0.3]), np.array([a, b])
    for fset in (FolnerSet.cube(R, 2, REAL), FolnerSet.ball(R, 2, REAL)):
        assert abs(folner_average(translate(mu, x0), fset, x + x0) - folner_average(mu, fset, x)) < 1e-10


def test_many_points_matches_single():
    mu = random_atomic_measure(T1, 5, np.random.default_rng(9))
    xs = np.linspace(0, 1, 7)
    many = folner_average_many(mu, FolnerSet.cube(20, 1), xs)
    single = [folner_average(mu, FolnerSet.cube(20, 1), x) for x in xs]
    assert np.max(np.abs(many - single)) < 1e-14
