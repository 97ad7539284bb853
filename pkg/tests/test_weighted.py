import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import jv

from wienerlab.groups import GroupContext
from wienerlab.measures import AcComponent, dirac, make_measure, random_atomic_measure, translate
from wienerlab.weighted import (WeightKernel, br_mean_rd, compare_sides, frequency_side_mean,
                                m_alpha, m_alpha_hat, scaled_weight_mean, sup_outside,
                                weighted_recover)

R1 = GroupContext.euclidean(1)
R2 = GroupContext.euclidean(2)


def test_m_alpha_examples():
    assert m_alpha([0.0, 0.0], 1.0) == 1
    assert m_alpha([1.2, 0.0], 1.0) == 0
    assert abs(m_alpha([0.6, 0.0], 2.0) - 0.4096) < 1e-15
    with pytest.raises(ValueError):
        m_alpha([0.0], 0.0)


def test_m_alpha_hat_examples():
    assert abs(m_alpha_hat([0.0, 0.0], 2, 1.0) - math.pi / 2) < 1e-14
    assert abs(m_alpha_hat([0.0], 1, 1.0) - 4 / 3) < 1e-14


def test_m_alpha_hat_against_quadrature():
    def integrand(r, th):
        return (1 - r * r) * math.cos(2 * math.pi * 0.3 * r * math.cos(th)) * r

    oracle = integrate.dblquad(integrand, 0, 2 * math.pi, 0, 1, epsabs=1e-12, epsrel=1e-12)[0]
    assert abs(m_alpha_hat([0.3, 0.0], 2, 1.0) - oracle) < 1e-6


@pytest.mark.parametrize("d,alpha", [(1, 0.5), (2, 1.0), (3, 2.0), (2, 1.5)])
def test_m_alpha_hat_against_scipy_bessel(d, alpha):
    s = np.linspace(1e-3, 30, 300)
    nu = d / 2 + alpha
    z = 2 * np.pi * s
    ref = 2**alpha * (2 * np.pi) ** (d / 2) * math.gamma(alpha + 1) * jv(nu, z) / z**nu
    t = np.zeros((len(s), d))
    t[:, 0] = s
    assert np.max(np.abs(m_alpha_hat(t, d, alpha) - ref)) < 1e-12


def test_m_alpha_hat_small_argument_branch_is_continuous():
    for eps in (0.99e-4, 1.01e-4):
        s = eps / (2 * math.pi)
        z = eps
        ref = 2 * 2 * math.pi * jv(2.0, z) / z**2
        assert abs(m_alpha_hat([s, 0.0], 2, 1.0) - ref) < 1e-13


def test_gaussian_mean_examples():
    x0 = np.array([0.3, -0.4])
    g = WeightKernel.gaussian(2)
    for R in (0.5, 2.0, 30.0):
        assert abs(scaled_weight_mean(dirac(R2, x0), g, R, x0) - 1) < 1e-15
        x = x0 + np.array([0.05, 0.02])
        expected = math.exp(-math.pi * R * R * float(np.sum((x - x0) ** 2)))
        assert abs(scaled_weight_mean(dirac(R2, x0), g, R, x) - expected) < 1e-15
        assert abs(scaled_weight_mean(dirac(R2, x0), WeightKernel.bochner_riesz(2, 1.0), R, x0) - 1) < 1e-14


def test_br_mean_examples():
    for R in (1.0, 7.0):
        for a in (0.5, 2.0):
            assert abs(br_mean_rd(dirac(R2), R, a, (0.0, 0.0)) - 1) < 1e-14
    x0, x, R, a = np.array([0.2, 0.1]), np.array([-0.1, 0.3]), 4.0, 1.0
    expected = m_alpha_hat(R * (x0 - x), 2, a) / m_alpha_hat([0.0, 0.0], 2, a)
    assert abs(br_mean_rd(dirac(R2, x0), R, a, x) - expected) < 1e-14


def test_br_mean_with_gaussian_background():
    mu = make_measure(R1, [((0.0,), 1.0)], ac=[AcComponent("gaussian", 1.0, (0.5,), width=0.5)])
    errs = [abs(br_mean_rd(mu, R, 1.0, 0.0) - 1) for R in (1, 3, 10, 30, 100)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.01


def test_br_mean_continuous_part_against_direct_integral():
    # spatial form: (1/m_hat(0)) int m_hat(R (t - x)) p(t) dt with the Gaussian density p
    s, c, R, x = 0.4, 0.3, 2.5, 0.1
    mu = make_measure(R1, ac=[AcComponent("gaussian", 1.0, (c,), width=s)])
    k0 = m_alpha_hat([0.0], 1, 1.0)

    def integrand(t):
        p = math.exp(-((t - c) ** 2) / (2 * s * s)) / (s * math.sqrt(2 * math.pi))
        return m_alpha_hat([R * (t - x)], 1, 1.0) * p / k0

    oracle = integrate.quad(integrand, c - 12 * s, c + 12 * s, limit=400, epsabs=1e-13)[0]
    assert abs(br_mean_rd(mu, R, 1.0, x) - oracle) < 1e-9


@pytest.mark.parametrize("kernel", [WeightKernel.gaussian(2), WeightKernel.box(2),
                                    WeightKernel.bochner_riesz(2, 0.5), WeightKernel.bochner_riesz(1, 2.0)])
def test_frequency_side_with_continuous_parts(kernel):
    d = kernel.d
    ctx = GroupContext.euclidean(d)
    mu = make_measure(ctx, [((0.2,) * d, 0.5)],
                      ac=[AcComponent("gaussian", 0.3, (0.0,) * d, width=0.3),
                          AcComponent("box", 0.2j, (0.5,) * d, half_widths=(0.4,) * d)])
    c = compare_sides(mu, kernel, 6.0, (0.1,) * d)
    assert c.discrepancy < 1e-8


def test_kernel_bounds_and_decay():
    rng = np.random.default_rng(0)
    for kernel in (WeightKernel.gaussian(2), WeightKernel.box(2), WeightKernel.bochner_riesz(2, 1.0)):
        xi = rng.normal(size=(10_000, 2))
        assert np.max(np.abs(kernel.phi(10.0, xi))) <= 1 + 1e-12
        sups = [sup_outside(kernel, R, 0.5) for R in (1.0, 10.0, 100.0)]
        assert sups[0] > sups[1] > sups[2]


def test_kernel_validation():
    with pytest.raises(ValueError):
        WeightKernel.bochner_riesz(2, 0.0)
    with pytest.raises(ValueError):
        WeightKernel("triangle", 1)
    with pytest.raises(ValueError):
        scaled_weight_mean(dirac(GroupContext.torus(1)), WeightKernel.gaussian(1), 1.0, 0.0)
    with pytest.raises(ValueError):
        scaled_weight_mean(dirac(R2), WeightKernel.gaussian(1), 1.0, (0.0, 0.0))
    with pytest.raises(ValueError):
        scaled_weight_mean(dirac(R1), WeightKernel.gaussian(1), 0.0, 0.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.5, 20), st.floats(-2, 2), st.floats(-2, 2))
def test_linearity_and_covariance(seed, R, a, b):
    rng = np.random.default_rng(seed)
    mu, nu = random_atomic_measure(R2, 3, rng), random_atomic_measure(R2, 2, rng)
    x, x0 = np.array([0.1, -0.2]), np.array([a, b])
    for kernel in (WeightKernel.gaussian(2), WeightKernel.bochner_riesz(2, 1.0)):
        lhs = scaled_weight_mean(mu + nu.scale(2j), kernel, R, x)
        rhs = scaled_weight_mean(mu, kernel, R, x) + 2j * scaled_weight_mean(nu, kernel, R, x)
        assert abs(lhs - rhs) < 1e-12
        moved = scaled_weight_mean(translate(mu, x0), kernel, R, x + x0)
        assert abs(moved - scaled_weight_mean(mu, kernel, R, x)) < 1e-10


def test_frequency_side_of_atoms():
    mu = random_atomic_measure(R1, 3, np.random.default_rng(1))
    k = WeightKernel.gaussian(1)
    assert abs(frequency_side_mean(mu, k, 3.0, 0.2) - scaled_weight_mean(mu, k, 3.0, 0.2)) < 1e-10


def test_weighted_recover_records():
    recs = weighted_recover(dirac(R1, 0.5, 2.0), WeightKernel.bochner_riesz(1, 1.0), 0.5, [1, 10])
    assert [r.method for r in recs] == ["bochner_riesz_rd"] * 2
    assert all(r.abs_error < 1e-14 and r.param == 1.0 for r in recs)
