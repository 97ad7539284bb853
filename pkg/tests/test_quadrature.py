import math

import numpy as np
import pytest
from scipy.special import jv

from wienerlab.quadrature import QuadratureError, integrate_ball, integrate_interval, panel_rule


def test_panel_rule_integrates_polynomials_exactly():
    x, w = panel_rule(-1.0, 2.0, 0.4)
    assert abs(np.sum(w * x**15) - (2.0**16 - 1.0) / 16) < 1e-9


def test_oscillatory_interval():
    for b in (0.5, 10.0, 200.0):
        got = integrate_interval(lambda t: np.exp(2j * np.pi * b * t), -1.0, 1.0, b, tol=1e-10)
        assert abs(got - math.sin(2 * math.pi * b) / (math.pi * b)) < 1e-10


@pytest.mark.parametrize("d", [1, 2, 3])
def test_ball_volume_and_weight(d):
    vol = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    got = integrate_ball(lambda xi: np.ones(len(xi)), 2.0, d, 0.0)
    assert abs(got - vol * 2.0**d) < 1e-12
    # int (1 - |xi|^2)^alpha over the unit ball
    for alpha in (0.5, 1.0, 2.0):
        exact = math.pi ** (d / 2) * math.gamma(alpha + 1) / math.gamma(d / 2 + alpha + 1)
        assert abs(integrate_ball(lambda xi: np.ones(len(xi)), 1.0, d, 0.0, alpha=alpha) - exact) < 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_ball_plane_wave(d):
    t = np.zeros(d)
    t[0] = 7.3
    r = np.linalg.norm(t)

    def f(xi):
        return np.exp(2j * np.pi * xi @ t)

    got = integrate_ball(f, 1.0, d, r, tol=1e-10)
    exact = jv(d / 2, 2 * np.pi * r) / r ** (d / 2)
    assert abs(got - exact) < 1e-9


def test_ball_rejects_high_dimension():
    with pytest.raises(ValueError):
        integrate_ball(lambda xi: np.ones(len(xi)), 1.0, 4, 0.0)


def test_nonconvergence_is_reported():
    def wild(t):
        return np.sign(np.sin(1e5 * t))

    with pytest.raises(QuadratureError):
        integrate_interval(wild, 0.0, 1.0, 0.1, tol=1e-12)
