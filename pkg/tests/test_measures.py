import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wienerlab.fourier import mu_hat
from wienerlab.groups import GroupContext, char_eval
from wienerlab.measures import (AcComponent, CantorComponent, dirac, make_measure,
                                random_atomic_measure, translate, true_atom)

T1 = GroupContext.torus(1)
R2 = GroupContext.euclidean(2)


def test_torus_positions_wrap():
    mu = make_measure(T1, [((1.5,), 1.0)])
    assert mu.atoms[0].position == (0.5,)


def test_coincident_atoms_merge():
    mu = make_measure(T1, [((0.3,), 0.3), ((0.3,), 0.2)])
    assert len(mu.atoms) == 1 and abs(mu.atoms[0].weight - 0.5) < 1e-15


@pytest.mark.parametrize("bad", [
    dict(ac=[AcComponent("gaussian", 1.0, (0.0,), width=-1.0)]),
    dict(ac=[AcComponent("box", 1.0, (0.0,), half_widths=(0.0,))]),
])
def test_invalid_components(bad):
    with pytest.raises(ValueError):
        make_measure(GroupContext.euclidean(1), **bad)


def test_structural_restrictions():
    with pytest.raises(ValueError):
        make_measure(GroupContext.torus(2), cantor=CantorComponent())
    with pytest.raises(ValueError):
        make_measure(GroupContext.euclidean(1), ac=[AcComponent("lebesgue")])
    with pytest.raises(ValueError):
        make_measure(GroupContext.finite((5,)), ac=[AcComponent("gaussian", 1.0, (0,), width=1.0)])
    with pytest.raises(ValueError):
        make_measure(R2, [((0.0,), 1.0)])


def test_translate_examples():
    assert true_atom(translate(dirac(T1, 0.25), 0.25), 0.5) == 1
    mu = make_measure(T1, [((0.1,), 0.5)], ac=[AcComponent("lebesgue")])
    assert translate(mu, 0.0) == mu
    x0 = (0.7, -1.2)
    assert true_atom(translate(dirac(R2, x0), (-0.7, 1.2)), (0.0, 0.0)) == 1


def test_true_atom_examples():
    mu = make_measure(T1, [((0.0,), 0.5)], ac=[AcComponent("lebesgue")])
    assert true_atom(mu, 0.0) == 0.5
    assert true_atom(mu, 0.3) == 0
    assert true_atom(make_measure(T1, cantor=CantorComponent()), 0.0) == 0


def test_true_atom_ignores_continuous_parts():
    rng = np.random.default_rng(0)
    mu = random_atomic_measure(T1, 4, rng)
    richer = make_measure(T1, [(a.position, a.weight) for a in mu.atoms],
                          ac=[AcComponent("gaussian", 0.3, (0.5,), width=0.1)],
                          cantor=CantorComponent(0.2))
    for a in mu.atoms:
        assert true_atom(richer, a.position) == true_atom(mu, a.position)


def test_total_variation_bound():
    mu = make_measure(T1, [((0.1,), 3 + 4j)], ac=[AcComponent("lebesgue", -2.0)],
                      cantor=CantorComponent(0.5))
    assert mu.total_variation_bound() == 7.5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-2, 2), st.floats(-2, 2))
def test_translation_round_trip_and_modulation(seed, a, b):
    rng = np.random.default_rng(seed)
    ctx = R2
    atoms = random_atomic_measure(ctx, 3, rng)
    mu = make_measure(ctx, [(p.position, p.weight) for p in atoms.atoms],
                      ac=[AcComponent("gaussian", 0.5, (0.1, 0.2), width=0.4),
                          AcComponent("box", 0.25j, (-0.3, 0.0), half_widths=(0.5, 1.0))])
    x0 = np.array([a, b])
    back = translate(translate(mu, x0), -x0)
    for p, q in zip(mu.atoms, back.atoms):
        assert np.allclose(p.position, q.position, atol=1e-12) and abs(p.weight - q.weight) < 1e-12
    gammas = rng.normal(scale=2.0, size=(10, 2))
    lhs = mu_hat(translate(mu, x0), gammas)
    rhs = np.conj(char_eval(ctx, gammas, x0)) * mu_hat(mu, gammas)
    assert np.max(np.abs(lhs - rhs)) < 1e-10
