import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kepler_heisenberg.dynamics import (ALPHA, PhaseState, SingularityError, angular_momentum, conserved, dilate,
                                        dilational_momentum, grad_hamiltonian, hamiltonian, kinetic, potential,
                                        vector_field)

from conftest import random_states

INV_SQRT_PI = 1 / math.sqrt(math.pi)


def fd_gradient(s, h=1e-6):
    g = np.empty(6)
    for i in range(6):
        e = np.zeros(6)
        e[i] = h
        g[i] = (hamiltonian(s + e) - hamiltonian(s - e)) / (2 * h)
    return g


def test_kinetic_examples():
    assert kinetic([1, 0, 0, 0, 0, 0]) == 0
    assert kinetic([1, 0, 0, 0, 0, INV_SQRT_PI]) == pytest.approx(1 / (8 * math.pi), rel=1e-15)
    assert kinetic([0, 1, 0, 1, 0, 2]) == 0


def test_potential_examples():
    assert potential([1, 0, 0, 5, 6, 7]) == pytest.approx(-1 / (8 * math.pi), rel=1e-15)
    assert potential([0, 0, 0.25, 0, 0, 0]) == pytest.approx(-1 / (8 * math.pi), rel=1e-15)
    assert ALPHA == 1 / (8 * math.pi)
    with pytest.raises(SingularityError):
        potential([0, 0, 0, 1, 1, 1])


def test_hamiltonian_examples():
    assert hamiltonian([1, 0, 0, 0, 0, INV_SQRT_PI]) == pytest.approx(0, abs=1e-16)
    assert hamiltonian(PhaseState(1, 0, 0, 0, 0, 0)) == pytest.approx(-1 / (8 * math.pi))


def test_hamiltonian_batched_matches_rows():
    states = random_states(np.random.default_rng(3), 20)
    assert np.allclose(hamiltonian(states), [hamiltonian(s) for s in states], rtol=0, atol=0)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    for s in random_states(rng, 100):
        g = grad_hamiltonian(s)
        assert np.linalg.norm(g - fd_gradient(s)) / np.linalg.norm(g) < 1e-6


def test_gradient_special_cases():
    g = grad_hamiltonian([1, 0, 0, 0, 0, 0])
    assert np.all(g[3:] == 0)
    # z = 0: no potential force along z, and no kinetic z-dependence either
    g = grad_hamiltonian([0.7, -0.4, 0.0, 0.3, 0.1, -0.2])
    assert g[2] == 0
    with pytest.raises(SingularityError):
        grad_hamiltonian([0, 0, 0, 1, 0, 0])


def test_vector_field_is_horizontal():
    for s in random_states(np.random.default_rng(1), 100):
        f = vector_field(s)
        assert abs(f[2] - 0.5 * (s[0] * f[1] - s[1] * f[0])) < 1e-14


def test_vector_field_at_rest():
    assert np.all(vector_field([1, 0, 0, 0, 0, 0])[:3] == 0)


def test_energy_is_stationary_along_field():
    for s in random_states(np.random.default_rng(2), 50):
        assert abs(grad_hamiltonian(s) @ vector_field(s)) < 1e-14


def test_poisson_identities():
    # d/dt p_theta = 0 and d/dt J = 2H along the field
    for s in random_states(np.random.default_rng(4), 100):
        x, y, z, px, py, pz = s
        f = vector_field(s)
        dpt = np.array([py, -px, 0, -y, x, 0]) @ f
        dJ = np.array([px, py, 2 * pz, x, y, 2 * z]) @ f
        assert abs(dpt) < 1e-12
        assert abs(dJ - 2 * hamiltonian(s)) < 1e-12


def test_conserved_examples():
    c = conserved([1, 0, 0, 0.05, 0.164, 0.3])
    assert (c.p_theta, c.J) == (0.164, 0.05)
    c = conserved([0, 1, 0, 1, 0, 0])
    assert (c.p_theta, c.J) == (-1, 0)


def test_dilate_examples():
    assert np.array_equal(dilate([1, 0, 0, 1, 1, 1], 2), [2, 0, 0, 0.5, 0.5, 0.25])
    s = np.array([0.3, -0.2, 0.1, 0.4, 0.5, -0.6])
    assert np.array_equal(dilate(s, 1), s)
    for bad in (0, -1):
        with pytest.raises(ValueError):
            dilate(s, bad)


def test_dilation_scaling_law():
    for s in random_states(np.random.default_rng(5), 100):
        for lam in (0.5, 2.0, 10.0):
            d = dilate(s, lam)
            assert hamiltonian(d) == pytest.approx(hamiltonian(s) / lam**2, rel=1e-12)
            assert angular_momentum(d) == pytest.approx(angular_momentum(s), rel=1e-12)
            assert dilational_momentum(d) == pytest.approx(dilational_momentum(s), rel=1e-12)
        assert hamiltonian(dilate(s, 3)) == pytest.approx(hamiltonian(s) / 9, rel=1e-12)


coords = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.tuples(coords, coords, coords, coords, coords, coords), st.floats(0.01, 100))
def test_dilation_round_trip(s, lam):
    s = np.array(s)
    assert np.allclose(dilate(dilate(s, lam), 1 / lam), s, rtol=1e-12, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.tuples(coords, coords, coords, coords, coords, coords))
def test_kinetic_nonnegative_potential_negative(s):
    assert kinetic(s) >= 0
    if (s[0] ** 2 + s[1] ** 2) ** 2 + 16 * s[2] ** 2 > 1e-20:
        assert potential(s) < 0
