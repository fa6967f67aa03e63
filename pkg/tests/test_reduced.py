import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from kepler_heisenberg.dynamics import conserved, hamiltonian
from kepler_heisenberg.reduced import PX_BOUND, ReducedIC, admissible, embed, p_z_root, random_ic, reduce_state

p_x = st.floats(-PX_BOUND, PX_BOUND, allow_nan=False)
p_y = st.floats(-2, 2, allow_nan=False)


def test_embed_origin_of_parameters():
    s = embed(ReducedIC(0.0, 0.0))
    assert np.array_equal(s[:5], [1, 0, 0, 0, 0])
    assert s[5] == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
    assert s[5] == pytest.approx(0.5641896, abs=1e-7)


@pytest.mark.parametrize("branch", [1, -1])
def test_embed_at_the_bound(branch):
    assert PX_BOUND == pytest.approx(0.2820948, abs=1e-7)
    assert embed(ReducedIC(PX_BOUND, 0.37, branch))[5] == pytest.approx(-2 * 0.37, abs=1e-7)


def test_embed_rejects_out_of_bound():
    assert not admissible(0.3)
    with pytest.raises(ValueError):
        embed(ReducedIC(0.3, 0.0))
    with pytest.raises(ValueError):
        ReducedIC(0.1, 0.1, branch=0)


def test_from_momenta():
    ic = ReducedIC.from_momenta(0.2, -0.1)
    assert (ic.p_x, ic.p_y, ic.J, ic.p_theta) == (-0.1, 0.2, -0.1, 0.2)


@settings(max_examples=300, deadline=None)
@given(p_x, p_y, st.sampled_from([1, -1]))
def test_embedded_labels(px, py, branch):
    ic = ReducedIC(px, py, branch)
    s = embed(ic)
    assert reduce_state(s, branch) == ic
    c = conserved(s)
    assert abs(c.H) < 1e-14
    assert c.p_theta == py
    assert c.J == px


@settings(max_examples=200, deadline=None)
@given(p_x, p_y)
def test_branch_involution(px, py):
    plus, minus = p_z_root(px, py, 1), p_z_root(px, py, -1)
    swap = lambda pz: -4 * py - pz  # noqa: E731
    assert swap(plus) == pytest.approx(minus, abs=1e-14)
    assert swap(swap(plus)) == pytest.approx(plus, abs=1e-14)
    for pz in (plus, minus):
        assert abs(hamiltonian([1, 0, 0, px, py, pz])) < 1e-14


def test_random_ic_determinism():
    assert random_ic(42) == random_ic(42)
    assert random_ic(42) != random_ic(43)


def test_random_ic_population():
    ics = [random_ic(seed) for seed in range(10_000)]
    px = np.array([ic.p_x for ic in ics])
    py = np.array([ic.p_y for ic in ics])
    assert np.all(np.abs(px) <= PX_BOUND)
    assert np.all((py >= 0) & (py <= 1))
    assert all(ic.branch == 1 for ic in ics)
    assert max(abs(hamiltonian(embed(ic))) for ic in ics) < 1e-14
    assert stats.kstest(px, stats.uniform(-PX_BOUND, 2 * PX_BOUND).cdf).pvalue > 0.01
    assert stats.kstest(py, stats.uniform(0, 1).cdf).pvalue > 0.01


def test_random_ic_custom_range():
    ic = random_ic(7, (0.1, 0.2))
    assert 0.1 <= ic.p_y <= 0.2
