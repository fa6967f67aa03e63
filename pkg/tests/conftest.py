import numpy as np
import pytest

from kepler_heisenberg.integrator import Trajectory

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary."""

    def _report(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
        return ok

    return _report


def random_states(rng, n, rho_min=1e-3, scale=1.5):
    """Nonsingular phase states with positions in a box and moderate momenta."""
    out = []
    while len(out) < n:
        q = rng.uniform(-scale, scale, 3) * np.array([1, 1, 0.5])
        p = rng.uniform(-1, 1, 3)
        if (q[0] ** 2 + q[1] ** 2) ** 2 + 16 * q[2] ** 2 > rho_min:
            out.append(np.concatenate([q, p]))
    return np.array(out)


def synthetic_modes(j, k):
    """Planar Fourier modes on residue j mod k whose enclosed-area drift cancels.

    Returns ``{mode: amplitude}`` on ``j``, ``j + k`` and ``j - k`` (``{1, 0, -1}`` for
    ``k = 1``).
    """
    if k == 1:
        return {1: 1.0, 0: 2.0, -1: 1j}
    # m |a_m|^2 summed over modes must vanish for z to be periodic
    b = 0.1  # small enough that z stays dominated by frequency k
    return {j: 1.0, j + k: b, j - k: 1j * np.sqrt((j + (j + k) * b * b) / (k - j))}


def synthetic_orbit(modes, period=1.0, n=4096, phase=0.0, z0=0.0):
    """Exactly band-limited closed horizontal curve, sampled at ``n + 1`` points over ``[0, T]``.

    ``w(t) = sum a_m exp(i (Omega m t + phase_m))`` and z is the exact integral of
    ``zdot = (x ydot - y xdot) / 2``.
    """
    t = np.arange(n + 1) * (period / n)
    om = 2 * np.pi / period
    amps = {m: a * np.exp(1j * phase * (idx + 1)) for idx, (m, a) in enumerate(modes.items())}
    w = sum(a * np.exp(1j * om * m * t) for m, a in amps.items())
    drift = sum(m * abs(a) ** 2 for m, a in amps.items())
    assert abs(drift) < 1e-12, "modes do not close in z"
    z = np.full_like(t, z0)
    for m, am in amps.items():
        for nn, an in amps.items():
            if m != nn:
                z += 0.5 * np.imag(np.conj(an) * am * m * (np.exp(1j * om * (m - nn) * t) - 1) / (m - nn))
    states = np.column_stack([w.real, w.imag, z, np.zeros((len(t), 3))])
    return Trajectory(states, period / n)
