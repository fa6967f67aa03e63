"""Explicit symplectic integration of the (nonseparable) Kepler-Heisenberg flow.

Phase space is doubled into two copies ``(q, p)`` and ``(qt, pt)``.  One step is the
symmetric second-order composition

    phi_A(d/2) o phi_B(d/2) o phi_C(d) o phi_B(d/2) o phi_A(d/2)

where ``phi_A`` is the exact flow of ``H(q, pt)`` (moves ``p`` and ``qt``), ``phi_B``
that of ``H(qt, p)`` (moves ``q`` and ``pt``) and ``phi_C`` rotates the difference
variables ``(q - qt, p - pt)`` by the angle ``2 * omega * d`` with the means fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numba
import numpy as np

from .dynamics import SingularityError, as_state, conserved, hamiltonian, grad_kernel

# kernel termination codes
OK, SINGULAR, NONFINITE, BREAKDOWN = 0, 1, 2, 3
TERMINATION = {OK: "ok", SINGULAR: "singular", NONFINITE: "nonfinite", BREAKDOWN: "breakdown"}


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, copy-binding strength and output stride.

    ``omega=None`` ties the coupling to the step, ``omega = pi / (4 delta)``, which makes
    the coupling map a quarter-turn of the difference variables.  ``record_stride=None``
    stores samples at most 1e-2 time units apart.  A recorded sample whose energy differs
    from the initial energy by more than ``breakdown_tolerance`` stops the integration:
    at fixed step this only happens on a close approach to the origin.
    """

    delta: float = 1e-3
    omega: float | None = None
    record_stride: int | None = None
    breakdown_tolerance: float = 1e-2

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.omega is None:
            object.__setattr__(self, "omega", math.pi / (4.0 * self.delta))
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.record_stride is None:
            object.__setattr__(self, "record_stride", max(1, int(math.floor(1e-2 / self.delta + 1e-9))))
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")
        if not self.breakdown_tolerance > 0:
            raise ValueError("breakdown_tolerance must be positive")

    @property
    def dt_sample(self) -> float:
        return self.delta * self.record_stride


class ExtendedState(NamedTuple):
    a: np.ndarray
    b: np.ndarray


def lift(s) -> ExtendedState:
    s = as_state(s)
    return ExtendedState(s.copy(), s.copy())


def project(e: ExtendedState) -> np.ndarray:
    return e.a.copy()


def defect(e: ExtendedState) -> float:
    d = e.a - e.b
    return float(np.linalg.norm(d[:3]) + np.linalg.norm(d[3:]))


@dataclass
class Trajectory:
    """Uniformly sampled copy-A states, one row per sample."""

    states: np.ndarray
    dt_sample: float
    t0: float = 0.0
    defect: np.ndarray | None = None
    termination: str = "ok"
    conserved_trace: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.states) == 0:
            raise ValueError("trajectory needs at least one sample")
        if not self.dt_sample > 0:
            raise ValueError("dt_sample must be positive")

    def __len__(self):
        return len(self.states)

    @property
    def collision(self) -> bool:
        return self.termination != "ok"

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt_sample * np.arange(len(self.states))

    @property
    def duration(self) -> float:
        return self.dt_sample * (len(self.states) - 1)

    def conserved(self) -> np.ndarray:
        """``(n, 3)`` array of ``(H, p_theta, J)`` per sample."""
        if self.conserved_trace is None:
            self.conserved_trace = np.column_stack(conserved(self.states))
        return self.conserved_trace


@numba.njit(cache=True, inline="always")
def _half_a(q, p, qt, pt, h, g):
    # flow of H(q, pt): moves p and qt
    if not grad_kernel(q[0], q[1], q[2], pt[0], pt[1], pt[2], g):
        return False
    for i in range(3):
        p[i] -= h * g[i]
        qt[i] += h * g[3 + i]
    return True


@numba.njit(cache=True, inline="always")
def _half_b(q, p, qt, pt, h, g):
    # flow of H(qt, p): moves q and pt
    if not grad_kernel(qt[0], qt[1], qt[2], p[0], p[1], p[2], g):
        return False
    for i in range(3):
        q[i] += h * g[3 + i]
        pt[i] -= h * g[i]
    return True


@numba.njit(cache=True)
def _energy(s):
    x, y, z, px, py, pz = s[0], s[1], s[2], s[3], s[4], s[5]
    PX = px - 0.5 * y * pz
    PY = py + 0.5 * x * pz
    r2 = x * x + y * y
    rho = r2 * r2 + 16.0 * z * z
    if not rho >= 1e-30:
        return math.nan
    return 0.5 * (PX * PX + PY * PY) - 1.0 / (8.0 * math.pi * math.sqrt(rho))


@numba.njit(cache=True)
def _run(a, b, delta, cos2, sin2, nsteps, stride, h_tol, out, defects):
    """Advance ``(a, b)`` in place; copy A goes to ``out`` every ``stride`` steps.

    Returns ``(number of rows written, termination code)``; row 0 must be preset.
    """
    q = a[:3]
    p = a[3:]
    qt = b[:3]
    pt = b[3:]
    g = np.empty(6)
    h = 0.5 * delta
    e0 = _energy(a)
    rows = 1
    for n in range(1, nsteps + 1):
        if not _half_a(q, p, qt, pt, h, g):
            return rows, 1
        if not _half_b(q, p, qt, pt, h, g):
            return rows, 1
        for i in range(3):
            sq = q[i] + qt[i]
            dq = q[i] - qt[i]
            sp = p[i] + pt[i]
            dp = p[i] - pt[i]
            q[i] = 0.5 * (sq + cos2 * dq + sin2 * dp)
            p[i] = 0.5 * (sp - sin2 * dq + cos2 * dp)
            qt[i] = 0.5 * (sq - cos2 * dq - sin2 * dp)
            pt[i] = 0.5 * (sp + sin2 * dq - cos2 * dp)
        if not _half_b(q, p, qt, pt, h, g):
            return rows, 1
        if not _half_a(q, p, qt, pt, h, g):
            return rows, 1
        if n % stride == 0:
            for i in range(6):
                if not math.isfinite(a[i]) or not math.isfinite(b[i]):
                    return rows, 2
            out[rows, :] = a
            dq2 = 0.0
            dp2 = 0.0
            for i in range(3):
                dq2 += (q[i] - qt[i]) ** 2
                dp2 += (p[i] - pt[i]) ** 2
            defects[rows] = math.sqrt(dq2) + math.sqrt(dp2)
            rows += 1
            if abs(_energy(a) - e0) > h_tol:
                return rows, 3
    return rows, 0


def _rotation(c: IntegratorConfig, direction: int) -> tuple[float, float]:
    angle = 2.0 * c.omega * c.delta * direction
    return math.cos(angle), math.sin(angle)


def advance(e: ExtendedState, nsteps: int, c: IntegratorConfig, direction: int = 1) -> ExtendedState:
    """Take ``nsteps`` steps (backwards in time for ``direction=-1``)."""
    a = np.array(e.a, dtype=float)
    b = np.array(e.b, dtype=float)
    cos2, sin2 = _rotation(c, direction)
    out = np.empty((1, 6))
    defects = np.zeros(1)
    out[0] = a
    # stride larger than nsteps: nothing recorded, no energy monitoring
    _, code = _run(a, b, direction * c.delta, cos2, sin2, nsteps, nsteps + 1, np.inf, out, defects)
    if code != OK:
        raise SingularityError(f"integration stopped: {TERMINATION[code]}")
    return ExtendedState(a, b)


def step(e: ExtendedState, c: IntegratorConfig, direction: int = 1) -> ExtendedState:
    return advance(e, 1, c, direction)


def sample_count(duration: float, c: IntegratorConfig) -> int:
    return int(math.floor(duration / c.delta / c.record_stride + 1e-9)) + 1


def integrate(s, duration: float, c: IntegratorConfig | None = None, record_conserved: bool = False) -> Trajectory:
    """Integrate ``s`` forward for ``duration``.

    A singularity, a non-finite state or an energy breakdown ends the run early; the
    samples up to that point are returned with ``termination`` set accordingly.
    """
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    c = c or IntegratorConfig()
    s = as_state(s)
    if not np.all(np.isfinite(s)):
        raise ValueError("initial state must be finite")
    hamiltonian(s)  # raises on a singular start
    n = sample_count(duration, c)
    out = np.empty((n, 6))
    defects = np.zeros(n)
    out[0] = s
    a = s.copy()
    b = s.copy()
    cos2, sin2 = _rotation(c, 1)
    rows, code = _run(a, b, c.delta, cos2, sin2, (n - 1) * c.record_stride, c.record_stride,
                      c.breakdown_tolerance, out, defects)
    # a breakdown sample is kept out of the returned curve
    keep = rows - 1 if code == BREAKDOWN else rows
    traj = Trajectory(out[:keep].copy(), c.dt_sample, defect=defects[:keep].copy(), termination=TERMINATION[code])
    if record_conserved:
        traj.conserved()
    return traj
