"""Shooting-method objective and the time-extension assessment of starting conditions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import as_state, dilational_momentum, gauge
from .integrator import IntegratorConfig, Trajectory, integrate

CANDIDATE = "candidate"
ABORTIVE = "abortive"
TIMEOUT, COLLISION, ESCAPE = "timeout", "collision", "escape"


@dataclass(frozen=True)
class ObjectiveValue:
    """Smallest post-warmup local minimum of the squared return distance."""

    value: float
    t_star: float
    index: int

    def __post_init__(self):
        if self.value < 0 or not self.t_star > 0:
            raise ValueError(f"invalid objective value {self}")


@dataclass(frozen=True)
class ShootingConfig:
    threshold: float = 0.1
    t_init: float = 10.0
    t_max: float = 400.0
    warmup_fraction: float = 0.01
    escape_radius: float = 1e3
    escape_growth: float = 1.5

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")
        if not 0 < self.t_init <= self.t_max:
            raise ValueError("need 0 < t_init <= t_max")
        if not 0 <= self.warmup_fraction < 1:
            raise ValueError("warmup_fraction must lie in [0, 1)")


@dataclass
class AssessOutcome:
    status: str
    duration: float
    objective: ObjectiveValue | None
    trajectory: Trajectory
    reason: str | None = None

    @property
    def is_candidate(self) -> bool:
        return self.status == CANDIDATE


def distance_sq(s, s0) -> np.ndarray:
    d = as_state(s) - as_state(s0)
    return np.sum(d * d, axis=-1)


def local_minimum_indices(d: np.ndarray) -> np.ndarray:
    """Interior indices ``i`` with ``d[i-1] > d[i] < d[i+1]``."""
    d = np.asarray(d)
    if len(d) < 3:
        return np.empty(0, dtype=int)
    mid = d[1:-1]
    return np.flatnonzero((mid < d[:-2]) & (mid < d[2:])) + 1


def parabolic_vertex(d: np.ndarray, i: int) -> float:
    """Fractional offset in ``(-1/2, 1/2)`` of the parabola through ``d[i-1:i+2]``."""
    a, b, c = d[i - 1], d[i], d[i + 1]
    denom = a - 2.0 * b + c
    if denom <= 0:
        return 0.0
    return float(np.clip(0.5 * (a - c) / denom, -0.5, 0.5))


def objective_from_series(d: np.ndarray, dt: float, warmup: float = 0.0, t0: float = 0.0) -> ObjectiveValue | None:
    d = np.asarray(d, dtype=float)
    idx = local_minimum_indices(d)
    idx = idx[t0 + idx * dt > warmup]
    if len(idx) == 0:
        return None
    i = int(idx[np.argmin(d[idx])])
    t_star = t0 + (i + parabolic_vertex(d, i)) * dt
    return ObjectiveValue(float(d[i]), float(t_star), i)


def objective(traj: Trajectory, s0=None, warmup: float = 0.0) -> ObjectiveValue | None:
    """Shooting objective of ``traj`` relative to ``s0`` (default: its first sample)."""
    s0 = traj.states[0] if s0 is None else s0
    return objective_from_series(distance_sq(traj.states, s0), traj.dt_sample, warmup, traj.t0)


def period_estimate(o: ObjectiveValue, closure_tolerance: float = 1e-3) -> float:
    if not o.value < closure_tolerance:
        raise ValueError(f"objective {o.value:g} is not below the closure tolerance {closure_tolerance:g}")
    return o.t_star


def _escaping(traj: Trajectory, J: float, cfg: ShootingConfig) -> bool:
    """Positive dilational momentum and a gauge radius whose lower envelope keeps growing."""
    if J <= 0:
        return False
    g = gauge(traj.states) ** 0.25
    half = len(g) // 2
    if half < 2:
        return False
    return g[half:].min() > cfg.escape_growth * g[:half].min()


def assess(s0, c: IntegratorConfig | None = None, cfg: ShootingConfig | None = None) -> AssessOutcome:
    """Integrate from ``t_init``, doubling up to ``t_max``, until the curve returns within ``threshold``."""
    c = c or IntegratorConfig()
    cfg = cfg or ShootingConfig()
    s0 = as_state(s0)
    J = float(dilational_momentum(s0))
    duration = cfg.t_init
    while True:
        traj = integrate(s0, duration, c)
        if traj.collision:
            return AssessOutcome(ABORTIVE, duration, objective(traj, s0, cfg.warmup_fraction * duration), traj, COLLISION)
        obj = objective(traj, s0, cfg.warmup_fraction * duration)
        if obj is not None and obj.value < cfg.threshold:
            return AssessOutcome(CANDIDATE, duration, obj, traj)
        far = np.max(distance_sq(traj.states, s0)) > cfg.escape_radius**2
        if (far and J > 0) or (duration >= cfg.t_max and _escaping(traj, J, cfg)):
            return AssessOutcome(ABORTIVE, duration, obj, traj, ESCAPE)
        if duration >= cfg.t_max:
            return AssessOutcome(ABORTIVE, duration, obj, traj, TIMEOUT)
        duration = min(2.0 * duration, cfg.t_max)
