"""Monte Carlo accept-if-improved refinement of a starting condition.

Proposals are drawn on the reduced ``(p_x, p_y)`` surface from an annulus around the
current best point: uniform angle, log-uniform radius.  ``p_z`` is recomputed from the
zero-energy root for every proposal, so each trial stays on ``H = 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .integrator import IntegratorConfig, Trajectory, integrate
from .reduced import ReducedIC, admissible, embed
from .rng import STREAM_OPTIMIZER, make_rng
from .shooting import ObjectiveValue, objective
from .symmetry import AmbiguousClassError, DegenerateSignalError, SymmetryType, classify_orbit

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerConfig:
    outer_radius: float = 1e-1
    inner_radius: float = 1e-12
    iterations: int = 1000
    seed: int = 0
    closure_tolerance: float = 1e-3
    warmup_fraction: float = 0.01
    # t_star beyond this fraction of the duration triggers the one-time extension
    extension_trigger: float = 0.9
    extension_factor: float = 1.25

    def __post_init__(self):
        if not 0 < self.inner_radius <= self.outer_radius:
            raise ValueError("need 0 < inner_radius <= outer_radius")
        if self.iterations < 0:
            raise ValueError("iterations must be nonnegative")
        if not self.closure_tolerance > 0:
            raise ValueError("closure_tolerance must be positive")


@dataclass
class OrbitResult:
    start: ReducedIC
    initial: ReducedIC
    objective: ObjectiveValue | None
    duration_used: float
    history: list[float] = field(default_factory=list)
    accepted_at: list[int] = field(default_factory=list)
    evaluations: int = 0
    period: float | None = None
    symmetry: SymmetryType | None = None
    note: str = ""
    trajectory: Trajectory | None = field(default=None, repr=False, compare=False)

    @property
    def failed(self) -> bool:
        return self.objective is None

    @property
    def closed(self) -> bool:
        return self.period is not None


def perturb(ic: ReducedIC, rng: np.random.Generator, c: OptimizerConfig) -> ReducedIC:
    log_lo, log_hi = math.log(c.inner_radius), math.log(c.outer_radius)
    while True:
        phi = rng.uniform(0.0, 2.0 * math.pi)
        r = math.exp(rng.uniform(log_lo, log_hi)) if log_hi > log_lo else c.outer_radius
        p_x = ic.p_x + r * math.cos(phi)
        if admissible(p_x):
            return ReducedIC(p_x, ic.p_y + r * math.sin(phi), ic.branch)


def evaluate(ic: ReducedIC, duration: float, ic_cfg: IntegratorConfig, warmup_fraction: float = 0.01):
    """Integrate the embedded point and return ``(objective or None, trajectory)``."""
    s0 = embed(ic)
    traj = integrate(s0, duration, ic_cfg)
    if traj.collision:
        return None, traj
    return objective(traj, s0, warmup_fraction * duration), traj


def optimize(start: ReducedIC, oc: OptimizerConfig | None = None, ic_cfg: IntegratorConfig | None = None,
             duration: float = 100.0, rng: np.random.Generator | None = None) -> OrbitResult:
    """Refine ``start`` for ``oc.iterations`` proposals at a frozen integration ``duration``."""
    oc = oc or OptimizerConfig()
    ic_cfg = ic_cfg or IntegratorConfig()
    rng = rng if rng is not None else make_rng(oc.seed, STREAM_OPTIMIZER)

    best_obj, best_traj = evaluate(start, duration, ic_cfg, oc.warmup_fraction)
    if best_obj is None:
        return OrbitResult(start, start, None, duration, evaluations=1, note="no return to the start", trajectory=best_traj)
    best = start
    history = [best_obj.value]
    accepted_at = [0]
    extended = False
    for it in range(1, oc.iterations + 1):
        if not extended and best_obj.t_star > oc.extension_trigger * duration:
            duration *= oc.extension_factor
            extended = True
        cand = perturb(best, rng, oc)
        obj, traj = evaluate(cand, duration, ic_cfg, oc.warmup_fraction)
        if obj is not None and obj.value < best_obj.value:
            best, best_obj, best_traj = cand, obj, traj
            history.append(obj.value)
            accepted_at.append(it)

    result = OrbitResult(start, best, best_obj, duration, history, accepted_at, oc.iterations + 1, trajectory=best_traj)
    if best_obj.value < oc.closure_tolerance:
        try:
            result.symmetry, result.period = classify_orbit(best_traj, best_obj.t_star)
        except (AmbiguousClassError, DegenerateSignalError) as exc:
            log.warning("closed orbit at %s left unclassified: %s", best, exc)
            result.period = best_obj.t_star
            result.note = str(exc)
    return result
