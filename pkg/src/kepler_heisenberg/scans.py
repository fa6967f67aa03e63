"""Parameter scans over the reduced ``(p_theta, J)`` plane and along the ``J = 0`` line."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

from .config import RunConfig
from .optimizer import optimize
from .reduced import PX_BOUND, ReducedIC, embed
from .rng import STREAM_SCAN, make_rng
from .shooting import assess
from .symmetry import SymmetryType

CLOSED = "closed"
CANDIDATE = "candidate"
STATUSES = (CANDIDATE, CLOSED, "abortive-timeout", "abortive-collision", "abortive-escape")


@dataclass
class ScanRecord:
    """One scan sample, keyed by its input point ``(p_theta, J)``.

    ``refined_*`` hold the optimized starting point for line scans.
    """

    p_theta: float
    J: float
    objective: float | None
    period: float | None
    symmetry: SymmetryType | None
    status: str
    refined_p_theta: float | None = None
    refined_J: float | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == CLOSED and (self.period is None or self.symmetry is None):
            raise ValueError("closed records need a period and a symmetry type")


def plane_points(region: tuple[float, float, float, float], n: int) -> list[tuple[float, float]]:
    """Cell-centred ``sqrt(n) x sqrt(n)`` grid over ``(pt_lo, pt_hi, J_lo, J_hi)``."""
    side = math.isqrt(n)
    if side * side != n:
        raise ValueError(f"plane scan size must be a perfect square, got {n}")
    pt_lo, pt_hi, j_lo, j_hi = region
    if max(abs(j_lo), abs(j_hi)) > PX_BOUND:
        raise ValueError(f"J range exceeds the admissible bound {PX_BOUND:.7f}")
    pts = [pt_lo + (i + 0.5) * (pt_hi - pt_lo) / side for i in range(side)]
    js = [j_lo + (i + 0.5) * (j_hi - j_lo) / side for i in range(side)]
    return [(pt, J) for J in js for pt in pts]


def line_points(p_theta_range: tuple[float, float], n: int) -> list[tuple[float, float]]:
    lo, hi = p_theta_range
    return [(lo + (i + 0.5) * (hi - lo) / n, 0.0) for i in range(n)]


def plane_record(point: tuple[float, float], cfg: RunConfig) -> ScanRecord:
    p_theta, J = point
    out = assess(embed(ReducedIC.from_momenta(p_theta, J, cfg.branch)), cfg.integrator(), cfg.shooting())
    obj = out.objective.value if out.objective is not None else None
    status = CANDIDATE if out.is_candidate else f"abortive-{out.reason}"
    return ScanRecord(p_theta, J, obj, None, None, status)


def line_record(point: tuple[float, float], cfg: RunConfig, index: int) -> ScanRecord:
    p_theta, J = point
    ic = ReducedIC.from_momenta(p_theta, J, cfg.branch)
    out = assess(embed(ic), cfg.integrator(), cfg.shooting())
    if not out.is_candidate:
        obj = out.objective.value if out.objective is not None else None
        return ScanRecord(p_theta, J, obj, None, None, f"abortive-{out.reason}")
    res = optimize(ic, cfg.optimizer(cfg.line_iterations), cfg.integrator(), out.duration,
                   rng=make_rng(cfg.seed, STREAM_SCAN, index))
    closed = res.symmetry is not None and res.period is not None and res.period <= cfg.period_cap
    return ScanRecord(p_theta, J, res.objective.value, res.period, res.symmetry, CLOSED if closed else CANDIDATE,
                      res.initial.p_theta, res.initial.J)


def _task(args):
    kind, point, cfg, index = args
    return index, (plane_record(point, cfg) if kind == "plane" else line_record(point, cfg, index))


def run_scan(kind: str, points: list[tuple[float, float]], cfg: RunConfig,
             skip: Iterable[int] = (), on_record: Callable[[int, ScanRecord], None] | None = None) -> dict[int, ScanRecord]:
    """Evaluate every point not in ``skip``; results keyed by input index.

    Records depend only on ``(point, index, cfg)``, so worker count and completion
    order never change them.
    """
    skip = set(skip)
    tasks = [(kind, p, cfg, i) for i, p in enumerate(points) if i not in skip]
    done = {}
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = pool.map(_task, tasks)
            for index, rec in results:
                done[index] = rec
                if on_record:
                    on_record(index, rec)
    else:
        for task in tasks:
            index, rec = _task(task)
            done[index] = rec
            if on_record:
                on_record(index, rec)
    return done


def scan_plane(cfg: RunConfig, region: tuple[float, float, float, float] | None = None, n: int | None = None) -> list[ScanRecord]:
    region = region or (cfg.plane_p_theta_min, cfg.plane_p_theta_max, cfg.plane_J_min, cfg.plane_J_max)
    points = plane_points(region, n or cfg.plane_n)
    done = run_scan("plane", points, cfg)
    return [done[i] for i in range(len(points))]


def scan_line(cfg: RunConfig, p_theta_range: tuple[float, float] | None = None, n: int | None = None) -> list[ScanRecord]:
    p_theta_range = p_theta_range or (cfg.line_p_theta_min, cfg.line_p_theta_max)
    points = line_points(p_theta_range, n or cfg.line_n)
    done = run_scan("line", points, cfg)
    return [done[i] for i in range(len(points))]
