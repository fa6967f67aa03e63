"""The two-parameter surface of starting conditions.

Rotation fixes ``y = 0``, closure lets us start at ``z = 0``, the dilation fixes
``x = 1`` and zero energy determines ``p_z``.  What is left is ``(p_x, p_y)``, which on
this surface equal the dilational momentum ``J`` and angular momentum ``p_theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import as_state
from .rng import STREAM_INITIAL, make_rng

#: Largest admissible ``|p_x|``; beyond it ``H = 0`` has no real solution for ``p_z``.
PX_BOUND = 1.0 / (2.0 * math.sqrt(math.pi))


@dataclass(frozen=True)
class ReducedIC:
    p_x: float
    p_y: float
    branch: int = 1

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")

    @property
    def J(self) -> float:
        return self.p_x

    @property
    def p_theta(self) -> float:
        return self.p_y

    @classmethod
    def from_momenta(cls, p_theta: float, J: float, branch: int = 1) -> "ReducedIC":
        return cls(float(J), float(p_theta), branch)


def admissible(p_x: float) -> bool:
    return abs(p_x) <= PX_BOUND


def p_z_root(p_x: float, p_y: float, branch: int = 1) -> float:
    disc = (1.0 - 4.0 * math.pi * p_x * p_x) / math.pi
    if disc < 0:
        if admissible(p_x):
            disc = 0.0  # roundoff at the boundary
        else:
            raise ValueError(f"|p_x| = {abs(p_x):g} exceeds the admissible bound {PX_BOUND:.7f}")
    return -2.0 * p_y + branch * math.sqrt(disc)


def embed(ic: ReducedIC) -> np.ndarray:
    """Phase state ``(1, 0, 0, p_x, p_y, p_z)`` on the zero-energy surface."""
    return np.array([1.0, 0.0, 0.0, ic.p_x, ic.p_y, p_z_root(ic.p_x, ic.p_y, ic.branch)])


def reduce_state(s, branch: int = 1) -> ReducedIC:
    """Inverse of :func:`embed` on states of the form ``(1, 0, 0, p_x, p_y, *)``."""
    s = as_state(s)
    return ReducedIC(float(s[3]), float(s[4]), branch)


def random_ic(seed: int, p_y_range: tuple[float, float] = (0.0, 1.0)) -> ReducedIC:
    rng = make_rng(seed, STREAM_INITIAL)
    p_x = rng.uniform(-PX_BOUND, PX_BOUND)
    p_y = rng.uniform(*p_y_range)
    return ReducedIC(float(p_x), float(p_y), 1)
