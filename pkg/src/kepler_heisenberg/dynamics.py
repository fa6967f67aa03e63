"""Kepler-Heisenberg phase space: Hamiltonian, closed-form partials, conserved
quantities and the Carnot dilation.

States are length-6 float arrays ``(x, y, z, p_x, p_y, p_z)``; functions that
make sense batched accept ``(..., 6)`` arrays.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numba
import numpy as np

#: Coupling constant of the sub-Laplacian fundamental solution.
ALPHA = 1.0 / (8.0 * math.pi)

#: Below this value of the gauge ``rho = (x^2+y^2)^2 + 16 z^2`` the state counts as a collision.
RHO_GUARD = 1e-30


class SingularityError(ArithmeticError):
    """Raised when a state sits on the sun at the origin (``rho`` below the guard)."""


class PhaseState(NamedTuple):
    x: float
    y: float
    z: float
    p_x: float
    p_y: float
    p_z: float


class ConservedSet(NamedTuple):
    H: float
    p_theta: float
    J: float


def as_state(s) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if arr.shape[-1:] != (6,):
        raise ValueError(f"phase state must have trailing dimension 6, got shape {arr.shape}")
    return arr


def gauge(s) -> np.ndarray:
    """Singularity gauge ``rho(q) = (x^2+y^2)^2 + 16 z^2``."""
    s = as_state(s)
    r2 = s[..., 0] ** 2 + s[..., 1] ** 2
    return r2 * r2 + 16.0 * s[..., 2] ** 2


def _check_rho(rho) -> None:
    if np.any(rho < RHO_GUARD):
        raise SingularityError("potential evaluated at the origin (rho below guard)")


def kinetic(s):
    s = as_state(s)
    x, y, _, px, py, pz = np.moveaxis(s, -1, 0)
    PX = px - 0.5 * y * pz
    PY = py + 0.5 * x * pz
    return 0.5 * (PX * PX + PY * PY)


def potential(s):
    rho = gauge(s)
    _check_rho(rho)
    return -ALPHA / np.sqrt(rho)


def hamiltonian(s):
    return kinetic(s) + potential(s)


@numba.njit(cache=True, inline="always")
def grad_kernel(x, y, z, px, py, pz, out):
    """Write dH into ``out``; returns False instead of dividing by a vanishing gauge."""
    PX = px - 0.5 * y * pz
    PY = py + 0.5 * x * pz
    r2 = x * x + y * y
    rho = r2 * r2 + 16.0 * z * z
    if not rho >= 1e-30:
        return False
    # dU/dq = alpha/2 * rho^(-3/2) * drho/dq
    c = 0.5 * ALPHA / (rho * math.sqrt(rho))
    out[0] = 0.5 * pz * PY + c * 4.0 * x * r2
    out[1] = -0.5 * pz * PX + c * 4.0 * y * r2
    out[2] = c * 32.0 * z
    out[3] = PX
    out[4] = PY
    out[5] = 0.5 * (x * PY - y * PX)
    return True


@numba.njit(cache=True)
def _grad_rows(states, out):
    for i in range(states.shape[0]):
        s = states[i]
        if not grad_kernel(s[0], s[1], s[2], s[3], s[4], s[5], out[i]):
            return False
    return True


def grad_hamiltonian(s) -> np.ndarray:
    """Closed-form ``(dH/dx, dH/dy, dH/dz, dH/dp_x, dH/dp_y, dH/dp_z)``."""
    s = as_state(s)
    flat = np.ascontiguousarray(s.reshape(-1, 6))
    out = np.empty_like(flat)
    if not _grad_rows(flat, out):
        raise SingularityError("gradient evaluated at the origin (rho below guard)")
    return out.reshape(s.shape)


def vector_field(s) -> np.ndarray:
    """Hamilton's equations, ordered as ``(xdot, ydot, zdot, p_xdot, p_ydot, p_zdot)``."""
    g = grad_hamiltonian(s)
    return np.concatenate([g[..., 3:], -g[..., :3]], axis=-1)


def angular_momentum(s):
    s = as_state(s)
    return s[..., 0] * s[..., 4] - s[..., 1] * s[..., 3]


def dilational_momentum(s):
    s = as_state(s)
    return s[..., 0] * s[..., 3] + s[..., 1] * s[..., 4] + 2.0 * s[..., 2] * s[..., 5]


def conserved(s) -> ConservedSet:
    return ConservedSet(hamiltonian(s), angular_momentum(s), dilational_momentum(s))


_DILATION_WEIGHTS = np.array([1.0, 1.0, 2.0, -1.0, -1.0, -2.0])


def dilate(s, lam: float) -> np.ndarray:
    """Carnot dilation: ``(lx, ly, l^2 z, p_x/l, p_y/l, p_z/l^2)``."""
    if not lam > 0:
        raise ValueError(f"dilation factor must be positive, got {lam}")
    return as_state(s) * lam**_DILATION_WEIGHTS
