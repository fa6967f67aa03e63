"""Symmetry type ``j/k`` of a closed orbit from the discrete Fourier transform.

Over one period ``T`` the order ``k`` is the dominant nonzero frequency of ``z(t)``.
The class ``j`` is read off the planar curve ``w = x + i y``: an orbit with
``q(t + T/k) = rot(2 pi j / k) q(t)`` has Fourier modes only at signed frequencies
``m = j (mod k)``, so averaging coefficient norms over residues mod ``k`` (the class
signal) peaks at ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import numpy as np

from .integrator import Trajectory

RESAMPLE_SIZE = 4096
AMBIGUITY = 0.05


class DegenerateSignalError(ValueError):
    pass


class AmbiguousClassError(ValueError):
    """The two largest class-signal entries are too close to call."""

    def __init__(self, message, signal=None):
        super().__init__(message)
        self.signal = signal


@total_ordering
@dataclass(frozen=True)
class SymmetryType:
    j: int
    k: int

    def __post_init__(self):
        if not (1 <= self.j <= self.k) or math.gcd(self.j, self.k) != 1:
            raise ValueError(f"{self.j}/{self.k} is not a reduced type in (0, 1]")

    @classmethod
    def reduced(cls, j: int, k: int) -> "SymmetryType":
        """Reduce ``j/k`` with residue 0 read as ``k/k``."""
        j = j % k or k
        g = math.gcd(j, k)
        return cls(j // g, k // g)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.j, self.k)

    def __lt__(self, other):
        if not isinstance(other, SymmetryType):
            return NotImplemented
        return self.fraction < other.fraction

    def __str__(self):
        return f"{self.j}/{self.k}"


@dataclass(frozen=True)
class ClassSignal:
    values: np.ndarray

    @property
    def k(self) -> int:
        return len(self.values)

    def argmax(self) -> int:
        return int(np.argmax(self.values))


def resample_period(traj: Trajectory, period: float | None = None, n: int = RESAMPLE_SIZE) -> np.ndarray:
    """States at ``t0 + i T / n`` for ``i < n``, linearly interpolated.

    A trajectory already sampled at exactly ``T / n`` is used as is.
    """
    period = traj.duration if period is None else float(period)
    if not period > 0:
        raise ValueError("period must be positive")
    if period > traj.duration * (1 + 1e-9) + 1e-12:
        raise ValueError(f"trajectory (duration {traj.duration:g}) does not cover the period {period:g}")
    if len(traj) > n and abs(traj.dt_sample * n - period) <= 1e-9 * period:
        return traj.states[:n].copy()
    t = np.arange(n) * (period / n)
    src = traj.times - traj.t0
    return np.column_stack([np.interp(t, src, traj.states[:, i]) for i in range(6)])


def _closure_defect(traj: Trajectory, period: float) -> float:
    src = traj.times - traj.t0
    end = np.array([np.interp(period, src, traj.states[:, i]) for i in range(3)])
    return float(np.linalg.norm(end - traj.states[0, :3]))


def _order_from_samples(q: np.ndarray) -> int:
    z = q[:, 2]
    zc = z - z.mean()
    if np.sqrt(np.mean(zc * zc)) < 1e-12:
        raise DegenerateSignalError("z(t) is constant over the period; no symmetry order")
    spec = np.abs(np.fft.rfft(zc))
    return int(np.argmax(spec[1:])) + 1


def _signal_from_samples(q: np.ndarray, k: int) -> ClassSignal:
    if k < 1:
        raise ValueError("k must be a positive integer")
    n = len(q)
    norms = np.abs(np.fft.fft(q[:, 0] + 1j * q[:, 1])) / n
    residues = np.fft.fftfreq(n, 1.0 / n).astype(int) % k
    sums = np.bincount(residues, weights=norms, minlength=k)
    counts = np.bincount(residues, minlength=k)
    return ClassSignal(sums / counts)


def _raw_type(q: np.ndarray) -> tuple[int, int, ClassSignal]:
    k = _order_from_samples(q)
    sig = _signal_from_samples(q, k)
    if k == 1:
        return 1, 1, sig
    top, second = np.sort(sig.values)[::-1][:2]
    if top - second < AMBIGUITY * top:
        raise AmbiguousClassError(f"class signal near-tie for k={k}: {top:.4g} vs {second:.4g}", sig)
    return sig.argmax(), k, sig


def detect_order(traj: Trajectory, period: float | None = None) -> int:
    return _order_from_samples(resample_period(traj, period))


def class_signal(traj: Trajectory, k: int, period: float | None = None) -> ClassSignal:
    return _signal_from_samples(resample_period(traj, period), k)


def detect_type(traj: Trajectory, period: float | None = None) -> SymmetryType:
    j, k, _ = _raw_type(resample_period(traj, period))
    return SymmetryType.reduced(j, k)


def classify_orbit(traj: Trajectory, period: float) -> tuple[SymmetryType, float]:
    """Type and fundamental period of a closed orbit observed over ``period``.

    When the window covers ``g`` repetitions of the orbit the raw class and order share
    the factor ``g``; the fundamental period is then ``period / g``.
    """
    j, k, _ = _raw_type(resample_period(traj, period))
    j = j % k or k
    g = math.gcd(j, k)
    return SymmetryType(j // g, k // g), period / g


def spectral_shift(q: np.ndarray, fraction: float) -> np.ndarray:
    """Periodic samples ``q(t + fraction * T)`` via the Fourier series of each column."""
    n = len(q)
    m = np.fft.fftfreq(n, 1.0 / n)
    phase = np.exp(2j * np.pi * m * fraction)
    return np.real(np.fft.ifft(np.fft.fft(q, axis=0) * phase[:, None], axis=0))


def verify_symmetry(traj: Trajectory, t: SymmetryType, period: float | None = None) -> float:
    """Worst violation of ``q(t + T/k) = rot_z(2 pi j / k) q(t)`` over one period.

    The shift treats the window as periodic, so the closure defect ``|q(T) - q(0)|``
    is folded into the residual.
    """
    period = traj.duration if period is None else float(period)
    q = resample_period(traj, period)[:, :3]
    shifted = spectral_shift(q, 1.0 / t.k)
    w = q[:, 0] + 1j * q[:, 1]
    rot = np.exp(2j * np.pi * t.j / t.k)
    ws = shifted[:, 0] + 1j * shifted[:, 1]
    err = np.sqrt(np.abs(ws - rot * w) ** 2 + (shifted[:, 2] - q[:, 2]) ** 2)
    return max(float(err.max()), _closure_defect(traj, period))


def farey_sequence(n: int) -> list[Fraction]:
    """Reduced fractions in ``(0, 1]`` with denominator at most ``n``, ascending."""
    if n < 1:
        raise ValueError("Farey order must be positive")
    a, b, c, d = 0, 1, 1, n
    out = []
    while c <= n:
        out.append(Fraction(c, d))
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return out


def reversed_farey(n: int) -> list[Fraction]:
    return farey_sequence(n)[::-1]


def farey_adjacent(a, b) -> bool:
    """Whether ``a`` and ``b`` are neighbours in the Farey sequence of order ``max(den)``."""
    a, b = (x.fraction if isinstance(x, SymmetryType) else Fraction(x) for x in (a, b))
    return abs(a.numerator * b.denominator - b.numerator * a.denominator) == 1
