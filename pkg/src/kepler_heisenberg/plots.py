"""Static SVG figures for orbit runs and scans."""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .dynamics import conserved  # noqa: E402
from .shooting import distance_sq  # noqa: E402
from .symmetry import SymmetryType, class_signal, resample_period  # noqa: E402
from .integrator import Trajectory  # noqa: E402

log = logging.getLogger(__name__)

matplotlib.rcParams["svg.hashsalt"] = "kepler-heisenberg"
matplotlib.rcParams["svg.fonttype"] = "path"


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _panels(curves: dict[str, Trajectory], **kw):
    fig, axes = plt.subplots(1, len(curves), figsize=(5 * len(curves), 4), squeeze=False, **kw)
    return fig, dict(zip(curves, axes[0]))


def plot_xy(curves, path):
    fig, axes = _panels(curves)
    for name, traj in curves.items():
        ax = axes[name]
        ax.plot(traj.states[:, 0], traj.states[:, 1], lw=0.8)
        ax.plot([0.0], [0.0], "o", color="black", ms=4)
        ax.set_aspect("equal", adjustable="datalim")
        ax.set(title=f"{name}: xy projection", xlabel="x", ylabel="y")
    return _save(fig, path)


def _series(curves, path, fn, ylabel, logy=False):
    fig, axes = _panels(curves)
    for name, traj in curves.items():
        ax = axes[name]
        y = fn(traj)
        (ax.semilogy if logy else ax.plot)(traj.times, y, lw=0.8)
        ax.set(title=f"{name}: {ylabel}", xlabel="t", ylabel=ylabel)
    return _save(fig, path)


def plot_z(curves, path):
    return _series(curves, path, lambda tr: tr.states[:, 2], "z")


def plot_objective_time(curves, path):
    return _series(curves, path, lambda tr: np.maximum(distance_sq(tr.states, tr.states[0]), 1e-300),
                   "squared distance from start", logy=True)


def plot_energy(curves, path):
    return _series(curves, path, lambda tr: conserved(tr.states).H, "H")


def plot_dilational(curves, path):
    return _series(curves, path, lambda tr: conserved(tr.states).J, "J")


def plot_objective_iterations(history, accepted_at, evaluations, path):
    fig, ax = plt.subplots(figsize=(5, 4))
    x = list(accepted_at) + [max(evaluations - 1, accepted_at[-1])]
    y = list(history) + [history[-1]]
    ax.step(x, y, where="post")
    ax.set_yscale("log")
    ax.set(title="objective vs iteration", xlabel="iteration", ylabel="objective")
    return _save(fig, path)


def plot_class_signal(traj: Trajectory, period: float, sym: SymmetryType, path):
    k = max(sym.k, 1)
    sig = class_signal(traj, k, period)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(range(k), sig.values)
    ax.set(title=f"class signal (type {sym})", xlabel="residue mod k", ylabel="mean |coefficient|")
    return _save(fig, path)


def plot_dft(traj: Trajectory, period: float, path):
    q = resample_period(traj, period)
    n = len(q)
    zs = np.abs(np.fft.rfft(q[:, 2] - q[:, 2].mean())) / n
    ws = np.abs(np.fft.fftshift(np.fft.fft(q[:, 0] + 1j * q[:, 1]))) / n
    m = np.fft.fftshift(np.fft.fftfreq(n, 1.0 / n))
    lim = 40
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(10, 4))
    a1.stem(np.arange(len(zs))[:lim], zs[:lim])
    a1.set(title="|DFT z|", xlabel="frequency (cycles per period)")
    sel = np.abs(m) < lim
    a2.stem(m[sel], ws[sel])
    a2.set(title="|DFT (x + iy)|", xlabel="signed frequency")
    return _save(fig, path)


def emit_orbit_plots(outdir: str | Path, curves: dict[str, Trajectory], kinds, *, history=None, accepted_at=None,
                     evaluations=0, period=None, symmetry=None) -> list[Path]:
    """Write one SVG per requested kind; kinds whose data is missing are skipped with a warning."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    curves = {k: v for k, v in curves.items() if v is not None}
    written = []
    optimized = curves.get("optimized")
    for kind in kinds:
        path = outdir / f"{kind}.svg"
        if kind in ("xy", "z", "objective_time", "energy", "dilational"):
            if not curves:
                log.warning("skipping %s plot: no trajectories", kind)
                continue
            fn = {"xy": plot_xy, "z": plot_z, "objective_time": plot_objective_time,
                  "energy": plot_energy, "dilational": plot_dilational}[kind]
            written.append(fn(curves, path))
        elif kind == "objective_iterations":
            if not history:
                log.warning("skipping objective_iterations plot: no optimization history")
                continue
            written.append(plot_objective_iterations(history, accepted_at, evaluations, path))
        elif kind in ("class_signal", "dft"):
            if optimized is None or period is None or period > optimized.duration:
                log.warning("skipping %s plot: no closed orbit", kind)
                continue
            if kind == "dft":
                written.append(plot_dft(optimized, period, path))
            elif symmetry is None:
                log.warning("skipping class_signal plot: orbit not classified")
            else:
                written.append(plot_class_signal(optimized, period, symmetry, path))
    return written


def plot_plane_scan(records, path):
    fig, ax = plt.subplots(figsize=(7, 5))
    have = [r for r in records if r.objective is not None]
    missing = [r for r in records if r.objective is None]
    if have:
        sc = ax.scatter([r.p_theta for r in have], [r.J for r in have],
                        c=np.log10([max(r.objective, 1e-300) for r in have]), cmap="jet_r", s=12)
        fig.colorbar(sc, ax=ax, label="log10 objective")
    if missing:
        ax.scatter([r.p_theta for r in missing], [r.J for r in missing], c="lightgray", s=12)
    ax.set(xlabel="p_theta", ylabel="J", title="objective over the (p_theta, J) plane")
    return _save(fig, Path(path))


def plot_line_scan(records, path):
    fig, (a1, a2) = plt.subplots(2, 1, figsize=(8, 8), sharex=True)
    have = [r for r in records if r.objective is not None]
    a1.semilogy([r.p_theta for r in have], [max(r.objective, 1e-300) for r in have], ".", ms=3)
    a1.set(ylabel="objective")
    closed = [r for r in records if r.status == "closed"]
    a2.plot([r.p_theta for r in closed], [r.period for r in closed], ".", ms=3)
    for t in sorted({r.symmetry for r in closed}):
        pts = [r for r in closed if r.symmetry == t]
        a2.annotate(str(t), (pts[0].p_theta, max(r.period for r in pts)), fontsize=7)
    a2.set(xlabel="p_theta", ylabel="period")
    return _save(fig, Path(path))
