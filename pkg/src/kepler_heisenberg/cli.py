"""Command-line entry point: ``kepler-heisenberg <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import archive as ar
from .config import ConfigError, RunConfig, load_config, preset_path
from .dynamics import conserved
from .integrator import Trajectory
from .optimizer import OrbitResult, optimize
from .plots import emit_orbit_plots, plot_line_scan, plot_plane_scan
from .reduced import ReducedIC, embed, random_ic
from .rng import RNG_ALGORITHM
from .scans import ScanRecord, line_points, plane_points, run_scan
from .shooting import assess
from .symmetry import AmbiguousClassError, DegenerateSignalError, classify_orbit, class_signal, verify_symmetry

log = logging.getLogger("kepler_heisenberg")

ARCHIVE_NAME = "results.kha"


def _trajectory_record(name: str, traj: Trajectory, stride: int) -> dict:
    return {"type": "trajectory", "name": name, "dt_sample": traj.dt_sample * stride, "t0": traj.t0,
            "termination": traj.termination}


def _trajectories_from(archive: ar.ResultsArchive) -> dict[str, Trajectory]:
    out = {}
    for rec in archive.records:
        if rec.get("type") == "trajectory" and rec["name"] in archive.arrays:
            out[rec["name"]] = Trajectory(archive.arrays[rec["name"]], rec["dt_sample"], rec["t0"],
                                          termination=rec["termination"])
    return out


def _orbit_from(archive: ar.ResultsArchive) -> OrbitResult | None:
    for rec in archive.records:
        if rec.get("type") == "orbit":
            return ar.orbit_from_dict(rec)
    return None


def _extrema(traj: Trajectory) -> dict:
    c = conserved(traj.states)
    out = {}
    for name, vals in zip(("H", "p_theta", "J"), c):
        out[f"{name}_min"] = repr(float(np.min(vals)))
        out[f"{name}_max"] = repr(float(np.max(vals)))
    return out


def _r(v):
    return "none" if v is None else repr(v)


def run_orbit(ic: ReducedIC, cfg: RunConfig, out: Path, command: str) -> int:
    """assess -> optimize -> classify for one starting point; writes all artifacts to ``out``."""
    wall = time.perf_counter()
    out.mkdir(parents=True, exist_ok=True)
    stride = cfg.trajectory_stride
    s0 = embed(ic)
    outcome = assess(s0, cfg.integrator(), cfg.shooting())
    start_traj = outcome.trajectory
    run_info = {"command": command, "seed": cfg.seed, "rng_algorithm": RNG_ALGORITHM,
                "archive_version": ar.FORMAT_VERSION}
    start_info = {"p_x": repr(ic.p_x), "p_y": repr(ic.p_y), "branch": ic.branch,
                  "assess_status": outcome.status, "assess_reason": outcome.reason or "none",
                  "assess_duration": repr(outcome.duration),
                  "initial_objective": _r(outcome.objective.value if outcome.objective else None)}
    records = [{"type": "assess", "status": outcome.status, "reason": outcome.reason, "duration": outcome.duration,
                "objective": ar._obj_dict(outcome.objective)},
               _trajectory_record("start", start_traj, stride)]
    arrays = {"start": start_traj.states[::stride]}

    if not outcome.is_candidate:
        target = out / "abortive"
        target.mkdir(exist_ok=True)
        archive = ar.ResultsArchive(command, cfg.as_dict(), cfg.seed, records, arrays)
        ar.write_archive(target / ARCHIVE_NAME, archive)
        emit_orbit_plots(target, {"start": start_traj}, [k for k in cfg.plot_kinds if k in ("xy", "z", "objective_time")])
        obj = outcome.objective.value if outcome.objective else None
        ar.write_records_csv(out / "records.csv",
                             [ScanRecord(ic.p_theta, ic.J, obj, None, None, f"abortive-{outcome.reason}")])
        ar.write_summary(out / "summary.txt", {
            "run": run_info, "config": cfg.as_dict(), "start": start_info,
            "result": {"status": f"abortive-{outcome.reason}", "saved_to": "abortive/"},
            "conserved": _extrema(start_traj),
            "timing": {"wall_time": f"{time.perf_counter() - wall:.3f}s"}})
        log.info("abortive (%s); curve saved under %s", outcome.reason, target)
        return 0

    result = optimize(ic, cfg.optimizer(), cfg.integrator(), outcome.duration)
    opt_traj = result.trajectory
    records.insert(0, ar.orbit_to_dict(result))
    records.append(_trajectory_record("optimized", opt_traj, stride))
    arrays["optimized"] = opt_traj.states[::stride]
    archive = ar.ResultsArchive(command, cfg.as_dict(), cfg.seed, records, arrays)
    ar.write_archive(out / ARCHIVE_NAME, archive)

    status = "closed" if result.symmetry is not None else "candidate"
    ar.write_records_csv(out / "records.csv", [ScanRecord(
        result.initial.p_theta, result.initial.J, result.objective.value, result.period, result.symmetry, status)])
    ar.write_summary(out / "summary.txt", {
        "run": run_info, "config": cfg.as_dict(), "start": start_info,
        "result": {"status": status, "final_objective": repr(result.objective.value),
                   "t_star": repr(result.objective.t_star), "period": _r(result.period),
                   "symmetry_type": str(result.symmetry) if result.symmetry else "none",
                   "refined_p_x": repr(result.initial.p_x), "refined_p_y": repr(result.initial.p_y),
                   "duration_used": repr(result.duration_used), "evaluations": result.evaluations,
                   "accepted_moves": len(result.history) - 1, "note": result.note or "none"},
        "conserved": _extrema(opt_traj),
        "timing": {"wall_time": f"{time.perf_counter() - wall:.3f}s"}})
    emit_orbit_plots(out / "plots", {"start": start_traj, "optimized": opt_traj}, cfg.plot_kinds,
                     history=result.history, accepted_at=result.accepted_at, evaluations=result.evaluations,
                     period=result.period, symmetry=result.symmetry)
    log.info("objective %.3g, type %s, period %s", result.objective.value, result.symmetry, result.period)
    return 0


def cmd_search(args, cfg: RunConfig) -> int:
    seed = args.search_seed
    cfg = cfg.replace(seed=seed)
    ic = random_ic(seed, (cfg.search_p_y_min, cfg.search_p_y_max))
    return run_orbit(ic, cfg, Path(args.out), f"search {seed}")


def cmd_optimize(args, cfg: RunConfig) -> int:
    ic = ReducedIC(args.px, args.py, cfg.branch)
    embed(ic)  # domain check before any output is written
    return run_orbit(ic, cfg, Path(args.out), f"optimize --px {args.px!r} --py {args.py!r}")


def _load_manifest(path: Path, header: dict) -> dict[int, ScanRecord]:
    if not path.exists():
        return {}
    lines = path.read_text().splitlines()
    if not lines or json.loads(lines[0]) != header:
        log.warning("manifest %s belongs to a different scan; starting over", path)
        return {}
    done = {}
    for line in lines[1:]:
        try:
            item = json.loads(line)
        except json.JSONDecodeError:
            break  # torn final line after an interruption
        done[item["index"]] = ar.scan_from_dict(item["record"])
    return done


def run_scan_command(kind: str, points, cfg: RunConfig, out: Path) -> int:
    wall = time.perf_counter()
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / "manifest.jsonl"
    header = {"kind": kind, "points": len(points), "config": cfg.as_dict()}
    done = _load_manifest(manifest, header)
    if not done:
        manifest.write_text(json.dumps(header, sort_keys=True) + "\n")
    if done:
        log.info("resuming: %d of %d points already done", len(done), len(points))
    with open(manifest, "a") as fh:
        def flush(index, rec):
            fh.write(json.dumps({"index": index, "record": ar.scan_to_dict(rec)}, sort_keys=True) + "\n")
            fh.flush()
            log.info("point %d/%d: %s %s", index + 1, len(points), rec.status, rec.symmetry or "")

        done.update(run_scan(kind, points, cfg, skip=done.keys(), on_record=flush))
    records = [done[i] for i in range(len(points))]
    ar.write_records_csv(out / "records.csv", records)
    ar.write_archive(out / ARCHIVE_NAME, ar.ResultsArchive(
        f"scan-{kind}", cfg.as_dict(), cfg.seed, [ar.scan_to_dict(r) for r in records]))
    (plot_plane_scan if kind == "plane" else plot_line_scan)(records, out / f"scan_{kind}.svg")
    counts = {}
    for r in records:
        counts[r.status] = counts.get(r.status, 0) + 1
    types = sorted({r.symmetry for r in records if r.status == "closed"}, reverse=True)
    ar.write_summary(out / "summary.txt", {
        "run": {"command": f"scan-{kind}", "seed": cfg.seed, "rng_algorithm": RNG_ALGORITHM,
                "archive_version": ar.FORMAT_VERSION, "points": len(points)},
        "config": cfg.as_dict(),
        "result": {**{f"status_{k}": v for k, v in sorted(counts.items())},
                   "closed_types": " ".join(str(t) for t in types) or "none"},
        "timing": {"wall_time": f"{time.perf_counter() - wall:.3f}s"}})
    return 0


def cmd_scan_plane(args, cfg: RunConfig) -> int:
    region = (cfg.plane_p_theta_min, cfg.plane_p_theta_max, cfg.plane_J_min, cfg.plane_J_max)
    return run_scan_command("plane", plane_points(region, cfg.plane_n), cfg, Path(args.out))


def cmd_scan_line(args, cfg: RunConfig) -> int:
    pts = line_points((cfg.line_p_theta_min, cfg.line_p_theta_max), cfg.line_n)
    return run_scan_command("line", pts, cfg, Path(args.out))


def cmd_detect(args, cfg: RunConfig) -> int:
    archive = ar.read_archive(args.archive)
    trajs = _trajectories_from(archive)
    orbit = _orbit_from(archive)
    if orbit is None or orbit.objective is None or "optimized" not in trajs:
        print("archive holds no optimized orbit")
        return 1
    traj = trajs["optimized"]
    try:
        sym, period = classify_orbit(traj, orbit.objective.t_star)
    except (AmbiguousClassError, DegenerateSignalError) as exc:
        print(f"unclassified: {exc}")
        return 0
    sig = class_signal(traj, sym.k, period)
    print(f"symmetry type: {sym}")
    print(f"period: {period!r}")
    print(f"objective: {orbit.objective.value!r}")
    print("class signal: " + " ".join(f"{v:.6g}" for v in sig.values))
    print(f"symmetry residual: {verify_symmetry(traj, sym, period):.3g}")
    return 0


def cmd_plot(args, cfg: RunConfig) -> int:
    archive = ar.read_archive(args.archive)
    out = Path(args.out)
    if archive.kind.startswith("scan-"):
        records = [ar.scan_from_dict(r) for r in archive.records]
        kind = archive.kind[len("scan-"):]
        out.mkdir(parents=True, exist_ok=True)
        (plot_plane_scan if kind == "plane" else plot_line_scan)(records, out / f"scan_{kind}.svg")
        return 0
    orbit = _orbit_from(archive)
    kinds = RunConfig(**archive.config).plot_kinds
    kw = {}
    if orbit is not None:
        kw = dict(history=orbit.history, accepted_at=orbit.accepted_at, evaluations=orbit.evaluations,
                  period=orbit.period, symmetry=orbit.symmetry)
    emit_orbit_plots(out, _trajectories_from(archive), kinds, **kw)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--preset", help="named configuration shipped with the package (e.g. line-full)")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="seed for the random generator")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="kepler-heisenberg", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("search", parents=[common], help="random zero-energy start, then optimize")
    s.add_argument("search_seed", type=int)
    s.set_defaults(func=cmd_search)
    s = sub.add_parser("optimize", parents=[common], help="optimize from a given (p_x, p_y)")
    s.add_argument("--px", type=float, required=True, help="p_x (= J) of the start")
    s.add_argument("--py", type=float, required=True, help="p_y (= p_theta) of the start")
    s.set_defaults(func=cmd_optimize)
    s = sub.add_parser("scan-plane", parents=[common], help="grid scan of the (p_theta, J) plane")
    s.set_defaults(func=cmd_scan_plane)
    s = sub.add_parser("scan-line", parents=[common], help="optimize along J = 0")
    s.set_defaults(func=cmd_scan_line)
    s = sub.add_parser("detect", parents=[common], help="classify the orbit stored in an archive")
    s.add_argument("archive")
    s.set_defaults(func=cmd_detect)
    s = sub.add_parser("plot", parents=[common], help="render figures from an archive")
    s.add_argument("archive")
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        path = args.config or (preset_path(args.preset) if args.preset else None)
        overrides = list(args.set)
        if args.seed is not None:
            overrides.append(f"seed = {args.seed}")
        cfg = load_config(path, overrides)
        if args.preset and args.config:
            raise ConfigError("use either --config or --preset, not both")
        return args.func(args, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
