import numpy as np
import pytest

from kepler_heisenberg.config import RunConfig
from kepler_heisenberg.reduced import PX_BOUND
from kepler_heisenberg.scans import ScanRecord, line_points, plane_points, run_scan, scan_line, scan_plane
from kepler_heisenberg.symmetry import SymmetryType

FAST = RunConfig(t_max=80.0, delta=2e-3)


def test_plane_points_grid():
    pts = plane_points((0.0, 1.0, -0.2, 0.2), 9)
    assert len(pts) == 9
    assert sorted({p for p, _ in pts}) == pytest.approx([1 / 6, 0.5, 5 / 6])
    assert sorted({J for _, J in pts}) == pytest.approx([-0.2 + 0.4 / 6, 0.0, 0.2 - 0.4 / 6])
    with pytest.raises(ValueError):
        plane_points((0, 1, -0.2, 0.2), 10)
    with pytest.raises(ValueError):
        plane_points((0, 1, -0.3, 0.3), 4)


def test_line_points():
    pts = line_points((0.1, 0.2), 4)
    assert [J for _, J in pts] == [0.0] * 4
    assert [p for p, _ in pts] == pytest.approx([0.1125, 0.1375, 0.1625, 0.1875])


def test_single_point_plane_scan():
    recs = scan_plane(FAST, (0.15, 0.17, -0.01, 0.01), 1)
    assert len(recs) == 1
    assert recs[0].p_theta == pytest.approx(0.16) and recs[0].J == 0.0


def test_outward_point_is_abortive():
    recs = scan_plane(RunConfig(), (0.2, 0.2, 0.1, 0.1), 1)
    assert recs[0].status == "abortive-escape"


def test_zero_J_row_is_the_minimum_of_its_column():
    # a 3 x 3 grid centred on J = 0 around the type 1/2 plateau
    recs = scan_plane(RunConfig(), (0.155, 0.175, -0.06, 0.06), 9)
    for col in range(3):
        column = [recs[row * 3 + col] for row in range(3)]
        mid = column[1]
        assert mid.J == pytest.approx(0.0, abs=1e-15)
        assert mid.status == "candidate"
        others = [r.objective for r in (column[0], column[2]) if r.objective is not None]
        assert all(mid.objective < o for o in others)


def test_records_do_not_depend_on_worker_count():
    cfg = RunConfig(t_max=80.0, delta=2e-3, line_iterations=5)
    pts = line_points((0.15, 0.25), 4)
    serial = run_scan("line", pts, cfg)
    parallel = run_scan("line", pts, cfg.replace(workers=2))
    assert serial == parallel
    partial = run_scan("line", pts, cfg, skip={0, 2})
    assert partial == {i: serial[i] for i in (1, 3)}


def test_line_scan_order_and_callback():
    seen = []
    cfg = RunConfig(t_max=40.0, delta=2e-3, line_iterations=2)
    done = run_scan("line", line_points((0.2, 0.3), 2), cfg, on_record=lambda i, r: seen.append(i))
    assert seen == [0, 1] and sorted(done) == [0, 1]
    assert scan_line(cfg, (0.2, 0.3), 2) == [done[0], done[1]]


def test_scan_record_validation():
    with pytest.raises(ValueError):
        ScanRecord(0.1, 0.0, 1e-5, None, None, "closed")
    with pytest.raises(ValueError):
        ScanRecord(0.1, 0.0, 1e-5, None, None, "weird")
    ScanRecord(0.1, 0.0, 1e-5, 84.0, SymmetryType(1, 2), "closed")
