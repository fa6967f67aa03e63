"""Versioned binary results archive, CSV records and the text summary.

Archive layout (all integers little-endian)::

    offset  size  field
    0       8     magic b"KHORBIT\\0"
    8       2     format version (uint16)
    10      1     byte order of the array payload, always b"<"
    11      1     reserved, zero
    12      8     header length H in bytes (uint64)
    20      H     UTF-8 JSON header
    20+H    ...   array payload

The header holds the run kind, config snapshot, generator identifier and seed, the
record list and an index ``arrays: [{name, dtype, shape, offset, nbytes}]`` with
offsets relative to the start of the payload.  Arrays are stored as C-ordered
little-endian float64.
"""

from __future__ import annotations

import csv
import io
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .optimizer import OrbitResult
from .reduced import ReducedIC
from .rng import RNG_ALGORITHM
from .scans import ScanRecord
from .shooting import ObjectiveValue
from .symmetry import SymmetryType

MAGIC = b"KHORBIT\0"
FORMAT_VERSION = 1
_PREAMBLE = struct.Struct("<8sHccQ")

CSV_HEADER = ["p_theta", "J", "objective", "period", "symmetry_j", "symmetry_k", "status"]


class ArchiveError(ValueError):
    pass


@dataclass
class ResultsArchive:
    kind: str
    config: dict
    seed: int
    records: list = field(default_factory=list)
    arrays: dict = field(default_factory=dict)
    rng_algorithm: str = RNG_ALGORITHM
    version: int = FORMAT_VERSION

    def __eq__(self, other):
        if not isinstance(other, ResultsArchive):
            return NotImplemented
        same = (self.kind, self.config, self.seed, self.records, self.rng_algorithm, self.version) == (
            other.kind, other.config, other.seed, other.records, other.rng_algorithm, other.version)
        return same and self.arrays.keys() == other.arrays.keys() and all(
            np.array_equal(self.arrays[k], other.arrays[k]) and self.arrays[k].shape == other.arrays[k].shape
            for k in self.arrays)


def write_archive(path: str | Path, archive: ResultsArchive) -> None:
    index, blobs, offset = [], [], 0
    for name, arr in archive.arrays.items():
        data = np.ascontiguousarray(arr, dtype="<f8")
        raw = data.tobytes()
        index.append({"name": name, "dtype": "<f8", "shape": list(data.shape), "offset": offset, "nbytes": len(raw)})
        blobs.append(raw)
        offset += len(raw)
    header = {
        "format": "kepler-heisenberg-archive",
        "version": archive.version,
        "kind": archive.kind,
        "config": archive.config,
        "rng": {"algorithm": archive.rng_algorithm, "seed": archive.seed},
        "records": archive.records,
        "arrays": index,
    }
    head = json.dumps(header, sort_keys=True, allow_nan=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_PREAMBLE.pack(MAGIC, archive.version, b"<", b"\0", len(head)))
        fh.write(head)
        for raw in blobs:
            fh.write(raw)


def read_archive(path: str | Path) -> ResultsArchive:
    buf = Path(path).read_bytes()
    if len(buf) < _PREAMBLE.size:
        raise ArchiveError("file too short for an archive header")
    magic, version, order, _, head_len = _PREAMBLE.unpack_from(buf)
    if magic != MAGIC:
        raise ArchiveError("not a results archive (bad magic)")
    if version != FORMAT_VERSION:
        raise ArchiveError(f"unsupported archive version {version}")
    if order != b"<":
        raise ArchiveError(f"unsupported byte order {order!r}")
    start = _PREAMBLE.size
    header = json.loads(buf[start:start + head_len].decode("utf-8"))
    payload = memoryview(buf)[start + head_len:]
    arrays = {}
    for item in header["arrays"]:
        raw = payload[item["offset"]:item["offset"] + item["nbytes"]]
        arrays[item["name"]] = np.frombuffer(raw, dtype=item["dtype"]).reshape(item["shape"]).astype(float)
    return ResultsArchive(header["kind"], header["config"], header["rng"]["seed"], header["records"], arrays,
                          header["rng"]["algorithm"], version)


# record <-> plain dict

def _type_dict(t: SymmetryType | None):
    return None if t is None else [t.j, t.k]


def _type_from(v) -> SymmetryType | None:
    return None if v is None else SymmetryType(*v)


def _ic_dict(ic: ReducedIC) -> dict:
    return {"p_x": ic.p_x, "p_y": ic.p_y, "branch": ic.branch}


def _obj_dict(o: ObjectiveValue | None):
    return None if o is None else {"value": o.value, "t_star": o.t_star, "index": o.index}


def orbit_to_dict(r: OrbitResult) -> dict:
    return {
        "type": "orbit",
        "start": _ic_dict(r.start),
        "initial": _ic_dict(r.initial),
        "objective": _obj_dict(r.objective),
        "duration_used": r.duration_used,
        "history": list(r.history),
        "accepted_at": list(r.accepted_at),
        "evaluations": r.evaluations,
        "period": r.period,
        "symmetry": _type_dict(r.symmetry),
        "note": r.note,
    }


def orbit_from_dict(d: dict) -> OrbitResult:
    obj = d["objective"]
    return OrbitResult(
        ReducedIC(**d["start"]), ReducedIC(**d["initial"]),
        None if obj is None else ObjectiveValue(**obj),
        d["duration_used"], list(d["history"]), list(d["accepted_at"]), d["evaluations"],
        d["period"], _type_from(d["symmetry"]), d["note"])


def scan_to_dict(r: ScanRecord) -> dict:
    return {
        "type": "scan",
        "p_theta": r.p_theta, "J": r.J, "objective": r.objective, "period": r.period,
        "symmetry": _type_dict(r.symmetry), "status": r.status,
        "refined_p_theta": r.refined_p_theta, "refined_J": r.refined_J,
    }


def scan_from_dict(d: dict) -> ScanRecord:
    return ScanRecord(d["p_theta"], d["J"], d["objective"], d["period"], _type_from(d["symmetry"]), d["status"],
                      d["refined_p_theta"], d["refined_J"])


# text exports

def _num(v) -> str:
    return "" if v is None else format(float(v), ".17g")


def csv_row(r: ScanRecord) -> list[str]:
    t = r.symmetry
    return [_num(r.p_theta), _num(r.J), _num(r.objective), _num(r.period),
            "" if t is None else str(t.j), "" if t is None else str(t.k), r.status]


def records_csv(records: list[ScanRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(csv_row(r))
    return buf.getvalue()


def parse_records_csv(text: str) -> list[ScanRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ArchiveError("unexpected CSV header")

    def opt(v):
        return float(v) if v else None

    out = []
    for row in rows[1:]:
        pt, J, obj, period, j, k, status = row
        sym = SymmetryType(int(j), int(k)) if j else None
        out.append(ScanRecord(float(pt), float(J), opt(obj), opt(period), sym, status))
    return out


def write_records_csv(path: str | Path, records: list[ScanRecord]) -> None:
    Path(path).write_text(records_csv(records))


def write_summary(path: str | Path, sections: dict[str, dict]) -> None:
    """Write ``[section]`` blocks of ``key: value`` lines."""
    lines = []
    for title, items in sections.items():
        lines.append(f"[{title}]")
        lines.extend(f"{k}: {v}" for k, v in items.items())
        lines.append("")
    Path(path).write_text("\n".join(lines))
