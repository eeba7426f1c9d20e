"""Per-bucket timing records, timing CSV I/O and per-width aggregation."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

TIMING_FIELDS = ["edge_u", "edge_v", "bucket_seq", "width", "backend", "elapsed_s", "ops", "flops_est"]
REPORT_FIELDS = ["backend", "width", "count", "mean_s", "total_s", "mean_flops"]

# complex multiply-add counted as 8 real flops
COMPLEX_FLOP_FACTOR = 8


@dataclass
class TimingRecord:
    width: int
    elapsed: float
    backend: str
    edge: tuple = (-1, -1)
    bucket_seq: int = 0

    def __post_init__(self):
        # keep elapsed strictly positive even on a coarse clock
        self.elapsed = max(float(self.elapsed), 1e-9)

    @property
    def ops(self) -> int:
        return 2 ** self.width

    @property
    def flops_est(self) -> float:
        return COMPLEX_FLOP_FACTOR * self.ops / self.elapsed

    def row(self) -> dict:
        return {"edge_u": self.edge[0], "edge_v": self.edge[1], "bucket_seq": self.bucket_seq,
                "width": self.width, "backend": self.backend, "elapsed_s": repr(self.elapsed),
                "ops": self.ops, "flops_est": repr(self.flops_est)}


@dataclass
class ContractionReport:
    value: complex
    records: list = field(default_factory=list)
    peak_bytes: int = 0
    max_result_width: int = 0
    n_buckets: int = 0

    @property
    def total_time(self) -> float:
        return sum(r.elapsed for r in self.records)


def write_timing_csv(records, path_or_file) -> None:
    def _write(fh):
        writer = csv.DictWriter(fh, TIMING_FIELDS, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow(rec.row())

    if isinstance(path_or_file, io.TextIOBase):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)


def read_timing_csv(path) -> list:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [TimingRecord(int(r["width"]), float(r["elapsed_s"]), r["backend"],
                         (int(r["edge_u"]), int(r["edge_v"])), int(r["bucket_seq"]))
            for r in rows]


def aggregate_by_width(records) -> list:
    """Per (backend, width): count, mean and total time, mean FLOPs.

    These are the three views of the per-width breakdown: mean time per
    bucket, number of buckets, and total time spent at each width.
    """
    groups = defaultdict(list)
    for rec in records:
        groups[(rec.backend, rec.width)].append(rec)
    rows = []
    for (backend, width), recs in sorted(groups.items()):
        times = np.array([r.elapsed for r in recs])
        rows.append({
            "backend": backend,
            "width": width,
            "count": len(recs),
            "mean_s": float(times.mean()),
            "total_s": float(times.sum()),
            "mean_flops": float(np.mean([r.flops_est for r in recs])),
        })
    return rows


def write_report_csv(rows, path_or_file) -> None:
    def _write(fh):
        writer = csv.DictWriter(fh, REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

    if isinstance(path_or_file, io.TextIOBase):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)
