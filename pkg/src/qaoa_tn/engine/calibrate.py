"""Trial-based choice of the mixed backend's width threshold."""

from __future__ import annotations

import statistics
import time
import warnings
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from ..circuits import Angles
from ..errors import CalibrationError
from ..graphs import random_regular
from ..ordering import Bucket
from ..tensornet import Tensor
from .backends import Backend
from .contraction import contract_network
from .energy import plan

DEFAULT_THRESHOLD = 15
TRIAL_GRAPH = dict(n=10, d=3, seed=7)
TRIAL_ANGLES = Angles((0.4, 0.9), (0.3, 0.6))


@dataclass
class Calibration:
    threshold: int
    crossover: int = None
    low_times: dict = field(default_factory=dict)
    high_times: dict = field(default_factory=dict)
    fell_back: bool = False

    def widths(self):
        return sorted(set(self.low_times) & set(self.high_times))


def synthetic_bucket(width: int, seed=0, dtype=np.complex128) -> Bucket:
    """Bucket shaped like a late QAOA bucket: one wide incoming tensor plus
    a few rank-2 gate tensors, all sharing the summed variable ``0``."""
    if width < 2:
        raise ValueError("synthetic buckets need width >= 2")
    rng = np.random.default_rng(seed)

    def rand(rank):
        shape = (2,) * rank
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)).astype(dtype)

    big = tuple(range(width - 1))
    tensors = [Tensor("wide", big, rand(len(big))),
               Tensor("gate", (0, width - 1), rand(2))]
    for k in rng.choice(np.arange(1, width), size=min(2, width - 1), replace=False):
        tensors.append(Tensor("gate", (0, int(k)), rand(2)))
    return Bucket((0,), tensors)


def time_bucket(backend: Backend, bucket: Bucket, repeats=5) -> float:
    """Median wall time of ``repeats`` contractions after one warm-up."""
    backend.contract(bucket)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        backend.contract(bucket)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _trial_times(backend, plans, repeats):
    per_width = defaultdict(list)
    for _ in range(repeats):
        run = defaultdict(list)
        for edge, net, sched in plans:
            for rec in contract_network(net, sched, backend, edge).records:
                run[rec.width].append(rec.elapsed)
        for w, ts in run.items():
            per_width[w].append(float(np.mean(ts)))
    return {w: statistics.median(ts) for w, ts in per_width.items()}


def calibrate(low: Backend, high: Backend, graph=None, angles=None, max_width=24,
              repeats=5, margin=0.05, default=DEFAULT_THRESHOLD) -> Calibration:
    """Pick the mixed-backend threshold from a small timing trial.

    Both backends contract the same trial QAOA networks (default: 10-vertex
    3-regular graph, ``p = 2``); widths up to ``max_width`` that the trial
    never produces are filled with :func:`synthetic_bucket` timings. With
    per-width medians in hand, the crossover ``W`` is the smallest width
    from which ``high`` is faster (by more than ``margin``) at every wider
    measured width. The threshold is ``W - 1`` so that buckets of width
    ``W`` and up go to ``high``. If ``high`` never wins at the top width,
    the default threshold is returned with a warning.
    """
    if low is high or low.name == high.name:
        warnings.warn(f"low and high backend are both {low.name!r}; "
                      f"no crossover, using threshold {default}")
        return Calibration(default, fell_back=True)
    if graph is None:
        graph = random_regular(**TRIAL_GRAPH)
    angles = angles or TRIAL_ANGLES
    try:
        plans = plan(graph, angles)
        low_t = _trial_times(low, plans, repeats)
        high_t = _trial_times(high, plans, repeats)
        for w in range(2, max_width + 1):
            if w not in low_t:
                bucket = synthetic_bucket(w, seed=w)
                low_t[w] = time_bucket(low, bucket, repeats)
                high_t[w] = time_bucket(high, bucket, repeats)
    except Exception as exc:
        raise CalibrationError(f"calibration trial failed: {exc}") from exc

    crossover = find_crossover(low_t, high_t, margin)
    if crossover is None:
        warnings.warn(f"no width where {high.name} beats {low.name}; "
                      f"using threshold {default}")
        return Calibration(default, None, low_t, high_t, fell_back=True)
    threshold = min(max(crossover - 1, 1), 40)
    return Calibration(threshold, crossover, low_t, high_t)


def find_crossover(low_times: dict, high_times: dict, margin=0.05):
    """Smallest width ``W`` such that ``high`` beats ``low`` by more than
    ``margin`` at every measured width ``>= W``; ``None`` if ``high`` does
    not win at the widest one."""
    crossover = None
    for w in sorted(set(low_times) & set(high_times), reverse=True):
        if high_times[w] * (1 + margin) < low_times[w]:
            crossover = w
        else:
            break
    return crossover
