"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Lines are collected in ``conftest.ACCEPTANCE_LINES`` and printed in the
terminal summary; each test also prints its own line (visible with ``-s``).
"""

import time

import numpy as np
import pytest

import conftest
from qaoa_tn import Angles, random_regular
from qaoa_tn.bench import bench_matmul, bench_tncontract_random, expression_ops
from qaoa_tn.engine import (MatmulBackend, MixedBackend, NaiveBackend, energy_expectation,
                            read_timing_csv, tensor_bytes, write_timing_csv)
from qaoa_tn.engine.calibrate import calibrate
from qaoa_tn.errors import ResourceLimitError
from qaoa_tn.ordering import width_histogram
from qaoa_tn.statevector import oracle_energy

ORACLE_TOL = 1e-8
ZERO_TOL = 1e-12
AGREE_RTOL = 1e-10
SCALE = dict(n=30, d=3, seed=1)
SCALE_P = 4
SCALE_CAP = 26
SUITE_BUDGET_S = 15 * 60


def report(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def oracle_instances():
    """20 seeded 3-regular graphs, n in 6..16, p in 1..3, random angles."""
    sizes, depths = (6, 8, 10, 12, 14, 16), (1, 2, 3)
    out = []
    for i in range(20):
        n, p = sizes[i % len(sizes)], depths[i % len(depths)]
        out.append((random_regular(n, 3, seed=100 + i), Angles.random(p, seed=200 + i)))
    return out


@pytest.fixture(scope="module")
def instances():
    return oracle_instances()


@pytest.fixture(scope="module")
def scale_graph():
    return random_regular(**SCALE)


@pytest.fixture(scope="module")
def scale_angles():
    return Angles.random(SCALE_P, seed=0)


@pytest.fixture(scope="module")
def scale_runs(scale_graph, scale_angles, tmp_path_factory):
    """Unmerged and merged n=30, p=4 runs on a mixed backend at threshold 15.

    The unmerged run's timing records are written to CSV for the dispatch
    check, which must work from the file alone.
    """
    backend = MixedBackend(15, max_width=SCALE_CAP)
    runs = {}
    for merged in (False, True):
        t0 = time.perf_counter()
        res = energy_expectation(scale_graph, scale_angles, backend, merged=merged,
                                 ordering="rgreedy")
        runs[merged] = (res, time.perf_counter() - t0)
    csv_path = tmp_path_factory.mktemp("scale") / "timing.csv"
    write_timing_csv(runs[False][0].records, csv_path)
    return runs, csv_path


def test_c01_oracle_equivalence(instances):
    t0 = time.perf_counter()
    worst = 0.0
    for g, angles in instances:
        tn = energy_expectation(g, angles, MatmulBackend()).energy
        worst = max(worst, abs(tn - oracle_energy(g, angles)))
    elapsed = time.perf_counter() - t0
    ok = worst <= ORACLE_TOL
    report(1, ok, f"max |tn - sv| = {worst:.2e} over {len(instances)} graphs "
                  f"(tol {ORACLE_TOL:g}, {elapsed:.1f} s)")
    assert ok


def test_c02_zero_angles(instances):
    worst = 0.0
    graphs = [g for g, _ in instances] + [random_regular(**SCALE)]
    for g in graphs:
        for p in (1, 2):
            res = energy_expectation(g, Angles.zeros(p), NaiveBackend(max_width=SCALE_CAP),
                                     ordering="rgreedy")
            worst = max(worst, abs(res.energy - g.m / 2))
    ok = worst <= ZERO_TOL
    report(2, ok, f"max |E - |E|/2| = {worst:.2e} over {len(graphs)} graphs (tol {ZERO_TOL:g})")
    assert ok


def test_c03_backend_schedule_equivalence(instances):
    backends = [NaiveBackend(), MatmulBackend(), MixedBackend(1), MixedBackend(15),
                MixedBackend(40)]
    worst = 0.0
    for g, angles in instances:
        values = [energy_expectation(g, angles, b, merged=m).energy
                  for b in backends for m in (False, True)]
        ref = values[0]
        worst = max(worst, max(abs(v - ref) / abs(ref) for v in values))
    ok = worst <= AGREE_RTOL
    report(3, ok, f"max relative spread = {worst:.2e} over {len(instances)} graphs x "
                  f"{2 * len(backends)} configurations (tol {AGREE_RTOL:g})")
    assert ok


def test_c04_dispatch_soundness(scale_runs):
    _, csv_path = scale_runs
    records = read_timing_csv(csv_path)
    bad = [r for r in records if (r.width > 15) != (r.backend == "matmul")]
    high = sum(r.width > 15 for r in records)
    ok = not bad and high > 0 and len(records) > 0
    report(4, ok, f"{len(records)} records from CSV, {high} above threshold 15, "
                  f"{len(bad)} violations")
    assert ok


def test_c05_accounting():
    (matmul,) = bench_matmul([465], check=False, repeats=3)
    (expr,) = bench_tncontract_random([], expressions=["caedb,eab→cde"])
    checks = {
        "matmul 465 ops": (matmul.ops, 465 ** 3),
        "expression ops": (expr.ops, 32),
        "expression ops (direct)": (expression_ops("caedb,eab->cde"), 32),
        "width-27 bytes": (tensor_bytes(27), 2 ** 31),
    }
    bad = {k: v for k, v in checks.items() if v[0] != v[1]}
    ok = not bad
    report(5, ok, f"ops(465)={matmul.ops}, ops(expr)={expr.ops}, "
                  f"bytes(27)={tensor_bytes(27)}" + (f"; mismatches {bad}" if bad else ""))
    assert ok


def test_c06_scale_run(scale_runs, scale_graph, scale_angles):
    runs, _ = scale_runs
    res, elapsed = runs[False]
    # plain greedy on this seed needs a wider intermediate than the cap:
    # it must be refused up front, not crash mid-contraction
    try:
        energy_expectation(scale_graph, scale_angles, NaiveBackend(max_width=SCALE_CAP))
        refusal = "greedy order also fit"
    except ResourceLimitError as exc:
        refusal = f"greedy refused cleanly ({exc})"
    ok = np.isfinite(res.energy) and res.max_result_width <= SCALE_CAP
    report(6, ok, f"n=30 p=4 energy {res.energy:.10f}, max result width "
                  f"{res.max_result_width} <= cap {SCALE_CAP}, {elapsed:.1f} s; {refusal}")
    assert ok


def test_c07_crossover():
    t0 = time.perf_counter()
    cal = calibrate(NaiveBackend(), MatmulBackend(), repeats=5)
    widths = cal.widths()
    wide = [w for w in widths if w >= 22]
    narrow = [w for w in widths if w <= 6]
    wide_ok = bool(wide) and all(cal.high_times[w] < cal.low_times[w] for w in wide)
    narrow_ok = bool(narrow) and all(cal.high_times[w] > cal.low_times[w] for w in narrow)
    range_ok = 4 <= cal.threshold <= 30
    ok = wide_ok and narrow_ok and range_ok
    ratio = {w: round(cal.low_times[w] / cal.high_times[w], 2) for w in widths}
    report(7, ok, f"threshold {cal.threshold} (crossover {cal.crossover}); matmul faster at "
                  f"widths {wide}: {wide_ok}; slower at {narrow}: {narrow_ok}; "
                  f"naive/matmul ratios {ratio}; {time.perf_counter() - t0:.1f} s")
    assert ok


def test_c08_width_histogram(scale_graph, scale_angles):
    from qaoa_tn.engine import plan
    hist = {}
    for _, _, sched in plan(scale_graph, scale_angles, ordering="rgreedy"):
        for w, c in width_histogram(sched).items():
            hist[w] = hist.get(w, 0) + c
    total = sum(hist.values())
    small = sum(c for w, c in hist.items() if w <= 6)
    frac = small / total
    ok = frac >= 0.6
    report(8, ok, f"{small}/{total} = {frac:.3f} of non-empty buckets have width <= 6 "
                  f"(required >= 0.60)")
    assert ok


def test_c09_merge_effectiveness(scale_runs):
    runs, _ = scale_runs
    (plain, t_plain), (merged, t_merged) = runs[False], runs[True]
    rel = abs(merged.energy - plain.energy) / abs(plain.energy)
    ok = merged.n_buckets < plain.n_buckets and rel <= AGREE_RTOL
    report(9, ok, f"buckets {plain.n_buckets} -> {merged.n_buckets}, relative energy "
                  f"difference {rel:.1e} (tol {AGREE_RTOL:g}); {t_plain:.1f} s -> {t_merged:.1f} s")
    assert ok


def test_c10_suite_time():
    # conftest moves this test to the end of the session
    elapsed = time.perf_counter() - conftest.SESSION_START
    ok = elapsed < SUITE_BUDGET_S
    report(10, ok, f"whole suite up to here ran in {elapsed:.1f} s on CPU "
                   f"(budget {SUITE_BUDGET_S} s)")
    assert ok
