"""Synthetic and circuit-derived FLOPs benchmarks.

Tiers, from simplest to most realistic:

``matmul``
    Square matrix product, ``ops = n**3``.
``tncontract_fixed``
    The expression ``abcd,bcdf->acf`` with every index of size ``n``;
    five distinct indices, so ``ops = n**5``.
``tncontract_random``
    A random expression over ``k`` binary indices, ``ops = 2**k``.
``bucket_unmerged`` / ``bucket_merged`` / ``lightcone`` / ``circuit``
    Rows taken from the timing records of a real energy calculation.

FLOPs are ``8 * ops / seconds`` for complex precisions (a complex
multiply-add is 8 real flops) and ``2 * ops / seconds`` for real ones.
Every timing is the median of ``repeats >= 3`` runs after one discarded
warm-up run.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import statistics
import string
import time
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .circuits import Angles
from .engine import Backend, energy_expectation
from .errors import InvalidInputError, NumericalIntegrityError
from .graphs import Graph

PRECISIONS = {
    "real32": np.float32,
    "real64": np.float64,
    "complex64": np.complex64,
    "complex128": np.complex128,
}
BENCH_FIELDS = ["task", "kind", "param", "precision", "backend", "ops", "mean_s", "flops"]
KINDS = ("matmul", "tncontract_fixed", "tncontract_random",
         "bucket_unmerged", "bucket_merged", "lightcone", "circuit")

FIXED_EXPRESSION = "abcd,bcdf->acf"
MAX_MATMUL = 2048
MAX_FIXED = 60
MAX_RANDOM_K = 25
DEFAULT_BUDGET = 2 ** 30  # bytes of operands + result per task
LIGHTCONE_TARGET_OPS = 1e8


def flop_factor(precision: str) -> int:
    if precision not in PRECISIONS:
        raise InvalidInputError(f"unknown precision {precision!r}; choose from {sorted(PRECISIONS)}")
    return 8 if precision.startswith("complex") else 2


@dataclass
class BenchResult:
    """One benchmark row. ``mean_s`` holds the median repetition time;
    skipped tasks keep ``mean_s = flops = None`` and a ``note``."""

    task: str
    kind: str
    param: str
    precision: str
    backend: str
    ops: int
    mean_s: float = None
    flops: float = None
    note: str = ""

    @property
    def skipped(self) -> bool:
        return self.mean_s is None

    def row(self) -> dict:
        fmt = lambda x: "" if x is None else repr(float(x))
        return {"task": self.task, "kind": self.kind, "param": self.param,
                "precision": self.precision, "backend": self.backend, "ops": self.ops,
                "mean_s": fmt(self.mean_s), "flops": fmt(self.flops)}


def _result(task, kind, param, precision, backend, ops, seconds):
    seconds = max(float(seconds), 1e-9)
    return BenchResult(task, kind, str(param), precision, backend, int(ops),
                       seconds, flop_factor(precision) * ops / seconds)


def median_time(fn, repeats: int = 3) -> float:
    """Median of ``repeats`` calls to ``fn`` after one warm-up call."""
    if repeats < 3:
        raise InvalidInputError(f"repeats must be >= 3, got {repeats}")
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def random_array(shape, precision, rng) -> np.ndarray:
    dtype = PRECISIONS[precision]
    x = rng.standard_normal(shape)
    if np.issubdtype(dtype, np.complexfloating):
        x = x + 1j * rng.standard_normal(shape)
    return x.astype(dtype)


# --- expressions -----------------------------------------------------------

def parse_expression(expr: str):
    """Split ``"ab,bc->ac"`` (``→`` also accepted) into operand and output labels."""
    text = expr.replace(" ", "").replace("→", "->")
    if text.count("->") != 1:
        raise InvalidInputError(f"expression {expr!r} needs exactly one '->'")
    lhs, out = text.split("->")
    operands = lhs.split(",")
    if not all(operands) or any(not s.isalpha() for s in operands + [out] if s):
        raise InvalidInputError(f"expression {expr!r}: operands must be letter strings")
    seen = set("".join(operands))
    if not set(out) <= seen:
        raise InvalidInputError(f"expression {expr!r}: output index not in any operand")
    if any(len(set(s)) != len(s) for s in operands + [out]):
        raise InvalidInputError(f"expression {expr!r}: repeated index within an operand")
    return operands, out


def expression_ops(expr: str, dim: int = 2) -> int:
    """``dim ** (number of distinct indices)``."""
    operands, _ = parse_expression(expr)
    return dim ** len(set("".join(operands)))


def expression_shapes(expr: str, dim: int = 2):
    operands, out = parse_expression(expr)
    return [(dim,) * len(s) for s in operands], (dim,) * len(out)


def _expression_bytes(expr, dim, precision):
    ins, out = expression_shapes(expr, dim)
    item = np.dtype(PRECISIONS[precision]).itemsize
    return item * sum(math.prod(s) for s in ins + [out])


def contract_expression(expr: str, arrays, backend: Backend) -> np.ndarray:
    """Run ``expr`` through a backend's array-level contraction."""
    operands, out = parse_expression(expr)
    kept = set(out)
    summed = sorted(set("".join(operands)) - kept)
    return backend.contract_arrays(list(arrays), [tuple(s) for s in operands], summed, tuple(out))


def enumerate_expression(expr: str, arrays) -> np.ndarray:
    """Reference result by explicit loop over every index assignment."""
    operands, out = parse_expression(expr)
    labels = sorted(set("".join(operands)))
    dims = {}
    for s, a in zip(operands, arrays):
        dims.update(zip(s, a.shape))
    result = np.zeros([dims[c] for c in out], dtype=np.result_type(*arrays))
    for values in itertools.product(*(range(dims[c]) for c in labels)):
        at = dict(zip(labels, values))
        term = 1
        for s, a in zip(operands, arrays):
            term = term * a[tuple(at[c] for c in s)]
        result[tuple(at[c] for c in out)] += term
    return result


def random_expression(k: int, rng, n_operands: int = 2) -> str:
    """Random expression over ``k`` distinct indices.

    Each index lands in at least one operand (the union covers all ``k``);
    every operand is non-empty; the kept set is a random, possibly empty,
    subset.
    """
    if not 1 <= k <= 52:
        raise InvalidInputError(f"index count must be in [1, 52], got {k}")
    letters = (string.ascii_lowercase + string.ascii_uppercase)[:k]
    n_operands = max(1, min(n_operands, k))
    owners = [[] for _ in range(n_operands)]
    # one guaranteed index per operand, the rest scattered
    perm = rng.permutation(k)
    for slot, idx in enumerate(perm):
        owners[slot % n_operands if slot < n_operands else rng.integers(n_operands)].append(idx)
    for idx in range(k):
        for o in range(n_operands):
            if idx not in owners[o] and rng.random() < 0.3:
                owners[o].append(idx)
    operands = ["".join(letters[i] for i in sorted(o)) for o in owners]
    out = "".join(letters[i] for i in range(k) if rng.random() < 0.5)
    return ",".join(operands) + "->" + out


def _bench_expression(task, kind, param, expr, dim, precision, backend, repeats, rng,
                      check, budget):
    ops = expression_ops(expr, dim)
    need = _expression_bytes(expr, dim, precision)
    if need > budget:
        res = BenchResult(task, kind, str(param), precision, backend.name, ops)
        res.note = f"skipped: needs {need} bytes, budget {budget}"
        return res
    ins, _ = expression_shapes(expr, dim)
    arrays = [random_array(s, precision, rng) for s in ins]
    if check:
        got = contract_expression(expr, arrays, backend)
        want = enumerate_expression(expr, arrays)
        tol = 1e-3 if precision in ("real32", "complex64") else 1e-9
        scale = max(1.0, float(np.max(np.abs(want), initial=0.0)))
        if not np.allclose(got, want, rtol=tol, atol=tol * scale):
            raise NumericalIntegrityError(f"{kind} {expr}: backend disagrees with enumeration")
    seconds = median_time(lambda: contract_expression(expr, arrays, backend), repeats)
    return _result(task, kind, param, precision, backend.name, ops, seconds)


# --- synthetic tiers -------------------------------------------------------

def naive_matmul(a, b) -> np.ndarray:
    """Textbook triple loop; only for spot checks on small matrices."""
    n, m, q = a.shape[0], a.shape[1], b.shape[1]
    out = np.zeros((n, q), dtype=np.result_type(a, b))
    for i in range(n):
        for j in range(q):
            acc = 0
            for k in range(m):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def bench_matmul(sizes, precision="complex128", backend: Backend = None, repeats=3, seed=0,
                 max_size=MAX_MATMUL, budget=DEFAULT_BUDGET, check=True) -> list:
    """Square ``n x n`` products through ``backend``; ``ops = n**3``.

    Sizes above ``max_size`` or whose three matrices exceed ``budget``
    bytes come back as skipped rows. With ``check``, sizes up to 64 are
    compared against :func:`naive_matmul`.
    """
    backend = _default_backend(backend)
    rng = np.random.default_rng(seed)
    item = np.dtype(PRECISIONS[precision]).itemsize
    results = []
    for n in sizes:
        n = int(n)
        if n < 1:
            raise InvalidInputError(f"matrix size must be >= 1, got {n}")
        need = 3 * n * n * item
        if n > max_size or need > budget:
            results.append(BenchResult("synthetic", "matmul", str(n), precision, backend.name,
                                       n ** 3, note=f"skipped: n={n} over size/memory budget"))
            continue
        a, b = random_array((n, n), precision, rng), random_array((n, n), precision, rng)

        def run():
            return backend.contract_arrays([a, b], [(0, 1), (1, 2)], [1], (0, 2))

        if check and n <= 64:
            tol = 1e-3 if precision in ("real32", "complex64") else 1e-9
            if not np.allclose(run(), naive_matmul(a, b), rtol=tol, atol=tol * n):
                raise NumericalIntegrityError(f"matmul n={n}: backend disagrees with triple loop")
        results.append(_result("synthetic", "matmul", n, precision, backend.name, n ** 3,
                               median_time(run, repeats)))
    return results


def bench_tncontract_fixed(sizes, precision="complex128", backend: Backend = None, repeats=3,
                           seed=0, max_size=MAX_FIXED, budget=DEFAULT_BUDGET, check=True) -> list:
    """``abcd,bcdf->acf`` with all indices of size ``n``; ``ops = n**5``.

    With ``check``, sizes up to 4 are compared against explicit enumeration.
    """
    backend = _default_backend(backend)
    rng = np.random.default_rng(seed)
    results = []
    for n in sizes:
        n = int(n)
        if n > max_size:
            results.append(BenchResult("synthetic", "tncontract_fixed", str(n), precision,
                                       backend.name, n ** 5, note=f"skipped: n={n} > {max_size}"))
            continue
        results.append(_bench_expression("synthetic", "tncontract_fixed", n, FIXED_EXPRESSION, n,
                                         precision, backend, repeats, rng, check and n <= 4,
                                         budget))
    return results


def bench_tncontract_random(ks, precision="complex128", backend: Backend = None, repeats=3,
                            seed=0, max_k=MAX_RANDOM_K, budget=DEFAULT_BUDGET, check=True,
                            expressions=None) -> list:
    """Random binary-index expressions with ``k`` distinct indices; ``ops = 2**k``.

    Each ``k`` gets its own generator seeded from ``(seed, k)``, so a given
    ``k`` always yields the same expression and operands. Pass
    ``expressions`` to benchmark fixed strings instead. With ``check``,
    every ``k <= 16`` is compared against explicit enumeration.
    """
    backend = _default_backend(backend)
    results = []
    jobs = []
    for k in ks:
        k = int(k)
        if not 1 <= k <= max_k:
            results.append(BenchResult("synthetic", "tncontract_random", f"k={k}", precision,
                                       backend.name, 2 ** k, note=f"skipped: k={k} outside 1..{max_k}"))
            continue
        rng = np.random.default_rng([seed, k])
        jobs.append((random_expression(k, rng), rng))
    for expr in expressions or ():
        jobs.append((expr, np.random.default_rng(seed)))
    for expr, rng in jobs:
        k = len(set("".join(parse_expression(expr)[0])))
        results.append(_bench_expression("synthetic", "tncontract_random", expr, expr, 2,
                                         precision, backend, repeats, rng, check and k <= 16,
                                         budget))
    return results


# --- circuit tiers ---------------------------------------------------------

def bench_from_circuit(g: Graph, angles: Angles, backend: Backend, merged=False,
                       precision="complex128", repeats=3, ordering="greedy", jobs=1,
                       merge_rule="subset") -> list:
    """Bucket, lightcone and whole-circuit rows from a real energy run.

    The energy calculation is repeated ``repeats`` times after a warm-up;
    the run with the median wall time supplies the rows:

    * ``bucket_merged``/``bucket_unmerged``: the single bucket with the
      highest FLOPs;
    * ``lightcone``: the edge whose total ops are closest (in log scale) to
      ``1e8``;
    * ``circuit``: total ops of the whole run over its wall time.
    """
    if not precision.startswith("complex"):
        raise InvalidInputError("circuit benchmarks need a complex precision")
    dtype = PRECISIONS[precision]

    def run():
        t0 = time.perf_counter()
        res = energy_expectation(g, angles, backend, merged=merged, jobs=jobs, dtype=dtype,
                                 ordering=ordering, merge_rule=merge_rule)
        return time.perf_counter() - t0, res

    if repeats < 3:
        raise InvalidInputError(f"repeats must be >= 3, got {repeats}")
    run()
    runs = sorted((run() for _ in range(repeats)), key=lambda r: r[0])
    wall, res = runs[len(runs) // 2]
    name = backend.name
    task = "qaoa"
    param = f"n={g.n},p={angles.p}"

    best = max(res.records, key=lambda r: r.flops_est)
    kind = "bucket_merged" if merged else "bucket_unmerged"
    rows = [_result(task, kind, f"{param},width={best.width}", precision, name, best.ops,
                    best.elapsed)]

    per_edge = defaultdict(lambda: [0, 0.0])
    for rec in res.records:
        per_edge[rec.edge][0] += rec.ops
        per_edge[rec.edge][1] += rec.elapsed
    edge, (ops, secs) = min(per_edge.items(),
                            key=lambda kv: (abs(math.log10(kv[1][0]) - math.log10(LIGHTCONE_TARGET_OPS)),
                                            kv[0]))
    rows.append(_result(task, "lightcone", f"{param},edge={edge[0]}-{edge[1]}", precision, name,
                        ops, secs))
    total_ops = sum(r.ops for r in res.records)
    rows.append(_result(task, "circuit", param, precision, name, total_ops, wall))
    return rows


def _default_backend(backend):
    if backend is None:
        from .engine import NaiveBackend
        return NaiveBackend()
    return backend


# --- output ------------------------------------------------------------------

def write_bench_csv(results, path_or_file) -> None:
    def _write(fh):
        writer = csv.DictWriter(fh, BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for res in results:
            writer.writerow(res.row())

    if isinstance(path_or_file, io.TextIOBase):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)


def read_bench_csv(path) -> list:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        num = lambda s: float(s) if s else None
        out.append(BenchResult(r["task"], r["kind"], r["param"], r["precision"], r["backend"],
                               int(r["ops"]), num(r["mean_s"]), num(r["flops"])))
    return out


def markdown_summary(results) -> str:
    """One row per task kind; one column per backend with its peak GFLOP/s.

    Each cell also names the parameter and precision that reached the peak.
    Kinds with no completed runs are left out.
    """
    done = [r for r in results if not r.skipped]
    backends = sorted({r.backend for r in done})
    lines = ["| task | " + " | ".join(f"{b} GFLOP/s" for b in backends) + " |",
             "|---|" + "---|" * len(backends)]
    kinds = [k for k in KINDS if any(r.kind == k for r in done)]
    kinds += sorted({r.kind for r in done} - set(KINDS))
    for kind in kinds:
        cells = []
        for b in backends:
            mine = [r for r in done if r.kind == kind and r.backend == b]
            if not mine:
                cells.append("-")
                continue
            top = max(mine, key=lambda r: r.flops)
            cells.append(f"{top.flops / 1e9:.3g} ({top.param}, {top.precision})")
        lines.append(f"| {kind} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
