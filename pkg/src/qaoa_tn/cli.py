"""Command-line interface: ``qaoa-tn <command> [flags]`` or ``python -m qaoa_tn``.

Commands
--------
generate-graph   write a seeded random regular graph as JSON
energy           tensor-network MaxCut energy (optionally writes a timing CSV)
oracle-energy    the same energy from a full state vector (small graphs only)
calibrate        time naive vs matmul and print the mixed-backend threshold
bench            synthetic and circuit FLOPs benchmarks -> CSV / markdown
report           aggregate a timing CSV per backend and width
order-stats      bucket width histogram as ``width,count`` CSV

All randomness derives from the one ``--seed`` flag. The graph generator
uses it as is, so ``generate-graph --seed S`` and ``energy --seed S`` see
the same graph; random angles and benchmark operands use seeds derived
from it. The bucket-width cap defaults to ``$QAOA_TN_MAX_WIDTH`` when set.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
import zlib
from collections import Counter

import numpy as np

from . import bench, graphs
from .circuits import Angles
from .engine import (DEFAULT_MAX_WIDTH, MatmulBackend, MixedBackend, NaiveBackend,
                     aggregate_by_width, energy_expectation, get_backend, plan,
                     read_timing_csv, write_report_csv, write_timing_csv)
from .engine.calibrate import calibrate
from .engine.contraction import MERGE_RULES
from .errors import (CalibrationError, GenerationError, InvalidInputError,
                     NumericalIntegrityError, ResourceLimitError, ScheduleError)
from .ordering import ORDERINGS, width_histogram
from .statevector import DEFAULT_QUBIT_CAP, oracle_energy

MAX_WIDTH_ENV = "QAOA_TN_MAX_WIDTH"
ENERGY_PRECISIONS = ("complex128", "complex64")


def component_seed(seed: int, component: str) -> int:
    """Deterministic per-component seed derived from the global ``--seed``."""
    ss = np.random.SeedSequence([seed, zlib.crc32(component.encode())])
    return int(ss.generate_state(1)[0])


def _env_max_width() -> int:
    raw = os.environ.get(MAX_WIDTH_ENV)
    if raw is None:
        return DEFAULT_MAX_WIDTH
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"{MAX_WIDTH_ENV}={raw!r} is not an integer") from None


def _threshold(text: str):
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if not 1 <= value <= 40:
        raise argparse.ArgumentTypeError(f"threshold must be in [1, 40], got {value}")
    return value


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# --- shared flag groups --------------------------------------------------------

def _add_graph_flags(p):
    g = p.add_argument_group("graph")
    g.add_argument("--graph", help="graph JSON file (from generate-graph)")
    g.add_argument("--n", type=int, help="vertices of a generated random regular graph")
    g.add_argument("--d", type=int, default=3, help="degree of the generated graph (default 3)")
    g.add_argument("--seed", type=int, default=0, help="global seed (default 0)")


def _add_angle_flags(p):
    a = p.add_argument_group("angles")
    a.add_argument("--p", type=int, help="QAOA depth; random seeded angles if none are given")
    a.add_argument("--gammas", help="comma-separated gamma angles (radians)")
    a.add_argument("--betas", help="comma-separated beta angles (radians)")
    a.add_argument("--angles", help='JSON {"gammas": [...], "betas": [...]} or a path to one')


def _add_engine_flags(p, backend=True, precision=True):
    e = p.add_argument_group("engine")
    if backend:
        e.add_argument("--backend", default="naive",
                       help="naive, matmul, mixed or mixed(N) (default naive)")
        e.add_argument("--threshold", type=_threshold,
                       help="mixed-backend width threshold: integer in [1, 40] or 'auto'")
    e.add_argument("--merged", action="store_true", help="merge nested buckets before contracting")
    e.add_argument("--merge-rule", default="subset", choices=MERGE_RULES,
                   help="bucket merge rule used with --merged (default subset)")
    e.add_argument("--ordering", default="greedy", choices=sorted(ORDERINGS),
                   help="elimination ordering heuristic (default greedy)")
    e.add_argument("--max-width", type=int, default=None,
                   help=f"bucket result width cap (default ${MAX_WIDTH_ENV} or {DEFAULT_MAX_WIDTH})")
    if precision:
        e.add_argument("--precision", default="complex128", choices=ENERGY_PRECISIONS)


def _load_graph(args) -> graphs.Graph:
    if args.graph and args.n is not None:
        raise InvalidInputError("give either --graph or --n/--d, not both")
    if args.graph:
        return graphs.load(args.graph)
    if args.n is None:
        raise InvalidInputError("a graph is required: --graph FILE or --n N [--d D]")
    return graphs.random_regular(args.n, args.d, seed=args.seed)


def _load_angles(args) -> Angles:
    explicit = args.gammas is not None or args.betas is not None
    if explicit and args.angles:
        raise InvalidInputError("give either --gammas/--betas or --angles, not both")
    if explicit:
        if args.gammas is None or args.betas is None:
            raise InvalidInputError("--gammas and --betas must be given together")
        angles = Angles.from_strings(args.gammas, args.betas)
    elif args.angles:
        text = args.angles
        if not text.lstrip().startswith("{"):
            with open(text) as fh:
                text = fh.read()
        angles = Angles.from_json(text)
    elif args.p is not None:
        angles = Angles.random(args.p, seed=component_seed(args.seed, "angles"))
    else:
        raise InvalidInputError("angles are required: --gammas/--betas, --angles or --p")
    if args.p is not None and args.p != angles.p:
        raise InvalidInputError(f"--p {args.p} does not match {angles.p} angle pair(s)")
    return angles


def _max_width(args) -> int:
    return args.max_width if args.max_width is not None else _env_max_width()


def _make_backend(args, max_width):
    if args.threshold is None:
        return get_backend(args.backend, max_width=max_width)
    if args.backend != "mixed":
        raise InvalidInputError("--threshold only applies to --backend mixed")
    threshold = args.threshold
    if threshold == "auto":
        cal = calibrate(NaiveBackend(max_width), MatmulBackend(max_width))
        threshold = cal.threshold
        print(f"calibrated threshold: {threshold}", file=sys.stderr)
    return MixedBackend(threshold, max_width=max_width)


# --- commands ------------------------------------------------------------------

def cmd_generate_graph(args):
    g = graphs.random_regular(args.n, args.d, seed=args.seed)
    if args.out:
        graphs.save(g, args.out)
    else:
        sys.stdout.write(graphs.dumps(g))
    return 0


def cmd_energy(args):
    g, angles = _load_graph(args), _load_angles(args)
    max_width = _max_width(args)
    backend = _make_backend(args, max_width)
    res = energy_expectation(g, angles, backend, merged=args.merged, jobs=args.jobs,
                             dtype=np.dtype(args.precision).type, ordering=args.ordering,
                             merge_rule=args.merge_rule)
    print(f"{res.energy:.12g}")
    if args.timing_csv:
        write_timing_csv(res.records, args.timing_csv)
    if args.verbose:
        print(f"buckets={res.n_buckets} max_result_width={res.max_result_width} "
              f"peak_bytes={res.peak_bytes} backend={backend.name}", file=sys.stderr)
    return 0


def cmd_oracle_energy(args):
    g, angles = _load_graph(args), _load_angles(args)
    print(f"{oracle_energy(g, angles, cap=args.qubit_cap):.12g}")
    return 0


def cmd_calibrate(args):
    max_width = _max_width(args)
    low = get_backend(args.low, max_width=max_width)
    high = get_backend(args.high, max_width=max_width)
    cal = calibrate(low, high, max_width=args.trial_width, repeats=args.repeats)
    print(cal.threshold)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(f"width,{low.name}_s,{high.name}_s\n")
            for w in cal.widths():
                fh.write(f"{w},{cal.low_times[w]!r},{cal.high_times[w]!r}\n")
    if args.verbose:
        print(f"crossover={cal.crossover} fell_back={cal.fell_back}", file=sys.stderr)
    return 0


def cmd_bench(args):
    max_width = _max_width(args)
    backends = [get_backend(name, max_width=max_width) for name in args.backends.split(",")]
    precisions = args.precision.split(",")
    for prec in precisions:
        bench.flop_factor(prec)
    tiers = args.tier.split(",")
    unknown = set(tiers) - {"matmul", "fixed", "random", "circuit", "all"}
    if unknown:
        raise InvalidInputError(f"unknown tier(s) {sorted(unknown)}")
    if "all" in tiers:
        tiers = ["matmul", "fixed", "random", "circuit"]
    seed = component_seed(args.seed, "bench")
    results = []
    for backend in backends:
        for prec in precisions:
            common = dict(precision=prec, backend=backend, repeats=args.repeats, seed=seed,
                          check=not args.no_check)
            if "matmul" in tiers:
                results += bench.bench_matmul(args.sizes, max_size=args.max_matmul, **common)
            if "fixed" in tiers:
                results += bench.bench_tncontract_fixed(args.fixed_sizes, max_size=args.max_fixed,
                                                        **common)
            if "random" in tiers:
                results += bench.bench_tncontract_random(args.ks, max_k=args.max_k,
                                                         expressions=args.expression, **common)
            if "circuit" in tiers and prec.startswith("complex"):
                g, angles = _load_graph(args), _load_angles(args)
                if args.parallel:
                    warnings.warn("--parallel: circuit timings are for correctness runs only")
                for merged in (False, True):
                    results += bench.bench_from_circuit(
                        g, angles, backend, merged=merged, precision=prec, repeats=args.repeats,
                        ordering=args.ordering, jobs=os.cpu_count() if args.parallel else 1)
    if args.out:
        bench.write_bench_csv(results, args.out)
    else:
        bench.write_bench_csv(results, sys.stdout)
    if args.markdown:
        with open(args.markdown, "w") as fh:
            fh.write(bench.markdown_summary(results))
    return 0


def cmd_report(args):
    rows = aggregate_by_width(read_timing_csv(args.timing_csv))
    if args.out:
        write_report_csv(rows, args.out)
    else:
        write_report_csv(rows, sys.stdout)
    return 0


def cmd_order_stats(args):
    g, angles = _load_graph(args), _load_angles(args)
    counts = Counter()
    for _, _, sched in plan(g, angles, merged=args.merged, ordering=args.ordering,
                              merge_rule=args.merge_rule):
        counts.update(width_histogram(sched))
    lines = ["width,count"] + [f"{w},{c}" for w, c in sorted(counts.items())]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaoa-tn",
                                     description="Tensor-network QAOA MaxCut energies and benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("generate-graph", help="write a random regular graph as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_generate_graph)

    p = sub.add_parser("energy", help="tensor-network MaxCut energy")
    _add_graph_flags(p)
    _add_angle_flags(p)
    _add_engine_flags(p)
    p.add_argument("--jobs", type=int, default=1, help="parallel lightcone workers (default 1)")
    p.add_argument("--timing-csv", help="write one timing row per bucket here")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("oracle-energy", help="state-vector reference energy")
    _add_graph_flags(p)
    _add_angle_flags(p)
    p.add_argument("--qubit-cap", type=int, default=DEFAULT_QUBIT_CAP)
    p.set_defaults(func=cmd_oracle_energy)

    p = sub.add_parser("calibrate", help="pick the mixed-backend threshold")
    p.add_argument("--low", default="naive")
    p.add_argument("--high", default="matmul")
    p.add_argument("--trial-width", type=int, default=24,
                   help="widest synthetic bucket timed (default 24)")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--max-width", type=int, default=None)
    p.add_argument("--csv", help="write per-width median times here")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("bench", help="FLOPs benchmarks")
    p.add_argument("--tier", default="matmul,fixed,random",
                   help="comma list of matmul, fixed, random, circuit, all")
    p.add_argument("--backends", default="naive,matmul")
    p.add_argument("--precision", default="complex128",
                   help=f"comma list of {', '.join(bench.PRECISIONS)}")
    p.add_argument("--sizes", type=_int_list, default=[16, 64, 256, 465, 1024])
    p.add_argument("--fixed-sizes", type=_int_list, default=[10, 20, 30, 40])
    p.add_argument("--ks", type=_int_list, default=list(range(4, 21, 2)))
    p.add_argument("--expression", action="append", help="extra fixed expression, e.g. caedb,eab->cde")
    p.add_argument("--max-matmul", type=int, default=bench.MAX_MATMUL)
    p.add_argument("--max-fixed", type=int, default=bench.MAX_FIXED)
    p.add_argument("--max-k", type=int, default=bench.MAX_RANDOM_K)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--no-check", action="store_true", help="skip the oracle spot checks")
    p.add_argument("--parallel", action="store_true",
                   help="contract circuit lightcones in parallel (correctness runs only)")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--markdown", help="write a markdown summary table here")
    _add_graph_flags(p)
    _add_angle_flags(p)
    _add_engine_flags(p, backend=False, precision=False)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="aggregate a timing CSV per backend and width")
    p.add_argument("timing_csv")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("order-stats", help="bucket width histogram")
    _add_graph_flags(p)
    _add_angle_flags(p)
    p.add_argument("--merged", action="store_true")
    p.add_argument("--merge-rule", default="subset", choices=MERGE_RULES)
    p.add_argument("--ordering", default="greedy", choices=sorted(ORDERINGS))
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_order_stats)
    return parser


_EXPECTED = (InvalidInputError, ResourceLimitError, GenerationError, ScheduleError,
             CalibrationError, NumericalIntegrityError, OSError, ValueError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _EXPECTED as exc:
        print(f"qaoa-tn {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
