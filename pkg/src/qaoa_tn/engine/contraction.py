"""Bucket elimination over a schedule, plus the merged-index pre-pass."""

from __future__ import annotations

import time
from collections import Counter

import numpy as np

from ..errors import InvalidInputError, ResourceLimitError, ScheduleError
from ..ordering import ORDERINGS, Bucket, Schedule, assign_buckets, contraction_varsets
from ..tensornet import line_graph
from .backends import Backend, tensor_bytes
from .instrument import ContractionReport, TimingRecord


def contract_bucket(bucket: Bucket, backend: Backend):
    return backend.contract(bucket)


def make_schedule(net, merged=False, ordering="greedy", merge_rule="subset",
                  **order_kw) -> Schedule:
    """Elimination order, bucket assignment and (optionally) index merging.

    ``ordering`` names an entry of :data:`qaoa_tn.ordering.ORDERINGS`;
    extra keywords (``trials``, ``seed``) go to the ordering function.
    ``merge_rule`` is passed to :func:`merge_buckets`.
    """
    try:
        order_fn = ORDERINGS[ordering]
    except KeyError:
        raise InvalidInputError(
            f"unknown ordering {ordering!r}; choose from {sorted(ORDERINGS)}") from None
    sched = assign_buckets(net, order_fn(line_graph(net), **order_kw))
    return merge_buckets(sched, merge_rule) if merged else sched


def max_result_width(schedule: Schedule) -> int:
    """Largest bucket result rank the schedule will produce."""
    return max((len(vs.difference(b.sum_vars))
                for vs, b in zip(contraction_varsets(schedule), schedule.buckets) if vs),
               default=0)


def check_width_cap(schedule: Schedule, max_width: int, what="network"):
    """Refuse a schedule up front instead of failing midway through it."""
    width = max_result_width(schedule)
    if width > max_width:
        raise ResourceLimitError(
            f"{what}: schedule needs a width-{width} result tensor, cap is {max_width}",
            width=width)


def contract_network(net, schedule: Schedule, backend: Backend, edge=(-1, -1)) -> ContractionReport:
    """Contract ``net`` bucket by bucket following ``schedule``.

    Each bucket result joins the bucket of its earliest remaining variable;
    rank-0 results multiply into the running scalar. One timing record is
    kept per non-empty bucket.
    """
    pos = schedule.position()
    pending = [list(b.tensors) for b in schedule.buckets]
    dtype = net.tensors[0].data.dtype if net.tensors else np.complex128
    live = Counter(v for b in pending for t in b for v in t.vars)
    scalar = np.ones((), dtype=dtype)
    records = []
    max_out = 0
    seq = 0
    for i, bucket in enumerate(schedule.buckets):
        tensors = pending[i]
        if not tensors:
            continue
        work = Bucket(bucket.sum_vars, tensors)
        inside = Counter(v for t in tensors for v in t.vars)
        for v in bucket.sum_vars:
            if live[v] != inside[v]:
                raise ScheduleError(
                    f"bucket {i} sums var {v} still referenced by "
                    f"{live[v] - inside[v]} tensor(s) outside it")
        width = len(inside)
        used = backend.select(width)
        t0 = time.perf_counter()
        result = backend.contract(work)
        elapsed = time.perf_counter() - t0
        records.append(TimingRecord(width, elapsed, used.name, tuple(edge), seq))
        seq += 1
        live.subtract(inside)
        pending[i] = []
        max_out = max(max_out, result.rank)
        if result.rank == 0:
            scalar = scalar * result.data
            continue
        live.update(result.vars)
        target = min(pos[v] for v in result.vars)
        if target <= i:
            raise ScheduleError(f"bucket {i} result routed backwards to bucket {target}")
        pending[target].append(result)
    leftover = [v for v, c in live.items() if c > 0]
    if leftover:
        raise ScheduleError(f"variables never summed: {sorted(leftover)[:10]}")
    return ContractionReport(
        value=complex(scalar),
        records=records,
        peak_bytes=tensor_bytes(max_out, dtype),
        max_result_width=max_out,
        n_buckets=len(records),
    )


MERGE_RULES = ("subset", "nested")


def merge_buckets(schedule: Schedule, rule: str = "subset") -> Schedule:
    """Fold buckets into the later bucket that receives their result.

    Bucket ``A``'s result goes to the bucket ``B`` of its earliest remaining
    variable; ``A`` (with anything already folded into it) then joins ``B``
    and the merged bucket sums both sets of variables in one step. Two
    rules decide when:

    ``"subset"`` (default)
        ``vars(A)`` is a subset of ``vars(B) | sum_vars(A)``, with both
        sides taken from the tensors listed in each bucket. Merged widths
        can exceed both constituents.
    ``"nested"``
        ``vars(B)`` is a subset of ``vars(A)``, with both sides taken at
        contraction time (routed results included). The merged bucket is
        then no wider than ``A``; at most one ``A`` is folded per ``B``.

    Every candidate is checked against the symbolic schedule; failures are
    counted in ``skipped_merges`` and left unmerged.
    """
    if rule not in MERGE_RULES:
        raise InvalidInputError(f"unknown merge rule {rule!r}; choose from {MERGE_RULES}")
    buckets = schedule.buckets
    varsets = contraction_varsets(schedule)
    pos = schedule.position()
    listed = [frozenset(v for t in b.tensors for v in t.vars) for b in buckets]
    # groups are keyed by their last member
    members = {i: [i] for i in range(len(buckets))}
    group_listed = dict(enumerate(listed))
    group_sums = {i: frozenset(b.sum_vars) for i, b in enumerate(buckets)}
    group_vars = dict(enumerate(varsets))
    absorbed, received = set(), set()
    skipped = 0
    for i in range(len(buckets)):
        out = varsets[i].difference(buckets[i].sum_vars)
        if not out:
            continue
        j = min(pos[v] for v in out)
        if rule == "subset":
            ok = bool(listed[j]) and group_listed[i] <= listed[j] | group_sums[i]
        else:
            ok = j not in received and varsets[j] <= group_vars[i]
        if not ok:
            continue
        if not _merge_is_valid(varsets, buckets, members[i], i, j):
            skipped += 1
            continue
        members[j] = members.pop(i) + members[j]
        group_listed[j] = group_listed[i] | listed[j]
        group_sums[j] = group_sums[i] | group_sums[j]
        group_vars[j] = group_vars[i] | varsets[j]
        absorbed.add(i)
        received.add(j)
    merged = []
    for j in range(len(buckets)):
        if j in absorbed:
            continue
        group = members[j]
        sum_vars = tuple(v for k in group for v in buckets[k].sum_vars)
        tensors = [t for k in group for t in buckets[k].tensors]
        merged.append(Bucket(sum_vars, tensors))
    out = Schedule(merged, schedule.order, merges=len(absorbed) + schedule.merges,
                   skipped_merges=skipped + schedule.skipped_merges)
    contraction_varsets(out)
    return out


def _merge_is_valid(varsets, buckets, group, i, j):
    """Moving group ``i`` to position ``j`` must not let its summed
    variables leak into buckets contracted in between."""
    moved = {v for k in group for v in buckets[k].sum_vars}
    return all(not (varsets[k] & moved) for k in range(i + 1, j))
