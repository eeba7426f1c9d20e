"""Elimination orders and bucket schedules for bucket elimination."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .errors import InvalidInputError, ScheduleError


@dataclass
class EliminationOrder:
    order: list
    predicted_widths: list

    @property
    def max_width(self) -> int:
        return max(self.predicted_widths, default=0)


@dataclass
class Bucket:
    """Tensors to be summed over ``sum_vars`` in one contraction step."""

    sum_vars: tuple
    tensors: list = field(default_factory=list)

    def variables(self) -> set:
        return {v for t in self.tensors for v in t.vars}

    @property
    def width(self) -> int:
        return len(self.variables())


@dataclass
class Schedule:
    """Buckets in contraction order.

    ``merges`` counts buckets folded into a later one by
    :func:`qaoa_tn.engine.merge_buckets`; ``skipped_merges`` counts
    candidates rejected by the validity check.
    """

    buckets: list
    order: EliminationOrder = None
    merges: int = 0
    skipped_merges: int = 0

    def __len__(self):
        return len(self.buckets)

    def position(self) -> dict:
        """Map each summed variable to the index of its bucket."""
        return {v: i for i, b in enumerate(self.buckets) for v in b.sum_vars}


def greedy_order(adj: dict) -> EliminationOrder:
    """Greedy minimum-degree elimination order.

    At each step the node of smallest current degree is eliminated (ties go
    to the smallest id); its neighbours are joined into a clique. The step
    width is the size of the eliminated node's closed neighbourhood.
    """
    graph = {v: set(nb) for v, nb in adj.items()}
    order, widths = [], []
    while graph:
        v = min(graph, key=lambda x: (len(graph[x]), x))
        nbrs = graph.pop(v)
        order.append(v)
        widths.append(len(nbrs) + 1)
        for a in nbrs:
            graph[a].discard(v)
            graph[a].update(b for b in nbrs if b != a)
    return EliminationOrder(order, widths)


def _random_min_degree(adj: dict, rng) -> EliminationOrder:
    graph = {v: set(nb) for v, nb in adj.items()}
    order, widths = [], []
    while graph:
        low = min(len(nb) for nb in graph.values())
        v = rng.choice(sorted(x for x, nb in graph.items() if len(nb) == low))
        nbrs = graph.pop(v)
        order.append(v)
        widths.append(len(nbrs) + 1)
        for a in nbrs:
            graph[a].discard(v)
            graph[a].update(b for b in nbrs if b != a)
    return EliminationOrder(order, widths)


def order_cost(elim: EliminationOrder) -> tuple:
    """Sort key: peak width first, then total work ``sum(2**w)``."""
    return elim.max_width, sum(2 ** w for w in elim.predicted_widths)


def best_greedy_order(adj: dict, trials: int = 10, seed: int = 0) -> EliminationOrder:
    """Deterministic min-degree plus ``trials`` random-tie restarts.

    Returns the cheapest by :func:`order_cost`. The deterministic order is
    always a candidate, so this never does worse than :func:`greedy_order`.
    """
    rng = random.Random(seed)
    best = greedy_order(adj)
    for _ in range(trials):
        cand = _random_min_degree(adj, rng)
        if order_cost(cand) < order_cost(best):
            best = cand
    return best


ORDERINGS = {"greedy": greedy_order, "rgreedy": best_greedy_order}


def assign_buckets(net, elim: EliminationOrder) -> Schedule:
    """Place every tensor in the bucket of its earliest-eliminated variable."""
    pos = {v: i for i, v in enumerate(elim.order)}
    missing = [v for v in net.summed_vars() if v not in pos]
    if missing:
        raise InvalidInputError(f"variables missing from elimination order: {missing[:10]}")
    buckets = [Bucket((v,)) for v in elim.order]
    for t in net.tensors:
        if not t.vars:
            raise InvalidInputError(f"scalar tensor {t.label!r} has no bucket")
        first = min(pos[v] for v in t.vars)
        buckets[first].tensors.append(t)
    return Schedule(buckets, elim)


def contraction_varsets(schedule: Schedule, check=True) -> list:
    """Variable set of each bucket at the moment it is contracted.

    Runs bucket elimination on index sets only. Result index sets are routed
    to the bucket of their earliest remaining variable, exactly as the
    numeric contraction does. With ``check`` set, raises
    :class:`ScheduleError` if a bucket's summed variable is still referenced
    by a tensor outside that bucket.
    """
    pos = schedule.position()
    pending = [[frozenset(t.vars) for t in b.tensors] for b in schedule.buckets]
    live = Counter(v for sets in pending for s in sets for v in s)
    result = []
    for i, bucket in enumerate(schedule.buckets):
        sets = pending[i]
        if not sets:
            result.append(frozenset())
            continue
        varset = frozenset().union(*sets)
        if check:
            inside = Counter(v for s in sets for v in s)
            for v in bucket.sum_vars:
                if live[v] != inside[v]:
                    raise ScheduleError(
                        f"bucket {i} sums var {v} still used by "
                        f"{live[v] - inside[v]} outside tensor(s)")
        for s in sets:
            live.subtract(s)
        out = varset.difference(bucket.sum_vars)
        result.append(varset)
        if out:
            live.update(out)
            target = min(pos[v] for v in out)
            if target <= i:
                raise ScheduleError(f"bucket {i} routes its result backwards to {target}")
            pending[target].append(out)
    return result


def width_histogram(schedule: Schedule) -> dict:
    """Count of non-empty buckets per contraction-time width."""
    counts = Counter(len(s) for s in contraction_varsets(schedule, check=False) if s)
    return dict(sorted(counts.items()))
