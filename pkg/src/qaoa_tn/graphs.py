"""MaxCut problem instances: graphs, random regular generation, lightcones."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import GenerationError, InvalidInputError

MAX_RESTARTS = 10_000


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Edges are stored as ``(u, v)`` pairs with ``u < v``, sorted
    lexicographically. Pairs given in either orientation are normalized.
    """

    n: int
    edges: tuple

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInputError(f"vertex count must be >= 0, got {self.n}")
        norm = []
        for pair in self.edges:
            u, v = (int(x) for x in pair)
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.n:
                raise InvalidInputError(f"edge ({u}, {v}) outside [0, {self.n})")
            norm.append((u, v))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise InvalidInputError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def has_edge(self, u, v) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in set(self.edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        try:
            return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed graph document: {exc}") from exc


def dumps(g: Graph) -> str:
    return json.dumps(g.to_dict()) + "\n"


def loads(text: str) -> Graph:
    return Graph.from_dict(json.loads(text))


def save(g: Graph, path) -> None:
    Path(path).write_text(dumps(g))


def load(path) -> Graph:
    return loads(Path(path).read_text())


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def random_regular(n: int, d: int, seed: int = 0) -> Graph:
    """Sample a simple ``d``-regular graph on ``n`` vertices.

    Uses the pairing (configuration) model: ``d`` stubs per vertex are
    shuffled and paired; any loop or repeated pair discards the whole
    pairing and a new one is drawn.

    Raises
    ------
    InvalidInputError
        If ``n*d`` is odd or ``d >= n``.
    GenerationError
        If no simple pairing is found within ``MAX_RESTARTS`` draws.
    """
    if n <= 0 or d < 0:
        raise InvalidInputError(f"need n > 0 and d >= 0, got n={n}, d={d}")
    if (n * d) % 2:
        raise InvalidInputError(f"n*d must be even, got n={n}, d={d}")
    if d >= n:
        raise InvalidInputError(f"degree {d} must be < n={n}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(MAX_RESTARTS):
        perm = rng.permutation(stubs).reshape(-1, 2)
        lo = perm.min(axis=1)
        hi = perm.max(axis=1)
        if np.any(lo == hi):
            continue
        pairs = set(zip(lo.tolist(), hi.tolist()))
        if len(pairs) != len(lo):
            continue
        return Graph(n, tuple(pairs))
    raise GenerationError(
        f"no simple {d}-regular graph on {n} vertices after {MAX_RESTARTS} restarts")


def maxcut_value(g: Graph, assignment) -> int:
    """Number of edges whose endpoints get different bits."""
    bits = [int(b) for b in assignment]
    if len(bits) != g.n:
        raise InvalidInputError(
            f"assignment has length {len(bits)}, graph has {g.n} vertices")
    return sum(1 for u, v in g.edges if bits[u] != bits[v])


def brute_force_maxcut(g: Graph) -> int:
    best = 0
    for z in range(2 ** g.n):
        bits = [(z >> (g.n - 1 - i)) & 1 for i in range(g.n)]
        best = max(best, maxcut_value(g, bits))
    return best


def distances_from(g: Graph, sources) -> list:
    """BFS hop distance from the nearest source; ``None`` if unreachable."""
    adj = g.adjacency()
    dist = [None] * g.n
    queue = deque()
    for s in sources:
        dist[s] = 0
        queue.append(s)
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if dist[y] is None:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


class Lightcone(NamedTuple):
    graph: Graph
    mapping: dict
    edge: tuple


def lightcone(g: Graph, edge, p: int) -> Lightcone:
    """Subgraph that a depth-``p`` ZZ term on ``edge`` can see.

    Keeps every edge with at least one endpoint within distance ``p - 1``
    of the target edge's endpoints, then relabels the touched vertices to
    ``0..k-1`` in ascending order of their original ids.
    """
    u, v = sorted(int(x) for x in edge)
    if not g.has_edge(u, v):
        raise InvalidInputError(f"edge ({u}, {v}) not in graph")
    if p < 1:
        raise InvalidInputError(f"depth p must be >= 1, got {p}")
    dist = distances_from(g, (u, v))
    inner = {x for x, dx in enumerate(dist) if dx is not None and dx <= p - 1}
    kept = [e for e in g.edges if e[0] in inner or e[1] in inner]
    verts = sorted({x for e in kept for x in e})
    mapping = {old: new for new, old in enumerate(verts)}
    sub = Graph(len(verts), tuple((mapping[a], mapping[b]) for a, b in kept))
    return Lightcone(sub, mapping, (mapping[u], mapping[v]))
