"""Metric graphs, problem instances and trees.

Vertices are dense integer ids ``0..n-1``. Weights are float64 and stored in
a read-only symmetric matrix.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DisconnectedInput,
    EmptySubset,
    EmptyTerminalSet,
    InfeasibleInstance,
    InvalidTree,
    VertexNotInTree,
)

DEFAULT_TOL = 1e-9

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class MetricGraph:
    """Complete graph given by a square weight matrix.

    Only the shape is checked on construction; use :func:`validate_metric`
    to check symmetry, non-negativity and the triangle inequality.
    """

    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight matrix must be square, got shape {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return self.w.shape[0]

    def weight(self, u: int, v: int) -> float:
        return float(self.w[u, v])

    def edges(self) -> list[tuple[int, int, float]]:
        """All ``n(n-1)/2`` edges as ``(u, v, weight)`` with ``u < v``."""
        return [(u, v, float(self.w[u, v]))
                for u in range(self.n) for v in range(u + 1, self.n)]

    def same_weights(self, other: MetricGraph) -> bool:
        return self.w.shape == other.w.shape and bool(np.array_equal(self.w, other.w))


@dataclass(frozen=True)
class WeightedRawGraph:
    """Possibly sparse, possibly non-metric edge list (ingestion form)."""

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v), float(x)) for u, v, x in self.edges)
        for u, v, x in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has endpoint out of range 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not math.isfinite(x) or x < 0:
                raise ValueError(f"edge ({u}, {v}) has invalid weight {x!r}")
        object.__setattr__(self, "edges", edges)

    def to_matrix(self) -> np.ndarray:
        """Dense matrix with ``inf`` for absent pairs; parallel edges keep the minimum."""
        d = np.full((self.n, self.n), np.inf)
        np.fill_diagonal(d, 0.0)
        for u, v, x in self.edges:
            if x < d[u, v]:
                d[u, v] = d[v, u] = x
        return d

    def missing_pairs(self) -> list[Edge]:
        d = self.to_matrix()
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                if not math.isfinite(d[u, v])]


@dataclass(frozen=True, eq=False)
class Instance:
    graph: MetricGraph
    terminals: frozenset[int]
    name: str = ""

    def __post_init__(self):
        terminals = frozenset(int(r) for r in self.terminals)
        object.__setattr__(self, "terminals", terminals)
        if not terminals:
            raise EmptyTerminalSet("terminal set R must be nonempty")
        bad = sorted(r for r in terminals if not 0 <= r < self.graph.n)
        if bad:
            raise ValueError(f"terminals {bad} out of range 0..{self.graph.n - 1}")
        if self.graph.n - len(terminals) < 2:
            raise InfeasibleInstance(
                f"|V \\ R| = {self.graph.n - len(terminals)}; at least 2 non-terminal "
                "vertices are required since every tree has two leaves")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def nonterminals(self) -> list[int]:
        return [v for v in range(self.n) if v not in self.terminals]

    def same_as(self, other: Instance) -> bool:
        return (self.name == other.name and self.terminals == other.terminals
                and self.graph.same_weights(other.graph))


@dataclass(frozen=True)
class Tree:
    """Connected acyclic edge set; a single vertex with no edges is allowed."""

    vertices: frozenset[int]
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        vertices = frozenset(int(v) for v in self.vertices)
        edges = frozenset(norm_edge(int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if not vertices:
            raise InvalidTree("tree has no vertices")
        for u, v in edges:
            if u == v:
                raise InvalidTree(f"self-loop at {u}")
            if u not in vertices or v not in vertices:
                raise InvalidTree(f"edge ({u}, {v}) leaves the vertex set")
        if len(edges) != len(vertices) - 1:
            raise InvalidTree(f"{len(edges)} edges on {len(vertices)} vertices")
        if len(_component(self.adjacency(), next(iter(vertices)))) != len(vertices):
            raise InvalidTree("edge set is not connected")

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], vertices: Iterable[int] = ()) -> Tree:
        edges = list(edges)
        vs = set(vertices)
        for u, v in edges:
            vs.update((u, v))
        return cls(frozenset(vs), frozenset(edges))

    @classmethod
    def from_path(cls, seq: Sequence[int]) -> Tree:
        return cls.from_edges(zip(seq, seq[1:]), seq)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def _component(adj: dict[int, list[int]], root: int) -> set[int]:
    seen = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        for x in adj[v]:
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return seen


class Violation(NamedTuple):
    """One failed metric invariant.

    ``kind`` is one of ``shape``, ``nonfinite``, ``negative``, ``diagonal``,
    ``asymmetric`` or ``triangle``. For ``triangle`` the vertices are
    ``(u, x, v)`` with ``w(u,v) > w(u,x) + w(x,v)`` and ``slack`` is the excess.
    """

    kind: str
    vertices: tuple[int, ...]
    slack: float


def validate_metric(g: MetricGraph, tol: float = DEFAULT_TOL) -> list[Violation]:
    w = g.w
    n = g.n
    out: list[Violation] = []
    finite = np.isfinite(w)
    for u, v in zip(*np.nonzero(~finite)):
        out.append(Violation("nonfinite", (int(u), int(v)), math.nan))
    for u, v in zip(*np.nonzero(finite & (w < 0))):
        out.append(Violation("negative", (int(u), int(v)), float(-w[u, v])))
    for u in np.nonzero(np.diag(w) != 0)[0]:
        out.append(Violation("diagonal", (int(u), int(u)), float(w[u, u])))
    iu, ju = np.triu_indices(n, 1)
    asym = w[iu, ju] != w[ju, iu]
    for u, v in zip(iu[asym], ju[asym]):
        out.append(Violation("asymmetric", (int(u), int(v)), float(abs(w[u, v] - w[v, u]))))
    if out:
        # triangle check is meaningless on a structurally broken matrix
        return out
    for x in range(n):
        via = w[:, x, None] + w[None, x, :]
        excess = w - via
        bad = excess > tol * np.maximum(w, via)
        bad[x, :] = False
        bad[:, x] = False
        for u, v in zip(*np.nonzero(np.triu(bad, 1))):
            out.append(Violation("triangle", (int(u), x, int(v)), float(excess[u, v])))
    out.sort(key=lambda viol: (viol.vertices[0], viol.vertices[-1], viol.vertices[1]))
    return out


def metric_closure(g: WeightedRawGraph) -> MetricGraph:
    """Complete graph of shortest-path distances in ``g``.

    Floyd-Warshall is repeated until a fixpoint so that the float result
    satisfies the triangle inequality without any tolerance.
    """
    d = g.to_matrix()
    while True:
        before = d.copy()
        for k in range(g.n):
            np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
        d = np.minimum(d, d.T)
        if np.array_equal(before, d):
            break
    if not np.all(np.isfinite(d)):
        u, v = (int(i) for i in np.argwhere(~np.isfinite(d))[0])
        raise DisconnectedInput(f"no path between vertices {u} and {v}")
    return MetricGraph(d)


def induced_subgraph(g: MetricGraph, U: Iterable[int]) -> tuple[MetricGraph, list[int]]:
    """``G[U]`` plus ``ids`` where local vertex ``i`` is ``ids[i]`` in ``g``."""
    ids = sorted(set(U))
    if not ids:
        raise EmptySubset("induced subgraph needs at least one vertex")
    if ids[0] < 0 or ids[-1] >= g.n:
        raise ValueError(f"subset {ids} not within 0..{g.n - 1}")
    idx = np.array(ids)
    return MetricGraph(g.w[np.ix_(idx, idx)]), ids


def tree_leaves(t: Tree) -> frozenset[int]:
    deg: dict[int, int] = defaultdict(int)
    for u, v in t.edges:
        deg[u] += 1
        deg[v] += 1
    return frozenset(v for v, d in deg.items() if d == 1)


def unique_path(t: Tree, a: int, b: int) -> list[int]:
    for x in (a, b):
        if x not in t.vertices:
            raise VertexNotInTree(f"vertex {x} is not in the tree")
    adj = t.adjacency()
    parent = {a: a}
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for x in adj[v]:
            if x not in parent:
                parent[x] = v
                stack.append(x)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def is_feasible_ismt(t: Tree, inst: Instance) -> bool:
    if not inst.terminals <= t.vertices:
        return False
    if any(not 0 <= v < inst.n for v in t.vertices):
        return False
    deg: dict[int, int] = defaultdict(int)
    for u, v in t.edges:
        deg[u] += 1
        deg[v] += 1
    return all(deg[r] >= 2 for r in inst.terminals)


def tree_weight(t: Tree, g: MetricGraph) -> float:
    # fsum is correctly rounded, so equal edge multisets give equal weights
    return math.fsum(g.w[u, v] for u, v in t.edges)


def walk_weight(seq: Sequence[int], g: MetricGraph) -> float:
    return math.fsum(g.w[u, v] for u, v in zip(seq, seq[1:]))
