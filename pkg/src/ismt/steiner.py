"""Steiner minimum tree subroutines used as the rho-approximation black box.

Two are provided: the MST of the terminal-induced subgraph (rho = 2 on
metric graphs) and the exact Dreyfus-Wagner dynamic program (rho = 1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import EmptyTerminalSet, TerminalCapExceeded
from .graph import Edge, MetricGraph, Tree, norm_edge

DW_TERMINAL_CAP = 12


class SubroutineKind(enum.Enum):
    TERMINAL_MST = "mst"
    EXACT_DW = "dw"


_RHO = {SubroutineKind.TERMINAL_MST: 2.0, SubroutineKind.EXACT_DW: 1.0}


@dataclass(frozen=True)
class SteinerSubroutine:
    kind: SubroutineKind
    dw_cap: int = DW_TERMINAL_CAP

    @property
    def rho(self) -> float:
        return _RHO[self.kind]

    @property
    def name(self) -> str:
        return self.kind.value

    @classmethod
    def from_name(cls, name: str, **kw) -> SteinerSubroutine:
        return cls(SubroutineKind(name), **kw)

    def run(self, g: MetricGraph, R: Iterable[int]) -> SteinerResult:
        if self.kind is SubroutineKind.TERMINAL_MST:
            return terminal_mst(g, R)
        return dreyfus_wagner(g, R, cap=self.dw_cap)


TERMINAL_MST = SteinerSubroutine(SubroutineKind.TERMINAL_MST)
EXACT_DW = SteinerSubroutine(SubroutineKind.EXACT_DW)


@dataclass(frozen=True)
class SteinerResult:
    tree: Tree
    rho_used: float


class UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def kruskal(vertices: Iterable[int], edges: Iterable[tuple[int, int, float]]) -> list[Edge]:
    """Minimum spanning forest; ties broken by (weight, min endpoint, max endpoint)."""
    vertices = list(vertices)
    uf = UnionFind(vertices)
    ordered = sorted((x, *norm_edge(u, v)) for u, v, x in edges)
    chosen = []
    for _, u, v in ordered:
        if uf.union(u, v):
            chosen.append((u, v))
            if len(chosen) == len(vertices) - 1:
                break
    return chosen


def _check_terminals(g: MetricGraph, R: Iterable[int]) -> list[int]:
    terms = sorted(set(R))
    if not terms:
        raise EmptyTerminalSet("Steiner subroutine needs at least one terminal")
    if terms[0] < 0 or terms[-1] >= g.n:
        raise ValueError(f"terminals {terms} not within 0..{g.n - 1}")
    return terms


def terminal_mst(g: MetricGraph, R: Iterable[int]) -> SteinerResult:
    terms = _check_terminals(g, R)
    edges = [(u, v, g.weight(u, v)) for i, u in enumerate(terms) for v in terms[i + 1:]]
    return SteinerResult(Tree.from_edges(kruskal(terms, edges), terms), 2.0)


def dreyfus_wagner(g: MetricGraph, R: Iterable[int], cap: int = DW_TERMINAL_CAP) -> SteinerResult:
    """Exact Steiner minimum tree by dynamic programming over terminal subsets.

    ``cost[S, v]`` is the cheapest tree joining the terminals in bitmask ``S``
    and vertex ``v``. On a metric graph the direct edge is a shortest path,
    so a single relaxation ``min_u merge[S, u] + w(u, v)`` replaces the
    usual shortest-path step.
    """
    terms = _check_terminals(g, R)
    k = len(terms)
    if k > cap:
        raise TerminalCapExceeded(f"{k} terminals exceed the Dreyfus-Wagner cap of {cap}")
    if k == 1:
        return SteinerResult(Tree(frozenset(terms)), 1.0)

    n = g.n
    w = g.w
    full = (1 << k) - 1
    cost = np.full((full + 1, n), np.inf)
    # back_split[S, v]: submask used at the merge vertex; back_via[S, v]: merge vertex
    back_split = np.zeros((full + 1, n), dtype=np.int64)
    back_via = np.zeros((full + 1, n), dtype=np.int64)
    for i, r in enumerate(terms):
        cost[1 << i] = w[r]

    cols = np.arange(n)
    for S in range(3, full + 1):
        if S & (S - 1) == 0:
            continue
        low = S & -S
        merge = np.full(n, np.inf)
        split = np.zeros(n, dtype=np.int64)
        # submasks containing the lowest bit, visited in ascending order so
        # the first (smallest) split wins ties
        rest = S ^ low
        subs = []
        A = rest
        while True:
            subs.append(A | low)
            if A == 0:
                break
            A = (A - 1) & rest
        for A in sorted(subs):
            if A == S:
                continue
            c = cost[A] + cost[S ^ A]
            better = c < merge
            merge[better] = c[better]
            split[better] = A
        total = merge[:, None] + w
        best = total.min(axis=0)
        key = np.where(total == best[None, :], split[:, None] * n + cols[:, None], np.iinfo(np.int64).max)
        via = key.min(axis=0) % n
        cost[S] = best
        back_via[S] = via
        back_split[S] = split[via]

    edges: set[Edge] = set()
    stack = [(full, terms[0])]
    while stack:
        S, v = stack.pop()
        if S & (S - 1) == 0:
            r = terms[S.bit_length() - 1]
            if r != v:
                edges.add(norm_edge(r, v))
            continue
        u = int(back_via[S, v])
        A = int(back_split[S, v])
        if u != v:
            edges.add(norm_edge(u, v))
        stack.append((A, u))
        stack.append((S ^ A, u))
    return SteinerResult(_clean_tree(g, edges, terms), 1.0)


def _clean_tree(g: MetricGraph, edges: set[Edge], terms: list[int]) -> Tree:
    """Spanning tree of the reconstructed edge union, minus non-terminal leaves.

    Subtrees can share vertices when zero-weight edges or ties are present;
    neither step increases weight.
    """
    vs = {x for e in edges for x in e} | set(terms)
    kept = set(kruskal(vs, [(u, v, g.weight(u, v)) for u, v in edges]))
    terminal = set(terms)
    while True:
        deg: dict[int, int] = {}
        for u, v in kept:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        prune = {x for x, d in deg.items() if d == 1 and x not in terminal}
        if not prune:
            break
        kept = {e for e in kept if not (e[0] in prune or e[1] in prune)}
        if not kept:
            break
    return Tree.from_edges(kept, terms)
