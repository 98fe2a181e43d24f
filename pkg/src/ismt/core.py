"""The doubling-tree 2-rho approximation for the internal Steiner tree problem.

For a pair ``s, t`` of non-terminals, a Steiner tree ``t1`` for ``R`` is built
on ``G[V - {s, t}]``, ``s`` and ``t`` are hung on their nearest ``t1``
vertices to get ``t2``, every ``t2`` edge off the ``s``-``t`` path is
doubled, and the resulting open Eulerian walk is shortcut into a Hamiltonian
path over ``V(t2)``. Both ends of that path are non-terminals, so every
terminal is internal. :func:`solve` keeps the lightest path over all pairs.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DegreeParityViolation,
    EmptyCandidateSet,
    InfeasibleInstance,
    NotALeaf,
    NotMetric,
)
from .graph import (
    DEFAULT_TOL,
    Edge,
    Instance,
    MetricGraph,
    Tree,
    induced_subgraph,
    is_feasible_ismt,
    norm_edge,
    tree_weight,
    unique_path,
    validate_metric,
    walk_weight,
)
from .steiner import EXACT_DW, SteinerSubroutine


@dataclass(frozen=True)
class EulerMultigraph:
    """Edge multiset; ``multiplicity`` maps a normalized edge to 1 or 2."""

    multiplicity: dict[Edge, int]

    def degree(self) -> dict[int, int]:
        deg: dict[int, int] = defaultdict(int)
        for (u, v), k in self.multiplicity.items():
            deg[u] += k
            deg[v] += k
        return dict(deg)

    def weight(self, g: MetricGraph) -> float:
        return math.fsum(k * g.w[u, v] for (u, v), k in self.multiplicity.items())

    def edge_count(self) -> int:
        return sum(self.multiplicity.values())


@dataclass(frozen=True)
class PairConstruction:
    s: int
    t: int
    t1: Tree
    u1: int
    u2: int
    t2: Tree
    st_path_in_t2: tuple[int, ...]
    multigraph: EulerMultigraph
    euler_walk: tuple[int, ...]
    path: tuple[int, ...]
    p: Tree
    t1_weight: float
    t2_weight: float
    st_path_weight: float
    walk_weight: float
    p_weight: float

    def summary(self) -> dict:
        return {
            "s": self.s, "t": self.t, "u1": self.u1, "u2": self.u2,
            "t1_weight": self.t1_weight, "t2_weight": self.t2_weight,
            "walk_weight": self.walk_weight, "p_weight": self.p_weight,
            "path": list(self.path),
        }


@dataclass(frozen=True)
class Solution:
    tree: Tree
    path: tuple[int, ...]
    weight: float
    pair: tuple[int, int]
    subroutine: str
    rho: float
    pairs_evaluated: int
    traces: tuple[PairConstruction, ...] | None = None


def nearest_in_set(g: MetricGraph, x: int, C: Iterable[int]) -> int:
    """Closest member of ``C`` to ``x``; ties go to the smallest id."""
    C = sorted(set(C))
    if not C:
        raise EmptyCandidateSet("no candidate vertices")
    return min(C, key=lambda v: (g.w[x, v], v))


def double_except_st_path(t2: Tree, s: int, t: int) -> EulerMultigraph:
    for x in (s, t):
        if x not in t2.vertices or t2.degree(x) != 1:
            raise NotALeaf(f"vertex {x} is not a leaf of t2")
    path = unique_path(t2, s, t)
    on_path = {norm_edge(u, v) for u, v in zip(path, path[1:])}
    return EulerMultigraph({e: 1 if e in on_path else 2 for e in t2.sorted_edges()})


def euler_walk(m: EulerMultigraph, s: int, t: int) -> list[int]:
    """Open Eulerian walk from ``s`` to ``t`` (Hierholzer).

    Unused edges are taken in ascending (neighbour id, copy index) order.
    """
    deg = m.degree()
    odd = sorted(v for v, d in deg.items() if d % 2)
    if s == t or odd != sorted((s, t)):
        raise DegreeParityViolation(f"odd-degree vertices {odd}, expected exactly {s} and {t}")

    adj: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    eid = 0
    for (u, v), k in sorted(m.multiplicity.items()):
        for slot in range(k):
            adj[u].append((v, slot, eid))
            adj[v].append((u, slot, eid))
            eid += 1
    for v in adj:
        adj[v].sort()
    used = [False] * eid
    ptr = dict.fromkeys(adj, 0)

    stack = [s]
    out: list[int] = []
    while stack:
        v = stack[-1]
        nbrs = adj[v]
        while ptr[v] < len(nbrs) and used[nbrs[ptr[v]][2]]:
            ptr[v] += 1
        if ptr[v] == len(nbrs):
            out.append(stack.pop())
        else:
            x, _, e = nbrs[ptr[v]]
            used[e] = True
            stack.append(x)
    walk = out[::-1]
    if len(walk) != eid + 1 or walk[-1] != t:
        raise DegreeParityViolation("multigraph is not connected")
    return walk


def shortcut_sequence(walk: Sequence[int]) -> list[int]:
    seen: set[int] = set()
    seq = []
    for v in walk:
        if v not in seen:
            seen.add(v)
            seq.append(v)
    return seq


def shortcut(walk: Sequence[int], g: MetricGraph) -> Tree:
    """Keep first occurrences; under the triangle inequality the weight cannot grow."""
    seq = shortcut_sequence(walk)
    # s and t have degree 1 in the multigraph, so each occurs exactly once
    assert seq[0] == walk[0] and seq[-1] == walk[-1]
    p = Tree.from_path(seq)
    # graphs are validated to DEFAULT_TOL, so allow that much float slack here
    ww = walk_weight(walk, g)
    assert tree_weight(p, g) <= ww + DEFAULT_TOL * ww
    return p


def build_st_path(inst: Instance, s: int, t: int, sub: SteinerSubroutine = EXACT_DW) -> PairConstruction:
    if s == t or s in inst.terminals or t in inst.terminals:
        raise ValueError(f"({s}, {t}) must be two distinct non-terminals")
    g = inst.graph
    sg, ids = induced_subgraph(g, (v for v in range(g.n) if v not in (s, t)))
    local = {v: i for i, v in enumerate(ids)}
    res = sub.run(sg, [local[r] for r in inst.terminals])
    t1 = Tree(frozenset(ids[v] for v in res.tree.vertices),
              frozenset((ids[a], ids[b]) for a, b in res.tree.edges))

    u1 = nearest_in_set(g, s, t1.vertices)
    u2 = nearest_in_set(g, t, t1.vertices)
    t2 = Tree(t1.vertices | {s, t}, t1.edges | {norm_edge(s, u1), norm_edge(t, u2)})
    st_path = unique_path(t2, s, t)
    mg = double_except_st_path(t2, s, t)
    walk = euler_walk(mg, s, t)
    seq = shortcut_sequence(walk)
    p = shortcut(walk, g)

    pc = PairConstruction(
        s=s, t=t, t1=t1, u1=u1, u2=u2, t2=t2,
        st_path_in_t2=tuple(st_path), multigraph=mg, euler_walk=tuple(walk),
        path=tuple(seq), p=p,
        t1_weight=tree_weight(t1, g), t2_weight=tree_weight(t2, g),
        st_path_weight=walk_weight(st_path, g), walk_weight=walk_weight(walk, g),
        p_weight=tree_weight(p, g),
    )
    assert p.vertices == t2.vertices and is_feasible_ismt(p, inst)
    return pc


def _build(args: tuple[Instance, int, int, SteinerSubroutine]) -> PairConstruction:
    return build_st_path(*args)


def solve(inst: Instance, sub: SteinerSubroutine = EXACT_DW, keep_traces: bool = False,
          jobs: int = 1, check_metric: bool = True) -> Solution:
    """Best ``s``-``t`` path over all unordered non-terminal pairs.

    The winner minimises ``(weight, s, t)``, so the result does not depend on
    the order in which pairs are evaluated. With ``jobs > 1`` the pairs are
    spread over worker processes.
    """
    free = inst.nonterminals
    if len(free) < 2:
        raise InfeasibleInstance(f"|V \\ R| = {len(free)} < 2; no internal Steiner tree exists")
    if check_metric:
        bad = validate_metric(inst.graph)
        if bad:
            raise NotMetric(f"{len(bad)} metric violations, first: {bad[0]}")

    pairs = list(itertools.combinations(free, 2))
    tasks = [(inst, s, t, sub) for s, t in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_build, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        runs = [_build(task) for task in tasks]

    best = min(runs, key=lambda pc: (pc.p_weight, pc.s, pc.t))
    return Solution(
        tree=best.p, path=best.path, weight=best.p_weight, pair=(best.s, best.t),
        subroutine=sub.name, rho=sub.rho, pairs_evaluated=len(runs),
        traces=tuple(runs) if keep_traces else None,
    )
