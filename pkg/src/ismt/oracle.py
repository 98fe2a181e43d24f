"""Exact brute-force solvers for tiny instances.

Every vertex subset ``S`` with ``R <= S <= V`` is scanned and every labeled
tree on ``S`` is produced by decoding all Pruefer sequences, vectorised over
batches with numpy. In a decoded tree, a vertex's degree is one plus its
number of occurrences in the sequence, so the internal-terminal constraint
becomes "every terminal occurs in the sequence" and is applied before decoding.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import InstanceTooLarge
from .graph import Edge, Instance, MetricGraph, Tree, norm_edge, tree_leaves

log = logging.getLogger(__name__)

DEFAULT_MAX_N = 10
OPTIMA_LIST_CAP = 1000
_BATCH = 1 << 17
# decoded trees are cached per size up to this many vertices (9**7 trees ~ 50 MB)
_CACHE_MAX_M = 9


@dataclass
class OracleResult:
    optimum_weight: float
    tree: Tree
    optima_count: int
    optima: list[Tree] = field(default_factory=list)
    truncated: bool = False


def prufer_decode(seqs: np.ndarray, m: int) -> np.ndarray:
    """Decode a batch of Pruefer sequences over labels ``0..m-1``.

    ``seqs`` has shape ``(B, m-2)``; returns edges of shape ``(B, m-1, 2)``.
    """
    seqs = np.asarray(seqs, dtype=np.int64).reshape(-1, m - 2)
    B = seqs.shape[0]
    rows = np.arange(B)
    deg = 1 + (seqs[:, :, None] == np.arange(m)).sum(axis=1, dtype=np.int16)
    edges = np.empty((B, m - 1, 2), dtype=np.int64)
    for i in range(m - 2):
        leaf = np.argmax(deg == 1, axis=1)
        edges[:, i, 0] = leaf
        edges[:, i, 1] = seqs[:, i]
        deg[rows, leaf] = 0
        deg[rows, seqs[:, i]] -= 1
    a = np.argmax(deg == 1, axis=1)
    deg[rows, a] = 0
    b = np.argmax(deg == 1, axis=1)
    edges[:, m - 2, 0] = a
    edges[:, m - 2, 1] = b
    return edges


def labeled_trees(m: int) -> Iterator[list[Edge]]:
    """All ``m**(m-2)`` labeled trees on ``0..m-1`` as sorted edge lists."""
    if m == 1:
        yield []
        return
    if m == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(m), repeat=m - 2):
        edges = prufer_decode(np.array([seq]), m)[0]
        yield sorted((min(u, v), max(u, v)) for u, v in edges.tolist())


def _sequence_batches(m: int) -> Iterator[np.ndarray]:
    length = m - 2
    total = m ** length
    powers = m ** np.arange(length - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _BATCH):
        idx = np.arange(start, min(start + _BATCH, total), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % m


def _encode(seqs: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat edge indices ``a*m + b`` and a bitmask of vertices with degree >= 2."""
    edges = prufer_decode(seqs, m)
    flat = (edges[..., 0] * m + edges[..., 1]).astype(np.int16)
    internal = np.zeros(len(seqs), dtype=np.int64)
    for v in range(m):
        internal |= (seqs == v).any(axis=1).astype(np.int64) << v
    return flat, internal


@functools.lru_cache(maxsize=None)
def _all_trees(m: int) -> tuple[np.ndarray, np.ndarray]:
    parts = [_encode(seqs, m) for seqs in _sequence_batches(m)]
    flat = np.concatenate([p[0] for p in parts])
    internal = np.concatenate([p[1] for p in parts])
    flat.setflags(write=False)
    internal.setflags(write=False)
    return flat, internal


def _tree_batches(m: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    if m <= _CACHE_MAX_M:
        yield _all_trees(m)
    else:
        for seqs in _sequence_batches(m):
            yield _encode(seqs, m)


def _candidate_batches(g: MetricGraph, R: list[int], internal: bool
                       ) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield ``(S, flat, weights)`` batches covering every candidate tree.

    ``S`` is the sorted vertex subset; row ``i`` of ``flat`` encodes the
    edges of one tree as local indices ``a * |S| + b``.
    """
    Rset = set(R)
    others = [v for v in range(g.n) if v not in Rset]
    for extra in range(len(others) + 1):
        for chosen in itertools.combinations(others, extra):
            S = np.array(sorted(R + list(chosen)), dtype=np.int64)
            m = len(S)
            if m == 1:
                if not internal:
                    yield S, np.zeros((1, 0), dtype=np.int16), np.zeros(1)
                continue
            if m == 2:
                if not internal:
                    yield S, np.array([[1]], dtype=np.int16), np.array([g.w[S[0], S[1]]])
                continue
            wS = g.w[np.ix_(S, S)].ravel()
            need = sum(1 << int(np.searchsorted(S, r)) for r in R) if internal else 0
            for flat, inner in _tree_batches(m):
                if need:
                    keep = (inner & need) == need
                    flat = flat[keep]
                if len(flat):
                    yield S, flat, wS[flat].sum(axis=1)


def _edges_of(S: np.ndarray, row: np.ndarray) -> list[Edge]:
    m = len(S)
    return sorted(norm_edge(int(S[f // m]), int(S[f % m])) for f in row.tolist())


def _exact_weight(g: MetricGraph, edges: list[Edge]) -> float:
    return math.fsum(g.w[u, v] for u, v in edges)


def _iter_near_optimal(g: MetricGraph, R: list[int], internal: bool, bound: float
                       ) -> Iterator[tuple[float, Tree]]:
    """Candidates whose batch weight is within rounding of ``bound``."""
    slack = 1e-9 * max(abs(bound), 1.0)
    for S, flat, weights in _candidate_batches(g, R, internal):
        for i in np.nonzero(weights <= bound + slack)[0]:
            edges = _edges_of(S, flat[i])
            yield _exact_weight(g, edges), Tree.from_edges(edges, S.tolist())


def _solve(g: MetricGraph, R: Iterable[int], internal: bool, max_n: int) -> OracleResult:
    R = sorted(set(R))
    if g.n > max_n:
        raise InstanceTooLarge(f"n = {g.n} exceeds the oracle cap max_n = {max_n}")
    if max_n > DEFAULT_MAX_N:
        log.warning("oracle cap raised to %d; enumeration grows like n^(n-2)", max_n)

    approx = math.inf
    best = math.inf
    optima: list[tuple[list[Edge], Tree]] = []
    count = 0
    truncated = False
    for S, flat, weights in _candidate_batches(g, R, internal):
        approx = min(approx, float(weights.min()))
        slack = 1e-9 * max(abs(approx), 1.0)
        # batch sums only shortlist; exact fsum weights decide
        for i in np.nonzero(weights <= approx + slack)[0]:
            edges = _edges_of(S, flat[i])
            exact = _exact_weight(g, edges)
            if exact < best:
                best, optima, count, truncated = exact, [], 0, False
            if exact == best:
                count += 1
                if len(optima) < OPTIMA_LIST_CAP:
                    optima.append((edges, Tree.from_edges(edges, S.tolist())))
                else:
                    truncated = True
    # ISMT always has a feasible tree once |V \ R| >= 2 (path through all of R)
    assert optima, "no feasible tree found"
    optima.sort(key=lambda item: item[0])
    trees = [t for _, t in optima]
    return OracleResult(best, trees[0], count, trees, truncated)


def exact_ismt_bruteforce(inst: Instance, max_n: int = DEFAULT_MAX_N) -> OracleResult:
    return _solve(inst.graph, inst.terminals, True, max_n)


def exact_smt_bruteforce(g: MetricGraph, R: Iterable[int], max_n: int = DEFAULT_MAX_N) -> OracleResult:
    return _solve(g, R, False, max_n)


@dataclass
class Lemma1Report:
    optimum_weight: float
    optima_count: int
    statement1_holds_for_some_optimum: bool
    statement2_holds_for_some_optimum: bool
    statement1_witness: Tree | None
    statement2_witness: Tree | None
    truncated: bool


def leaf_statements(t: Tree, inst: Instance) -> tuple[bool, bool]:
    """(every leaf hangs off a terminal, and does so at its nearest-terminal distance)."""
    adj = t.adjacency()
    s1 = s2 = True
    for leaf in tree_leaves(t):
        (nbr,) = adj[leaf]
        if nbr not in inst.terminals:
            return False, False
        nearest = min(inst.graph.weight(leaf, r) for r in inst.terminals)
        if inst.graph.weight(leaf, nbr) != nearest:
            s2 = False
    return s1, s2


def lemma1_probe(inst: Instance, max_n: int = DEFAULT_MAX_N) -> Lemma1Report:
    """Check both leaf statements over every optimal internal Steiner tree.

    All optima are examined, not only the capped list kept by the oracle;
    ``truncated`` reports whether that list was capped.
    """
    res = exact_ismt_bruteforce(inst, max_n)
    R = sorted(inst.terminals)
    w1 = w2 = None
    for exact, t in _iter_near_optimal(inst.graph, R, True, res.optimum_weight):
        if exact != res.optimum_weight:
            continue
        s1, s2 = leaf_statements(t, inst)
        if s1 and (w1 is None or t.sorted_edges() < w1.sorted_edges()):
            w1 = t
        if s2 and (w2 is None or t.sorted_edges() < w2.sorted_edges()):
            w2 = t
    return Lemma1Report(res.optimum_weight, res.optima_count, w1 is not None,
                        w2 is not None, w1, w2, res.truncated)
