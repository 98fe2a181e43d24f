import itertools
import math

import networkx as nx
import numpy as np
import pytest

from conftest import k_unit, star_metric
from ismt.errors import EmptyTerminalSet, TerminalCapExceeded
from ismt.gen import GenSpec, generate
from ismt.graph import MetricGraph, tree_weight
from ismt.oracle import exact_smt_bruteforce
from ismt.steiner import (
    EXACT_DW,
    TERMINAL_MST,
    SteinerSubroutine,
    SubroutineKind,
    dreyfus_wagner,
    kruskal,
    terminal_mst,
)


def brute_mst_weight(g, R):
    R = sorted(R)
    best = math.inf
    for edges in itertools.combinations(itertools.combinations(R, 2), len(R) - 1):
        G = nx.Graph(list(edges))
        G.add_nodes_from(R)
        if nx.is_tree(G):
            best = min(best, math.fsum(g.w[u, v] for u, v in edges))
    return best


def test_rho_by_kind():
    assert TERMINAL_MST.rho == 2 and EXACT_DW.rho == 1
    assert SteinerSubroutine.from_name("dw").kind is SubroutineKind.EXACT_DW


def test_terminal_mst_examples():
    res = terminal_mst(k_unit(4), {0, 1})
    assert res.tree.sorted_edges() == [(0, 1)] and res.rho_used == 2
    single = terminal_mst(k_unit(4), {3})
    assert single.tree.vertices == {3} and tree_weight(single.tree, k_unit(4)) == 0
    star = terminal_mst(star_metric(), {0, 1, 2})
    assert tree_weight(star.tree, star_metric()) == 4 == brute_mst_weight(star_metric(), {0, 1, 2})
    with pytest.raises(EmptyTerminalSet):
        terminal_mst(k_unit(3), set())


def test_kruskal_tie_break():
    # all weights equal: lexicographically smallest edges win
    assert kruskal(range(4), [(u, v, 1.0) for u, v in itertools.combinations(range(4), 2)]) == [
        (0, 1), (0, 2), (0, 3)]


def test_dreyfus_wagner_examples():
    assert tree_weight(dreyfus_wagner(k_unit(4), {0, 1}).tree, k_unit(4)) == 1
    star = dreyfus_wagner(star_metric(), {0, 1, 2})
    assert tree_weight(star.tree, star_metric()) == 3
    assert star.tree.sorted_edges() == [(0, 3), (1, 3), (2, 3)]
    single = dreyfus_wagner(k_unit(4), {2})
    assert single.tree.edges == frozenset() and single.rho_used == 1


def test_dreyfus_wagner_cap():
    with pytest.raises(TerminalCapExceeded):
        dreyfus_wagner(k_unit(6), range(5), cap=4)


def test_dreyfus_wagner_zero_weight_edges():
    # duplicated points make subtrees share vertices
    pts = np.array([[0, 0], [0, 0], [1, 0], [1, 0], [0.5, 0.5]])
    g = MetricGraph(np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1)))
    res = dreyfus_wagner(g, {0, 1, 2, 3})
    assert tree_weight(res.tree, g) == exact_smt_bruteforce(g, {0, 1, 2, 3}).optimum_weight


@pytest.mark.parametrize("seed", range(30))
def test_subroutines_against_oracle(seed):
    kind = ("euclidean", "random", "onetwo")[seed % 3]
    n = 4 + seed % 4
    inst = generate(GenSpec(kind, n, 1 + seed % (n - 2), 900 + seed))
    R = inst.terminals
    g = inst.graph
    dw = tree_weight(dreyfus_wagner(g, R).tree, g)
    mst = terminal_mst(g, R)
    assert dw == exact_smt_bruteforce(g, R).optimum_weight
    mst_w = tree_weight(mst.tree, g)
    assert mst_w == brute_mst_weight(g, R)
    assert dw <= mst_w <= 2 * dw * (1 + 1e-9)
    for res in (dreyfus_wagner(g, R), mst):
        assert R <= res.tree.vertices <= set(range(n))
