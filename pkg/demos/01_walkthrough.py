"""
One pair, step by step
======================

Runs the doubling-tree construction on a four-vertex instance and prints
every intermediate object: the Steiner tree on the remaining vertices, the
attachment points, the selectively doubled multigraph, the Eulerian walk
and the shortcut path. The brute-force optimum is printed alongside.
"""

import numpy as np

from ismt import Instance, MetricGraph, build_st_path, exact_ismt_bruteforce, solve
from ismt.steiner import EXACT_DW

##############################################################################
# Vertices 1 and 2 are terminals and must end up with degree at least two.

w = np.array([
    [0, 2, 1, 2],
    [2, 0, 2, 3],
    [1, 2, 0, 1],
    [2, 3, 1, 0],
], dtype=float)
inst = Instance(MetricGraph(w), {1, 2}, "demo")

##############################################################################
# Only one pair of non-terminals exists here, (0, 3).

pc = build_st_path(inst, 0, 3, EXACT_DW)
print("t1 edges       ", pc.t1.sorted_edges(), "weight", pc.t1_weight)
print("attachments    ", pc.u1, pc.u2)
print("t2 edges       ", pc.t2.sorted_edges(), "weight", pc.t2_weight)
print("s-t path in t2 ", pc.st_path_in_t2)
print("multiplicities ", pc.multigraph.multiplicity)
print("euler walk     ", pc.euler_walk, "weight", pc.walk_weight)
print("shortcut path  ", pc.path, "weight", pc.p_weight)

##############################################################################
# The construction is 2-approximate with an exact subroutine; here it is
# 6 against an optimum of 5.

sol = solve(inst, EXACT_DW)
opt = exact_ismt_bruteforce(inst)
print("solution", sol.weight, "optimum", opt.optimum_weight, "edges", opt.tree.sorted_edges())
print("ratio", sol.weight / opt.optimum_weight)
