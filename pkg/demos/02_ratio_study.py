"""
Empirical approximation ratios
==============================

Generates small instances of each kind, solves them with both Steiner
subroutines and compares against the brute-force optimum. The guarantee is
2 for the exact subroutine and 4 for the terminal MST.
"""

import statistics

from ismt import GenSpec, exact_ismt_bruteforce, generate, solve
from ismt.gen import KINDS
from ismt.steiner import EXACT_DW, TERMINAL_MST

ratios = {(kind, sub.name): [] for kind in KINDS for sub in (EXACT_DW, TERMINAL_MST)}

for seed in range(40):
    kind = KINDS[seed % 3]
    n = 5 + seed % 4
    inst = generate(GenSpec(kind, n, 1 + seed % (n - 2), seed))
    opt = exact_ismt_bruteforce(inst).optimum_weight
    for sub in (EXACT_DW, TERMINAL_MST):
        ratios[kind, sub.name].append(solve(inst, sub).weight / opt)

##############################################################################
# Observed ratios sit far below the worst-case bound.

print(f"{'kind':<10} {'sub':<4} {'mean':>7} {'max':>7}  bound")
for (kind, sub), rs in ratios.items():
    bound = 2 if sub == "dw" else 4
    print(f"{kind:<10} {sub:<4} {statistics.fmean(rs):7.4f} {max(rs):7.4f}  {bound}")
