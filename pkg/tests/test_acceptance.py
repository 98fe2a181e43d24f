"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Tolerances are fixed here: ratio bounds use a relative 1e-9, shortcut bounds
and subroutine cross-checks are exact.
"""

from __future__ import annotations

import json
import time

import pytest

from conftest import ACCEPTANCE, GOLDEN, k_unit, sym
from ismt.cli import main
from ismt.core import solve
from ismt.errors import InfeasibleInstance
from ismt.gen import KINDS, GenSpec, generate
from ismt.graph import Instance, is_feasible_ismt, tree_leaves, tree_weight
from ismt.oracle import exact_ismt_bruteforce, exact_smt_bruteforce, lemma1_probe
from ismt.steiner import EXACT_DW, TERMINAL_MST, dreyfus_wagner, terminal_mst
from ismt.stp import parse_stp, to_instance, write_stp

REL = 1e-9


def corpus(count: int, n_lo: int, n_hi: int, seed0: int) -> list[Instance]:
    """Fixed-seed mix of all generator kinds, sizes and terminal counts."""
    out = []
    span = n_hi - n_lo + 1
    for i in range(count):
        kind = KINDS[i % 3]
        n = n_lo + (i // 3) % span
        k = 1 + (i * 7 + i // 15) % (n - 2)
        out.append(generate(GenSpec(kind, n, k, seed0 + i)))
    return out


def record(num: int, failures: list, detail: str) -> None:
    ACCEPTANCE[num] = (not failures, detail if not failures else f"{detail}; first failure: {failures[0]}")
    assert not failures, failures[:5]


@pytest.fixture(scope="module")
def ratio_runs():
    """210 instances, n in [5, 9], solved with both subroutines plus the exact optimum."""
    start = time.perf_counter()
    runs = []
    for inst in corpus(210, 5, 9, seed0=10_000):
        opt = exact_ismt_bruteforce(inst).optimum_weight
        runs.append((inst, opt, solve(inst, EXACT_DW, keep_traces=True),
                     solve(inst, TERMINAL_MST, keep_traces=True)))
    return runs, time.perf_counter() - start


@pytest.fixture(scope="module")
def feasibility_runs():
    """500 instances, n in [5, 12], no oracle."""
    runs = []
    for inst in corpus(500, 5, 12, seed0=20_000):
        runs.append((inst, solve(inst, EXACT_DW, keep_traces=True),
                     solve(inst, TERMINAL_MST, keep_traces=True)))
    return runs


@pytest.fixture(scope="module")
def small_corpus():
    return corpus(100, 4, 8, seed0=30_000)


def test_criterion_1_ratio_guarantee(ratio_runs):
    runs, seconds = ratio_runs
    failures = []
    worst = {"dw": 0.0, "mst": 0.0}
    for inst, opt, dw, mst in runs:
        for sol, bound in ((dw, 2), (mst, 4)):
            worst[sol.subroutine] = max(worst[sol.subroutine], sol.weight / opt)
            if not sol.weight <= bound * opt * (1 + REL):
                failures.append((inst.name, sol.subroutine, sol.weight, opt))
    if seconds >= 60:
        failures.append(f"wall time {seconds:.1f}s >= 60s")
    record(1, failures, f"{len(runs)} instances, max ratio dw={worst['dw']:.4f} (<=2), "
                        f"mst={worst['mst']:.4f} (<=4), {seconds:.1f}s")


def test_criterion_2_existential_t2_bound(ratio_runs):
    runs, _ = ratio_runs
    failures = []
    for inst, opt, dw, _ in runs:
        best_t2 = min(pc.t2_weight for pc in dw.traces)
        if not best_t2 <= opt * (1 + REL):
            failures.append((inst.name, best_t2, opt))
    record(2, failures, f"{len(runs)} instances have a pair with w(t2) <= OPT")


def test_criterion_3_shortcut_bound(ratio_runs, feasibility_runs):
    runs, _ = ratio_runs
    sols = [s for _, _, dw, mst in runs for s in (dw, mst)]
    sols += [s for _, dw, mst in feasibility_runs for s in (dw, mst)]
    failures = []
    count = 0
    for sol in sols:
        for pc in sol.traces:
            count += 1
            if not (pc.p_weight <= 2 * pc.t2_weight and pc.p_weight <= pc.walk_weight):
                failures.append((pc.s, pc.t, pc.p_weight, pc.t2_weight, pc.walk_weight))
    record(3, failures, f"{count} pair constructions satisfy w(P) <= walk <= 2 w(t2) exactly")


def test_criterion_4_feasibility(feasibility_runs):
    failures = []
    for inst, *sols in feasibility_runs:
        for sol in sols:
            deg_ok = all(sol.tree.degree(r) >= 2 for r in inst.terminals)
            ends_ok = not (tree_leaves(sol.tree) & inst.terminals)
            ends_free = sol.path[0] not in inst.terminals and sol.path[-1] not in inst.terminals
            if not (is_feasible_ismt(sol.tree, inst) and deg_ok and ends_ok and ends_free):
                failures.append((inst.name, sol.subroutine))
    record(4, failures, f"{len(feasibility_runs)} instances (n<=12) x 2 subroutines feasible")


def test_criterion_5_subroutine_cross_validation(small_corpus):
    failures = []
    for inst in small_corpus:
        g, R = inst.graph, inst.terminals
        dw = tree_weight(dreyfus_wagner(g, R).tree, g)
        brute = exact_smt_bruteforce(g, R).optimum_weight
        mst = tree_weight(terminal_mst(g, R).tree, g)
        if dw != brute or not mst <= 2 * dw:
            failures.append((inst.name, dw, brute, mst))
    record(5, failures, f"{len(small_corpus)} instances: DW == brute force exactly, MST <= 2 DW")


def test_criterion_6_lemma1(small_corpus, inst_c):
    failures = []
    s2_false = 0
    for inst in small_corpus:
        rep = lemma1_probe(inst)
        if not rep.statement1_holds_for_some_optimum:
            failures.append(inst.name)
        s2_false += not rep.statement2_holds_for_some_optimum
    res = exact_ismt_bruteforce(inst_c)
    rep = lemma1_probe(inst_c)
    if not (res.optimum_weight == 5 and res.optima_count == 1
            and res.tree.sorted_edges() == [(0, 1), (1, 2), (2, 3)]):
        failures.append(("C optimum", res.optimum_weight, res.tree.sorted_edges()))
    if rep.statement2_holds_for_some_optimum or not rep.statement1_holds_for_some_optimum:
        failures.append(("C statements", rep))
    record(6, failures, f"statement 1 held on {len(small_corpus)} instances; statement 2 failed on "
                        f"{s2_false}; instance C: OPT 5, path 0-1-2-3, statement 2 violated")


def test_criterion_7_golden(inst_a, inst_b, inst_c):
    failures = []
    for inst, want, want_opt in ((inst_a, 3, 3), (inst_b, 3, 3), (inst_c, 6, 5)):
        sol = solve(inst, EXACT_DW)
        opt = exact_ismt_bruteforce(inst).optimum_weight
        if sol.weight != want or opt != want_opt:
            failures.append((inst.name, sol.weight, opt))
    if solve(inst_c, EXACT_DW).weight / exact_ismt_bruteforce(inst_c).optimum_weight != 1.2:
        failures.append("C ratio")
    record(7, failures, "A: 3 = OPT, B: 3 = OPT, C: 6 vs OPT 5 (ratio 1.2)")


def test_criterion_8_pair_count(ratio_runs, feasibility_runs):
    runs, _ = ratio_runs
    failures = []
    pairs = [(inst, s) for inst, _, dw, mst in runs for s in (dw, mst)]
    pairs += [(inst, s) for inst, dw, mst in feasibility_runs for s in (dw, mst)]
    for inst, sol in pairs:
        free = inst.n - len(inst.terminals)
        if sol.pairs_evaluated != free * (free - 1) // 2 or len(sol.traces) != sol.pairs_evaluated:
            failures.append((inst.name, sol.pairs_evaluated))
    for bad in ({0, 1, 2}, {0, 1, 2, 3}):
        try:
            solve(Instance(k_unit(4), bad))
            failures.append(f"R={bad} accepted")
        except InfeasibleInstance:
            pass
    record(8, failures, f"{len(pairs)} runs evaluate (n-k)(n-k-1)/2 pairs; |V\\R|<2 rejected")


def test_criterion_9_io(tmp_path, capsys):
    failures = []
    files = sorted(GOLDEN.glob("*.stp"))
    if len(files) < 10:
        failures.append(f"only {len(files)} golden files")
    for path in files:
        once = write_stp(to_instance(parse_stp(path.read_text())))
        if write_stp(to_instance(parse_stp(once))) != once:
            failures.append(f"round trip {path.name}")
        reports = []
        for jobs in (1, 1, 4):
            out = tmp_path / f"{path.stem}-{jobs}-{len(reports)}.json"
            main(["solve", str(path), "--traces", "--jobs", str(jobs), "--out", str(out)])
            text = out.read_text()
            doc = json.loads(text)
            doc.pop("timing_ms")
            reports.append(json.dumps(doc, indent=2))
        if len(set(reports)) != 1:
            failures.append(f"report differs {path.name}")
    capsys.readouterr()
    record(9, failures, f"{len(files)} golden files round-trip; reports identical across runs and --jobs")
