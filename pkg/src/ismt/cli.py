"""``ismt`` command line: check, solve, exact, gen and bench.

Exit codes: 0 success, 1 parse or validation failure, 2 infeasible
instance, 3 oracle size cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
import time
from pathlib import Path

from . import oracle as oracle_mod
from .core import solve
from .errors import (
    EmptyTerminalSet,
    InfeasibleInstance,
    InstanceTooLarge,
    IsmtError,
    NotMetric,
    ParseError,
    SpecInvalid,
)
from .gen import KINDS, GenSpec, generate
from .graph import DEFAULT_TOL, Instance, MetricGraph, validate_metric
from .steiner import SteinerSubroutine
from .stp import StpDocument, exact_report_dict, format_weight, parse_stp, to_instance, write_report, write_stp

log = logging.getLogger("ismt")

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_TOO_LARGE = 0, 1, 2, 3

BENCH_COLUMNS = ["instance", "n", "k", "subroutine", "alg_weight", "exact_weight", "ratio",
                 "pairs_evaluated", "runtime_ms", "error"]


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> StpDocument:
    try:
        doc = parse_stp(Path(path).read_text())
    except ParseError as exc:
        raise CliFailure(EXIT_INVALID, f"{path}: parse error, {exc}") from None
    except (OSError, ValueError) as exc:
        raise CliFailure(EXIT_INVALID, f"{path}: {exc}") from None
    for msg in doc.warnings:
        log.warning("%s: %s", path, msg)
    return doc


def _format_violation(v) -> str:
    ids = "-".join(str(x + 1) for x in v.vertices)
    if v.kind == "triangle":
        return f"triangle {ids}: direct edge exceeds the detour by {v.slack!r}"
    return f"{v.kind} {ids}: {v.slack!r}"


def _load_instance(path: str, metricize: bool, tol: float = DEFAULT_TOL) -> Instance:
    doc = _read(path)
    try:
        inst = to_instance(doc, metricize=metricize)
    except InfeasibleInstance as exc:
        raise CliFailure(EXIT_INFEASIBLE, f"{path}: infeasible instance, |V \\ R| >= 2 is required ({exc})") from None
    except (NotMetric, EmptyTerminalSet, IsmtError, ValueError) as exc:
        raise CliFailure(EXIT_INVALID, f"{path}: {exc}") from None
    bad = validate_metric(inst.graph, tol)
    if bad:
        lines = "\n".join(_format_violation(v) for v in bad[:20])
        raise CliFailure(EXIT_INVALID, f"{path}: not a metric graph ({len(bad)} violations; "
                                       f"rerun with --metricize)\n{lines}")
    return inst


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    doc = _read(args.path)
    missing = doc.graph.missing_pairs()
    if missing:
        print(f"{args.path}: graph is incomplete, {len(missing)} missing pairs")
        for u, v in missing[:20]:
            print(f"missing {u + 1}-{v + 1}")
        violations = []
    else:
        violations = validate_metric(MetricGraph(doc.graph.to_matrix()), args.tol)
        for v in violations:
            print(_format_violation(v))
    ok = not missing and not violations
    if args.metricize:
        try:
            inst = to_instance(doc, metricize=True)
        except InfeasibleInstance as exc:
            raise CliFailure(EXIT_INFEASIBLE, f"{args.path}: {exc}") from None
        except IsmtError as exc:
            raise CliFailure(EXIT_INVALID, f"{args.path}: {exc}") from None
        target = Path(args.path).with_suffix(".metric.stp")
        target.write_text(write_stp(inst))
        print(f"wrote metric closure to {target}")
        return EXIT_OK
    if ok:
        print(f"{args.path}: metric graph, n={doc.graph.n}, |R|={len(doc.terminals)}")
        return EXIT_OK
    print(f"{args.path}: {len(violations)} metric violations")
    return EXIT_INVALID


def cmd_solve(args) -> int:
    inst = _load_instance(args.path, args.metricize, args.tol)
    sub = SteinerSubroutine.from_name(args.sub)
    start = time.perf_counter()
    sol = solve(inst, sub, keep_traces=args.traces, jobs=args.jobs)
    elapsed = (time.perf_counter() - start) * 1000
    exact = None
    if args.exact:
        try:
            exact = oracle_mod.exact_ismt_bruteforce(inst, args.max_n)
        except InstanceTooLarge as exc:
            raise CliFailure(EXIT_TOO_LARGE, f"{args.path}: {exc}") from None
    _emit(write_report(inst, sol, exact, timing_ms=elapsed), args.out)
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = _load_instance(args.path, args.metricize, args.tol)
    start = time.perf_counter()
    try:
        res = oracle_mod.exact_ismt_bruteforce(inst, args.max_n)
    except InstanceTooLarge as exc:
        raise CliFailure(EXIT_TOO_LARGE, f"{args.path}: {exc}") from None
    elapsed = (time.perf_counter() - start) * 1000
    _emit(json.dumps(exact_report_dict(inst, res, elapsed), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        inst = generate(GenSpec(args.kind, args.n, args.k, args.seed))
    except SpecInvalid as exc:
        raise CliFailure(EXIT_INVALID, str(exc)) from None
    _emit(write_stp(inst), args.out)
    return EXIT_OK


def bench_rows(directory: Path, subs: list[str], exact: bool, max_n: int = oracle_mod.DEFAULT_MAX_N,
               metricize: bool = False, jobs: int = 1) -> list[dict]:
    rows = []
    for path in sorted(directory.glob("*.stp")):
        try:
            inst = _load_instance(str(path), metricize)
        except CliFailure as exc:
            for sub in subs:
                rows.append(_row(path.stem, sub, error=str(exc).splitlines()[0]))
            continue
        name = inst.name or path.stem
        opt = None
        opt_error = ""
        if exact:
            try:
                opt = oracle_mod.exact_ismt_bruteforce(inst, max_n).optimum_weight
            except InstanceTooLarge:
                opt_error = f"oracle skipped: n={inst.n} > {max_n}"
        for sub in subs:
            start = time.perf_counter()
            try:
                sol = solve(inst, SteinerSubroutine.from_name(sub), jobs=jobs)
            except IsmtError as exc:
                rows.append(_row(name, sub, inst, error=f"{type(exc).__name__}: {exc}"))
                continue
            ms = (time.perf_counter() - start) * 1000
            row = _row(name, sub, inst, error=opt_error)
            row.update(alg_weight=sol.weight, pairs_evaluated=sol.pairs_evaluated, runtime_ms=ms)
            if opt is not None:
                row["exact_weight"] = opt
                row["ratio"] = sol.weight / opt if opt > 0 else None
            rows.append(row)
    return rows


def _row(name: str, sub: str, inst: Instance | None = None, error: str = "") -> dict:
    row = dict.fromkeys(BENCH_COLUMNS)
    row.update(instance=name, subroutine=sub, error=error)
    if inst is not None:
        row.update(n=inst.n, k=len(inst.terminals))
    return row


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        cells = []
        for col in BENCH_COLUMNS:
            x = row[col]
            if x is None:
                cells.append("")
            elif col == "runtime_ms":
                cells.append(f"{x:.3f}")
            elif isinstance(x, float):
                cells.append(format_weight(x))
            else:
                cells.append(str(x))
        writer.writerow(cells)
    return buf.getvalue()


def cmd_bench(args) -> int:
    subs = ["mst", "dw"] if args.sub == "all" else [args.sub]
    rows = bench_rows(Path(args.dir), subs, args.exact, args.max_n, args.metricize, args.jobs)
    _emit(rows_to_csv(rows), args.out)
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None]
    errors = sum(1 for r in rows if r["error"] and r["alg_weight"] is None)
    summary = f"{len(rows)} rows, {errors} failed"
    if ratios:
        summary += f", max ratio {max(ratios):.6g}, mean ratio {statistics.fmean(ratios):.6g}"
    print(summary, file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ismt", description="Internal Steiner minimum tree toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sp = p.add_subparsers(dest="command", required=True)

    def instance_args(q, tol=True):
        q.add_argument("path")
        q.add_argument("--metricize", action="store_true",
                       help="replace the graph by its shortest-path metric closure")
        if tol:
            q.add_argument("--tol", type=float, default=DEFAULT_TOL,
                           help="relative tolerance for the triangle inequality")

    q = sp.add_parser("check", help="validate an STP file as a metric instance")
    instance_args(q)
    q.set_defaults(func=cmd_check)

    q = sp.add_parser("solve", help="run the 2-rho approximation")
    instance_args(q)
    q.add_argument("--sub", choices=["mst", "dw"], default="dw")
    q.add_argument("--out")
    q.add_argument("--traces", action="store_true", help="include every pair construction")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--exact", action="store_true", help="add the brute-force optimum to the report")
    q.add_argument("--max-n", type=int, default=oracle_mod.DEFAULT_MAX_N)
    q.set_defaults(func=cmd_solve)

    q = sp.add_parser("exact", help="brute-force optimum for a small instance")
    instance_args(q)
    q.add_argument("--max-n", type=int, default=oracle_mod.DEFAULT_MAX_N)
    q.add_argument("--out")
    q.set_defaults(func=cmd_exact)

    q = sp.add_parser("gen", help="generate a seeded instance")
    q.add_argument("--kind", choices=KINDS, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_gen)

    q = sp.add_parser("bench", help="solve every STP file in a directory, write CSV")
    q.add_argument("--dir", required=True)
    q.add_argument("--sub", choices=["mst", "dw", "all"], default="all")
    q.add_argument("--exact", action="store_true")
    q.add_argument("--max-n", type=int, default=oracle_mod.DEFAULT_MAX_N)
    q.add_argument("--metricize", action="store_true")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--out")
    q.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliFailure as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
