"""STP instance files and JSON solve reports.

Files use 1-based vertex ids; everything inside the package is 0-based.
The conversion happens here and nowhere else.

Grammar accepted by :func:`parse_stp`::

    33D32945 STP File, STP Format Version 1.0
    SECTION Comment
    Name "example"
    END
    SECTION Graph
    Nodes 3
    Edges 3
    E 1 2 1
    E 1 3 2
    E 2 3 2
    END
    SECTION Terminals
    Terminals 1
    T 1
    END
    EOF

Keywords are case-insensitive, blank lines and ``#`` comments are ignored,
and unknown sections are skipped with a warning.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import Solution
from .errors import NotMetric, ParseError
from .graph import Instance, MetricGraph, WeightedRawGraph, is_feasible_ismt, metric_closure
from .oracle import OracleResult

MAGIC = "33D32945"
HEADER = f"{MAGIC} STP File, STP Format Version 1.0"
SCHEMA_VERSION = 1
ALGORITHM_NAME = "ismt-2rho"


@dataclass
class StpDocument:
    graph: WeightedRawGraph
    terminals: frozenset[int]
    name: str = ""
    warnings: list[str] = field(default_factory=list)


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"malformed {what} {tok!r}") from None


def _float(tok: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(lineno, f"malformed weight {tok!r}") from None
    if not math.isfinite(x) or x < 0:
        raise ParseError(lineno, f"weight {tok!r} must be finite and nonnegative")
    return x


def parse_stp(text: str) -> StpDocument:
    lines = text.splitlines()
    body = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(lines)]
    body = [(i, ln) for i, ln in body if ln]
    if not body or not body[0][1].upper().startswith(MAGIC):
        raise ParseError(body[0][0] if body else 1, f"missing magic header {MAGIC}")

    warnings: list[str] = []
    name = ""
    nodes = None
    edges: list[tuple[int, int, float]] = []
    terminals: list[int] = []
    declared_edges = declared_terms = None
    section = None
    saw_graph = saw_eof = False

    def vertex(tok: str, lineno: int) -> int:
        v = _int(tok, lineno, "vertex id")
        if nodes is None:
            raise ParseError(lineno, "vertex referenced before Nodes was declared")
        if not 1 <= v <= nodes:
            raise ParseError(lineno, f"vertex id {v} out of range 1..{nodes}")
        return v - 1

    for lineno, line in body[1:]:
        toks = line.split()
        key = toks[0].lower()
        if saw_eof:
            warnings.append(f"line {lineno}: content after EOF ignored")
            break
        if section is None:
            if key == "section" and len(toks) >= 2:
                section = toks[1].lower()
                if section == "graph":
                    saw_graph = True
                elif section not in ("comment", "terminals"):
                    warnings.append(f"line {lineno}: skipped unknown section {toks[1]!r}")
                    section = "skip"
            elif key == "eof":
                saw_eof = True
            else:
                raise ParseError(lineno, f"unexpected line outside a section: {line!r}")
            continue
        if key == "eof":
            raise ParseError(lineno, f"section {section!r} not closed by END before EOF")
        if key == "end":
            if section == "graph":
                if nodes is None:
                    raise ParseError(lineno, "Graph section without Nodes")
                if declared_edges is not None and declared_edges != len(edges):
                    raise ParseError(lineno, f"declared {declared_edges} edges, found {len(edges)}")
            elif section == "terminals":
                if declared_terms is not None and declared_terms != len(terminals):
                    raise ParseError(lineno, f"declared {declared_terms} terminals, found {len(terminals)}")
            section = None
            continue
        if section == "skip":
            continue
        if section == "comment":
            if key == "name":
                name = line.split(None, 1)[1].strip().strip('"') if len(toks) > 1 else ""
            continue
        if section == "graph":
            if key == "nodes" and len(toks) == 2:
                nodes = _int(toks[1], lineno, "node count")
            elif key == "edges" and len(toks) == 2:
                declared_edges = _int(toks[1], lineno, "edge count")
            elif key == "e" and len(toks) == 4:
                u, v = vertex(toks[1], lineno), vertex(toks[2], lineno)
                if u == v:
                    raise ParseError(lineno, f"self-loop at vertex {u + 1}")
                edges.append((u, v, _float(toks[3], lineno)))
            else:
                raise ParseError(lineno, f"unrecognised Graph line {line!r}")
        elif section == "terminals":
            if key == "terminals" and len(toks) == 2:
                declared_terms = _int(toks[1], lineno, "terminal count")
            elif key == "t" and len(toks) == 2:
                terminals.append(vertex(toks[1], lineno))
            else:
                raise ParseError(lineno, f"unrecognised Terminals line {line!r}")

    last = body[-1][0]
    if section is not None:
        raise ParseError(last, f"section {section!r} not closed by END")
    if not saw_graph:
        raise ParseError(last, "no Graph section")
    if not saw_eof:
        warnings.append("missing EOF marker")
    return StpDocument(WeightedRawGraph(nodes, tuple(edges)), frozenset(terminals), name, warnings)


def to_instance(doc: StpDocument, metricize: bool = False) -> Instance:
    """Complete instance from a parsed document.

    Without ``metricize`` the edge list must already be complete; the
    triangle inequality is not checked here.
    """
    if metricize:
        g = metric_closure(doc.graph)
    else:
        missing = doc.graph.missing_pairs()
        if missing:
            u, v = missing[0]
            raise NotMetric(f"graph is not complete ({len(missing)} missing pairs, e.g. "
                            f"{u + 1}-{v + 1}); use metricize to take the metric closure")
        g = MetricGraph(doc.graph.to_matrix())
    return Instance(g, doc.terminals, doc.name)


def format_weight(x: float) -> str:
    """Shortest decimal that reads back as exactly ``x``."""
    if x.is_integer() and abs(x) < 2 ** 53:
        return str(int(x))
    return repr(x)


def write_stp(inst: Instance) -> str:
    g = inst.graph
    out = [HEADER, ""]
    if inst.name:
        out += ["SECTION Comment", f'Name "{inst.name}"', "END", ""]
    edges = g.edges()
    out += ["SECTION Graph", f"Nodes {g.n}", f"Edges {len(edges)}"]
    out += [f"E {u + 1} {v + 1} {format_weight(x)}" for u, v, x in edges]
    out += ["END", "", "SECTION Terminals", f"Terminals {len(inst.terminals)}"]
    out += [f"T {r + 1}" for r in sorted(inst.terminals)]
    out += ["END", "", "EOF", ""]
    return "\n".join(out)


def _instance_block(inst: Instance) -> dict:
    return {"name": inst.name, "n": inst.n, "terminals": [r + 1 for r in sorted(inst.terminals)]}


def report_dict(inst: Instance, solution: Solution, oracle: OracleResult | None = None,
                timing_ms: float | None = None) -> dict:
    feasible = is_feasible_ismt(solution.tree, inst)
    assert feasible, "refusing to report an infeasible solution"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "instance": _instance_block(inst),
        "algorithm": {"name": ALGORITHM_NAME, "subroutine": solution.subroutine, "rho": solution.rho},
        "result": {
            "weight": solution.weight,
            "edges": [[u + 1, v + 1] for u, v in solution.tree.sorted_edges()],
            "pair": [solution.pair[0] + 1, solution.pair[1] + 1],
            "path": [v + 1 for v in solution.path],
            "pairs_evaluated": solution.pairs_evaluated,
            "feasible": feasible,
        },
    }
    if oracle is not None:
        exact = oracle.optimum_weight
        doc["oracle"] = {
            "exact_weight": exact,
            "ratio": solution.weight / exact if exact > 0 else None,
        }
    if solution.traces is not None:
        doc["traces"] = [_trace_dict(pc.summary()) for pc in solution.traces]
    # wall-clock time; the only field that differs between identical runs
    doc["timing_ms"] = timing_ms
    return doc


def _trace_dict(summary: dict) -> dict:
    out = dict(summary)
    for key in ("s", "t", "u1", "u2"):
        out[key] += 1
    out["path"] = [v + 1 for v in out["path"]]
    return out


def write_report(inst: Instance, solution: Solution, oracle: OracleResult | None = None,
                 timing_ms: float | None = None) -> str:
    return json.dumps(report_dict(inst, solution, oracle, timing_ms), indent=2) + "\n"


def exact_report_dict(inst: Instance, oracle: OracleResult, timing_ms: float | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "instance": _instance_block(inst),
        "oracle": {
            "exact_weight": oracle.optimum_weight,
            "optima_count": oracle.optima_count,
            "edges": [[u + 1, v + 1] for u, v in oracle.tree.sorted_edges()],
            "truncated": oracle.truncated,
        },
        "timing_ms": timing_ms,
    }
