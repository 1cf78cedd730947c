"""The ``p l3c`` instance format and the run report.

Instance files::

    c comment
    p l3c <n> <m>
    e <u> <v>             (1-indexed, m lines)
    l <v> <c1> [<c2> [<c3>]]   (optional; missing vertices get {1,2,3})

Vertices are 1..n in files and 0..n-1 in memory; the translation lives here
and nowhere else.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .graph import Graph
from .instance import FULL, Coloring, Instance

REPORT_SCHEMA = "l3col.report/1"


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


def _int(tok: str, line: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line, col, f"expected integer {what}, got {tok!r}") from None


def _columns(raw: str) -> List[Tuple[str, int]]:
    out, i = [], 0
    for tok in raw.split():
        i = raw.index(tok, i)
        out.append((tok, i + 1))
        i += len(tok)
    return out


def parse_instance(text: str) -> Instance:
    n = m = None
    edges: List[Tuple[int, int]] = []
    seen_edges = set()
    lists: Dict[int, frozenset] = {}
    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _columns(raw)
        if not toks:
            continue
        kind, kcol = toks[0]
        if kind == "c":
            continue
        if kind == "p":
            if n is not None:
                raise ParseError(lineno, kcol, "duplicate header")
            if len(toks) != 4 or toks[1][0] != "l3c":
                raise ParseError(lineno, kcol, "header must be 'p l3c <n> <m>'")
            n = _int(toks[2][0], lineno, toks[2][1], "vertex count")
            m = _int(toks[3][0], lineno, toks[3][1], "edge count")
            if n < 0 or m < 0:
                raise ParseError(lineno, kcol, "counts must be non-negative")
            header_line = lineno
            continue
        if n is None:
            raise ParseError(lineno, kcol, f"'{kind}' line before the header")

        def vertex(idx):
            tok, col = toks[idx]
            v = _int(tok, lineno, col, "vertex")
            if not 1 <= v <= n:
                raise ParseError(lineno, col, f"vertex {v} out of range 1..{n}")
            return v - 1

        if kind == "e":
            if len(toks) != 3:
                raise ParseError(lineno, kcol, "edge line must be 'e <u> <v>'")
            u, v = vertex(1), vertex(2)
            if u == v:
                raise ParseError(lineno, toks[2][1], f"self-loop at vertex {u + 1}")
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise ParseError(lineno, kcol, f"duplicate edge {u + 1} {v + 1}")
            seen_edges.add(key)
            edges.append(key)
        elif kind == "l":
            if not 3 <= len(toks) <= 5:
                raise ParseError(lineno, kcol, "list line must be 'l <v> <c1> [<c2> [<c3>]]'")
            v = vertex(1)
            if v in lists:
                raise ParseError(lineno, kcol, f"duplicate list for vertex {v + 1}")
            cols = []
            for tok, col in toks[2:]:
                c = _int(tok, lineno, col, "colour")
                if c not in (1, 2, 3):
                    raise ParseError(lineno, col, f"colour {c} out of range 1..3")
                if c in cols:
                    raise ParseError(lineno, col, f"colour {c} repeated")
                cols.append(c)
            lists[v] = frozenset(cols)
        else:
            raise ParseError(lineno, kcol, f"unknown line type {kind!r}")
    if n is None:
        raise ParseError(1, 1, "missing 'p l3c <n> <m>' header")
    if len(edges) != m:
        raise ParseError(header_line, 1, f"header announces {m} edges, found {len(edges)}")
    return Instance(Graph(range(n), edges), lists)


def _file_labels(inst: Instance) -> Dict[int, int]:
    return {v: i + 1 for i, v in enumerate(inst.graph.vertices)}


def emit_instance(inst: Instance, comments: Iterable[str] = ()) -> str:
    lab = _file_labels(inst)
    lines = [f"c {c}" for c in comments]
    lines.append(f"p l3c {inst.graph.n} {inst.graph.m}")
    for u, v in inst.graph.edges():
        lines.append(f"e {lab[u]} {lab[v]}")
    for v in inst.graph.vertices:
        lst = inst.lists[v]
        if lst != FULL:
            if not lst:
                raise ValueError(f"vertex {v} has an empty list, which the file format cannot express")
            lines.append("l {} {}".format(lab[v], " ".join(str(c) for c in sorted(lst))))
    return "\n".join(lines) + "\n"


def certificate_lines(inst: Instance, coloring: Mapping[int, int]) -> List[str]:
    lab = _file_labels(inst)
    return [f"v {lab[v]} {coloring[v]}" for v in inst.graph.vertices]


def parse_certificate(text: str) -> Tuple[Optional[str], Dict[int, int]]:
    """Read ``s`` and ``v`` lines; returns (answer, colouring with 0-indexed vertices)."""
    answer = None
    col: Dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _columns(raw)
        if not toks or toks[0][0] == "c":
            continue
        kind = toks[0][0]
        if kind == "s" and len(toks) == 2:
            answer = toks[1][0]
        elif kind == "v":
            if len(toks) != 3:
                raise ParseError(lineno, toks[0][1], "certificate line must be 'v <vertex> <colour>'")
            v = _int(toks[1][0], lineno, toks[1][1], "vertex")
            c = _int(toks[2][0], lineno, toks[2][1], "colour")
            if v - 1 in col:
                raise ParseError(lineno, toks[1][1], f"vertex {v} coloured twice")
            col[v - 1] = c
        else:
            raise ParseError(lineno, toks[0][1], f"unexpected line type {kind!r}")
    return answer, col


def build_report(answer: str, inst: Optional[Instance], coloring: Optional[Coloring], stats: Optional[dict],
                 config: Optional[dict], extra: Optional[dict] = None) -> dict:
    report = {
        "schema": REPORT_SCHEMA,
        "answer": answer,
        "certificate": None,
        "stats": stats,
        "config": config,
    }
    if inst is not None:
        report["instance"] = {"n": inst.graph.n, "m": inst.graph.m}
        if coloring is not None:
            lab = _file_labels(inst)
            report["certificate"] = {str(lab[v]): coloring[v] for v in inst.graph.vertices}
    if stats is not None:
        report["invariants"] = {
            "near_diameter_violations": stats.get("near_diameter_violations", 0),
            "b5_shrinkage_violations": stats.get("b5_shrinkage_violations", 0),
            "gating_violations": stats.get("gating_violations", 0),
            "total_violations": stats.get("invariant_violations", 0),
        }
    if extra:
        report.update(extra)
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def emit_report(report: dict, inst: Optional[Instance] = None, coloring: Optional[Coloring] = None) -> str:
    """Human-readable summary: ``s`` line, ``v`` lines on YES, ``c`` lines for stats."""
    lines = [f"s {report['answer']}"]
    if report["answer"] == "YES" and inst is not None and coloring is not None:
        lines += certificate_lines(inst, coloring)
    stats = report.get("stats")
    if stats:
        for key in ("instances", "total_nodes", "max_depth", "invariant_violations"):
            lines.append(f"c {key} {stats[key]}")
        for rule, k in stats["rule_applications"].items():
            lines.append(f"c rule {rule} {k}")
    return "\n".join(lines) + "\n"
