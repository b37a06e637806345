"""Graphviz DOT text with canonically sorted nodes and edges."""

from __future__ import annotations

import json
from collections import defaultdict
from typing import Mapping, Sequence


def _q(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def undirected_dot(name: str, labels: Sequence[str], edges: Sequence[tuple[int, int]]) -> str:
    lines = [f"graph {_q(name)} {{"]
    for i, lbl in enumerate(labels):
        lines.append(f"  n{i} [label={_q(lbl)}];")
    for a, b in sorted((min(a, b), max(a, b)) for a, b in edges):
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_dot(name: str, labels: Sequence[str], covers: Sequence[tuple[int, int]], rank: Mapping[int, int]) -> str:
    """Upward drawing: bottom rank first, one ``rank=same`` row per level."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;"]
    for i, lbl in enumerate(labels):
        lines.append(f"  n{i} [label={_q(lbl)}];")
    rows: dict[int, list[int]] = defaultdict(list)
    for i, r in rank.items():
        rows[r].append(i)
    for r in sorted(rows):
        members = " ".join(f"n{i};" for i in sorted(rows[r]))
        lines.append(f"  {{ rank=same; {members} }}")
    for a, b in sorted(covers):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def orientation_dot(name: str, vertices: Sequence[str], arcs: Sequence[tuple[str, str]]) -> str:
    lines = [f"digraph {_q(name)} {{"]
    for v in vertices:
        lines.append(f"  {_q(v)};")
    for i, (t, h) in enumerate(arcs):
        lines.append(f"  {_q(t)} -> {_q(h)} [label={_q(str(i))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
