"""Graphs, orientations, directed cuts and balance.

A :class:`Graph` is an undirected multigraph with string vertex identifiers,
edges numbered ``0..m-1`` and an optional fixed vertex ``top``.  An
:class:`Orientation` assigns a tail to every edge.  Both are immutable; all
operations here are pure.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from flipdist.errors import ValidationError

EdgeSet = frozenset  # frozenset[int] of edge ids


@dataclass(frozen=True)
class Edge:
    id: int
    ends: tuple[str, str]


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    top: str | None = None

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex identifier")
        known = set(self.vertices)
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise ValidationError(f"edge ids must be 0..m-1 in order, got {e.id} at position {i}")
            u, v = e.ends
            if u not in known or v not in known:
                raise ValidationError(f"edge {e.id} references unknown vertex")
            if u == v:
                raise ValidationError(f"edge {e.id} is a self-loop at {u!r}")
        if self.top is not None and self.top not in known:
            raise ValidationError(f"top {self.top!r} is not a vertex")

    @classmethod
    def build(cls, vertices: Iterable[str], ends: Iterable[tuple[str, str]], top: str | None = None) -> Graph:
        edges = tuple(Edge(i, (u, v)) for i, (u, v) in enumerate(ends))
        return cls(tuple(vertices), edges, top)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def end_index(self) -> tuple[tuple[int, int], ...]:
        idx = self.index
        return tuple((idx[e.ends[0]], idx[e.ends[1]]) for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex, by vertex index."""
        inc: list[list[int]] = [[] for _ in self.vertices]
        for i, (a, b) in enumerate(self.end_index):
            inc[a].append(i)
            inc[b].append(i)
        return tuple(tuple(x) for x in inc)

    def incident(self, v: str) -> tuple[int, ...]:
        return self.incidence[self.index[v]]

    def degree(self, v: str) -> int:
        return len(self.incident(v))

    def other_end(self, edge_id: int, v: str) -> str:
        u, w = self.edges[edge_id].ends
        return w if v == u else u

    def require_top(self) -> str:
        if self.top is None:
            raise ValidationError("graph has no fixed vertex top")
        return self.top

    def components(self, removed: Iterable[int] = ()) -> list[list[int]]:
        """Connected components (vertex indices) of the graph minus ``removed`` edges."""
        removed = set(removed)
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for i in self.incidence[x]:
                    if i in removed:
                        continue
                    a, b = self.end_index[i]
                    y = b if a == x else a
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced_edge_count(self, U: Iterable[str]) -> int:
        U = set(U)
        return sum(1 for e in self.edges if e.ends[0] in U and e.ends[1] in U)

    def with_top(self, top: str | None) -> Graph:
        return Graph(self.vertices, self.edges, top)

    def to_dict(self) -> dict:
        d: dict = {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "ends": list(e.ends)} for e in self.edges],
        }
        if self.top is not None:
            d["top"] = self.top
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> Graph:
        try:
            vertices = [str(v) for v in d["vertices"]]
            raw = list(d.get("edges", []))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed graph object: {exc}") from None
        seen_ids = set()
        for e in raw:
            if not isinstance(e, Mapping) or "id" not in e or "ends" not in e or len(e["ends"]) != 2:
                raise ValidationError(f"malformed edge record {e!r}")
            if e["id"] in seen_ids:
                raise ValidationError(f"duplicate edge id {e['id']}")
            seen_ids.add(e["id"])
        by_id = sorted(raw, key=lambda e: e["id"])
        edges = tuple(Edge(int(e["id"]), (str(e["ends"][0]), str(e["ends"][1]))) for e in by_id)
        return cls(tuple(vertices), edges, d.get("top"))


def parse_graph(text: bytes | str) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from None
    if not isinstance(d, dict):
        raise ValidationError("graph JSON must be an object")
    return Graph.from_dict(d)


def serialize_graph(G: Graph) -> str:
    return json.dumps(G.to_dict(), separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class Orientation:
    graph: Graph
    tails: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.tails) != self.graph.m:
            raise ValidationError(f"expected {self.graph.m} tails, got {len(self.tails)}")
        for e, t in zip(self.graph.edges, self.tails):
            if t not in e.ends:
                raise ValidationError(f"tail {t!r} of edge {e.id} is not one of its ends {e.ends}")

    @classmethod
    def from_arcs(cls, vertices: Iterable[str], arcs: Iterable[tuple[str, str]], top: str | None = None) -> Orientation:
        """Build graph and orientation together from a list of ``(tail, head)`` arcs."""
        arcs = list(arcs)
        G = Graph.build(vertices, arcs, top)
        return cls(G, tuple(u for u, _ in arcs))

    @cached_property
    def tail_index(self) -> tuple[int, ...]:
        idx = self.graph.index
        return tuple(idx[t] for t in self.tails)

    def tail(self, i: int) -> str:
        return self.tails[i]

    def head(self, i: int) -> str:
        return self.graph.other_end(i, self.tails[i])

    def arcs(self) -> list[tuple[str, str]]:
        return [(self.tails[i], self.head(i)) for i in range(self.graph.m)]

    def outdegree(self, v: str) -> int:
        return sum(1 for i in self.graph.incident(v) if self.tails[i] == v)

    def outdegrees(self) -> dict[str, int]:
        out = {v: 0 for v in self.graph.vertices}
        for t in self.tails:
            out[t] += 1
        return out

    def reverse_edges(self, edge_ids: Iterable[int]) -> Orientation:
        tails = list(self.tails)
        for i in edge_ids:
            tails[i] = self.graph.other_end(i, tails[i])
        return Orientation(self.graph, tuple(tails))

    def reversed(self) -> Orientation:
        return self.reverse_edges(range(self.graph.m))

    def differing(self, other: Orientation) -> frozenset[int]:
        if other.graph != self.graph:
            raise ValidationError("orientations of different graphs")
        return frozenset(i for i, (a, b) in enumerate(zip(self.tails, other.tails)) if a != b)

    def is_acyclic(self) -> bool:
        n = self.graph.n
        indeg = [0] * n
        out: list[list[int]] = [[] for _ in range(n)]
        for i, (a, b) in enumerate(self.graph.end_index):
            t = self.tail_index[i]
            h = b if t == a else a
            out[t].append(h)
            indeg[h] += 1
        stack = [v for v in range(n) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for h in out[v]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    stack.append(h)
        return seen == n

    def key(self) -> bytes:
        """Compact canonical state key (tail choice per edge as a bit string)."""
        ends = self.graph.edges
        return bytes(0 if t == e.ends[0] else 1 for t, e in zip(self.tails, ends))

    def to_dict(self, graph: object | None = None) -> dict:
        return {"graph": self.graph.to_dict() if graph is None else graph, "tails": list(self.tails)}

    @classmethod
    def from_dict(cls, d: Mapping, graph: Graph | None = None) -> Orientation:
        if graph is None:
            g = d.get("graph")
            if not isinstance(g, Mapping):
                raise ValidationError("orientation needs an inline graph object")
            graph = Graph.from_dict(g)
        if "tails" not in d:
            raise ValidationError("orientation object lacks 'tails'")
        return cls(graph, tuple(str(t) for t in d["tails"]))


@dataclass(frozen=True)
class Dicut:
    edges: frozenset[int]
    interior: frozenset[str]
    positive: bool

    def sort_key(self) -> tuple:
        return (min(self.interior) if self.interior else "", len(self.interior), sorted(self.edges))


def sources_and_sinks(O: Orientation) -> tuple[set[str], set[str]]:
    G = O.graph
    sources, sinks = set(), set()
    for v in G.vertices:
        inc = G.incident(v)
        outs = sum(1 for i in inc if O.tails[i] == v)
        if outs == len(inc):
            sources.add(v)
        if outs == 0:
            sinks.add(v)
    return sources, sinks


def crossing_edges(G: Graph, U: Iterable[str]) -> list[int]:
    U = set(U)
    return [e.id for e in G.edges if (e.ends[0] in U) != (e.ends[1] in U)]


def directed_cut(O: Orientation, U: Iterable[str]) -> Dicut:
    """The dicut induced by ``U`` (every crossing edge must leave ``U``)."""
    G = O.graph
    top = G.require_top()
    U = frozenset(U)
    if not U <= set(G.vertices):
        raise ValidationError("cut set contains unknown vertices")
    crossing = crossing_edges(G, U)
    if not crossing:
        raise ValidationError("empty crossing set: not a cut")
    for i in crossing:
        if O.tails[i] not in U:
            raise ValidationError(f"edge {i} ({O.tails[i]}->{O.head(i)}) enters the cut set")
    positive = top not in U
    interior = U if positive else frozenset(G.vertices) - U
    return Dicut(frozenset(crossing), interior, positive)


def is_minimal_cut(G: Graph, U: Iterable[str]) -> bool:
    """True iff both sides of the cut ``delta(U)`` induce connected subgraphs."""
    U = set(U)
    if not U or len(U) == G.n:
        return False
    for side in (U, set(G.vertices) - U):
        if not _induces_connected(G, side):
            return False
    return True


def _induces_connected(G: Graph, S: set[str]) -> bool:
    start = next(iter(S))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for i in G.incident(x):
            y = G.other_end(i, x)
            if y in S and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(S)


def balance_potential(O: Orientation, D: Iterable[int]) -> dict[str, int] | None:
    """Vertex potential stepping +1 along each arc of ``D`` and 0 across other edges.

    Roots get potential 0 (the top's component is rooted at top).  Returns None
    when some cycle meets ``D`` with unequal forward and backward counts.
    """
    G = O.graph
    D = set(D)
    if any(i < 0 or i >= G.m for i in D):
        raise ValidationError("edge set references unknown edge ids")
    p: list[int | None] = [None] * G.n
    order = list(range(G.n))
    if G.top is not None:
        t = G.index[G.top]
        order.remove(t)
        order.insert(0, t)
    tails = O.tail_index
    for root in order:
        if p[root] is not None:
            continue
        p[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for i in G.incidence[x]:
                a, b = G.end_index[i]
                y = b if a == x else a
                if i in D:
                    step = 1 if tails[i] == x else -1
                else:
                    step = 0
                want = p[x] + step
                if p[y] is None:
                    p[y] = want
                    queue.append(y)
                elif p[y] != want:
                    return None
    return {v: p[i] for i, v in enumerate(G.vertices)}


def is_balanced(O: Orientation, D: Iterable[int]) -> bool:
    return balance_potential(O, D) is not None


def canonical_interior(G: Graph, S: Iterable[int]) -> frozenset[str]:
    """Vertices not reachable from top once the edges ``S`` are deleted."""
    top = G.require_top()
    S = set(S)
    t = G.index[top]
    seen = {t}
    stack = [t]
    while stack:
        x = stack.pop()
        for i in G.incidence[x]:
            if i in S:
                continue
            a, b = G.end_index[i]
            y = b if a == x else a
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(v for i, v in enumerate(G.vertices) if i not in seen)
