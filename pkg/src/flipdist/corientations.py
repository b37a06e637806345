"""c-orientations: vertex and cut flips, rigid contraction, the lattice of
c-orientations under source flips, and the flip-count embedding.

A set of c-orientations is represented by any one member (the reference): an
orientation Y belongs to the set of X iff the edges on which they differ form a
balanced subdigraph of X.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from flipdist.errors import CapExceeded, InternalError, ValidationError
from flipdist.graph import Graph, Orientation, balance_potential, directed_cut, is_balanced

SOURCE_TO_SINK = "source_to_sink"
SINK_TO_SOURCE = "sink_to_source"


@dataclass(frozen=True)
class FlipStep:
    kind: str  # "cycle" | "vertex" | "cut"
    vertex: str | None = None
    direction: str | None = None
    edges: frozenset[int] | None = None
    interior: frozenset[str] | None = None

    @classmethod
    def up(cls, v: str) -> FlipStep:
        return cls("vertex", vertex=v, direction=SOURCE_TO_SINK)

    @classmethod
    def down(cls, v: str) -> FlipStep:
        return cls("vertex", vertex=v, direction=SINK_TO_SOURCE)

    def to_dict(self) -> dict:
        if self.kind == "vertex":
            return {"kind": "vertex", "vertex": self.vertex, "direction": self.direction}
        if self.kind == "cycle":
            return {"kind": "cycle", "edges": sorted(self.edges)}
        if self.kind == "cut":
            return {"kind": "cut", "interior": sorted(self.interior)}
        raise ValidationError(f"unknown flip kind {self.kind!r}")

    @classmethod
    def from_dict(cls, d: Mapping) -> FlipStep:
        kind = d.get("kind")
        if kind == "vertex":
            if d.get("direction") not in (SOURCE_TO_SINK, SINK_TO_SOURCE):
                raise ValidationError(f"bad vertex flip direction {d.get('direction')!r}")
            return cls("vertex", vertex=str(d["vertex"]), direction=d["direction"])
        if kind == "cycle":
            return cls("cycle", edges=frozenset(int(i) for i in d["edges"]))
        if kind == "cut":
            return cls("cut", interior=frozenset(str(v) for v in d["interior"]))
        raise ValidationError(f"unknown flip kind {kind!r}")


@dataclass(frozen=True)
class FlipSequence:
    steps: tuple[FlipStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[FlipStep]:
        return iter(self.steps)

    def flip_counts(self) -> dict[str, tuple[int, int]]:
        """Per vertex: (number of source-to-sink flips, number of sink-to-source flips)."""
        counts: dict[str, list[int]] = {}
        for s in self.steps:
            if s.kind == "vertex":
                c = counts.setdefault(s.vertex, [0, 0])
                c[0 if s.direction == SOURCE_TO_SINK else 1] += 1
        return {v: (a, b) for v, (a, b) in counts.items()}

    def is_monotone(self) -> bool:
        if any(s.kind != "vertex" for s in self.steps):
            return False
        return all(a == 0 or b == 0 for a, b in self.flip_counts().values())

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps]}

    @classmethod
    def from_dict(cls, d: Mapping) -> FlipSequence:
        return cls(tuple(FlipStep.from_dict(s) for s in d.get("steps", [])))


@dataclass(frozen=True)
class CInstance:
    """A graph with fixed vertex plus a reference member of the c-orientation set."""

    graph: Graph
    reference: Orientation

    def __post_init__(self) -> None:
        self.graph.require_top()
        if self.reference.graph != self.graph:
            raise ValidationError("reference orientation is on another graph")

    def contains(self, O: Orientation) -> bool:
        return O.graph == self.graph and same_c(self.reference, O)


def same_c(X: Orientation, Y: Orientation) -> bool:
    return is_balanced(X, X.differing(Y))


class FlipState:
    """Mutable orientation over vertex indices for fast replay of vertex flips."""

    def __init__(self, O: Orientation):
        G = O.graph
        self.graph = G
        self.inc = G.incidence
        self.ends = G.end_index
        self.tails = list(O.tail_index)
        self.top = G.index[G.top] if G.top is not None else -1

    def outdeg(self, v: int) -> int:
        t = self.tails
        return sum(1 for i in self.inc[v] if t[i] == v)

    def is_source(self, v: int) -> bool:
        t = self.tails
        return bool(self.inc[v]) and all(t[i] == v for i in self.inc[v])

    def is_sink(self, v: int) -> bool:
        t = self.tails
        return bool(self.inc[v]) and all(t[i] != v for i in self.inc[v])

    def flip(self, v: int) -> None:
        t, ends = self.tails, self.ends
        for i in self.inc[v]:
            a, b = ends[i]
            t[i] = b if t[i] == a else a

    def neighbors(self, v: int) -> Iterator[int]:
        for i in self.inc[v]:
            a, b = self.ends[i]
            yield b if a == v else a

    def orientation(self) -> Orientation:
        vs = self.graph.vertices
        return Orientation(self.graph, tuple(vs[i] for i in self.tails))


def _require_c_instance(O: Orientation) -> None:
    O.graph.require_top()
    if not O.graph.is_connected():
        raise ValidationError("c-orientation operations need a connected graph")


def vertex_flip(O: Orientation, v: str) -> Orientation:
    G = O.graph
    if v == G.top:
        raise ValidationError(f"{v!r} is the fixed vertex and cannot be flipped")
    if v not in G.index:
        raise ValidationError(f"unknown vertex {v!r}")
    inc = G.incident(v)
    if not inc:
        raise ValidationError(f"isolated vertex {v!r} has no flip")
    outs = sum(1 for i in inc if O.tails[i] == v)
    if 0 < outs < len(inc):
        raise ValidationError(f"{v!r} is neither a source nor a sink")
    return O.reverse_edges(inc)


def cut_flip(O: Orientation, U: Iterable[str]) -> Orientation:
    cut = directed_cut(O, U)
    return O.reverse_edges(cut.edges)


@dataclass(frozen=True)
class Contraction:
    x: Orientation
    y: Orientation
    vertex_map: dict[str, str]  # original vertex -> contracted vertex
    edge_map: tuple[int, ...]  # contracted edge id -> original edge id
    members: dict[str, tuple[str, ...]] = field(default_factory=dict)


def strong_components(O: Orientation) -> list[list[int]]:
    """Strongly connected components (vertex indices), iterative Tarjan."""
    G = O.graph
    n = G.n
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(G.end_index):
        t = O.tail_index[i]
        succ[t].append(b if t == a else a)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, k = work[-1]
            if k < len(succ[v]):
                work[-1] = (v, k + 1)
                w = succ[v][k]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    return comps


def contract_rigid(X: Orientation, Y: Orientation) -> Contraction:
    """Contract every strongly connected component of ``X`` to one vertex.

    Directed cycles keep their orientation in every member of the c-orientation
    set, so ``X`` and ``Y`` must agree inside each component.  A component
    holding the fixed vertex keeps its name.
    """
    G = X.graph
    if Y.graph != G:
        raise ValidationError("orientations of different graphs")
    comps = strong_components(X)
    comp_of = [0] * G.n
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    names = []
    for members in comps:
        vs = [G.vertices[v] for v in members]
        if G.top is not None and G.top in vs:
            names.append(G.top)
        elif len(vs) == 1:
            names.append(vs[0])
        else:
            names.append("+".join(sorted(vs)))
    if len(set(names)) != len(names) or any(n in G.index and n not in [G.vertices[v] for v in comps[c]] for c, n in enumerate(names)):
        raise ValidationError("contracted vertex names collide with existing identifiers")
    vertex_map = {G.vertices[v]: names[comp_of[v]] for v in range(G.n)}
    edge_map, ends, xt, yt = [], [], [], []
    for e in G.edges:
        a, b = G.end_index[e.id]
        if comp_of[a] == comp_of[b]:
            if X.tails[e.id] != Y.tails[e.id]:
                raise ValidationError(f"edge {e.id} inside a rigid cycle differs between X and Y; not the same c")
            continue
        edge_map.append(e.id)
        ends.append((vertex_map[e.ends[0]], vertex_map[e.ends[1]]))
        xt.append(vertex_map[X.tails[e.id]])
        yt.append(vertex_map[Y.tails[e.id]])
    order = sorted(range(len(comps)), key=lambda c: comps[c][0])
    top = vertex_map[G.top] if G.top is not None else None
    H = Graph.build([names[c] for c in order], ends, top)
    members = {names[c]: tuple(G.vertices[v] for v in comps[c]) for c in order}
    return Contraction(Orientation(H, tuple(xt)), Orientation(H, tuple(yt)), vertex_map, tuple(edge_map), members)


def _flip_to_minimum(state: FlipState) -> list[int]:
    """Flip the lexicographically smallest non-top sink until none is left."""
    G = state.graph
    key = G.vertices
    heap = [(key[v], v) for v in range(G.n) if v != state.top and state.is_sink(v)]
    heapq.heapify(heap)
    flipped = []
    while heap:
        _, v = heapq.heappop(heap)
        if not state.is_sink(v):
            continue
        state.flip(v)
        flipped.append(v)
        for w in state.neighbors(v):
            if w != state.top and state.is_sink(w):
                heapq.heappush(heap, (key[w], w))
    return flipped


def lattice_minimum(X: Orientation) -> Orientation:
    _require_c_instance(X)
    if not X.is_acyclic():
        raise ValidationError("lattice operations need an acyclic orientation; contract rigid cycles first")
    state = FlipState(X)
    _flip_to_minimum(state)
    return state.orientation()


def upward_path(X: Orientation) -> tuple[Orientation, list[str]]:
    """Lattice minimum of ``X`` and a source-flip path from it up to ``X``.

    Each step flips the smallest source whose flip count is still below its
    count in ``X``; the target counts come from :func:`z_from_potential`.
    Flipping a source merely because it differs from ``X`` on some incident
    edge can overshoot and get stuck, so the counts steer the walk.
    """
    bottom = lattice_minimum(X)
    G = X.graph
    goal_z = z_from_potential(X, bottom)
    goal = [goal_z.get(v, 0) for v in G.vertices]
    count = [0] * G.n
    state = FlipState(bottom)
    key = G.vertices

    def candidate(v: int) -> bool:
        return v != state.top and count[v] < goal[v] and state.is_source(v)

    heap = [(key[v], v) for v in range(G.n) if candidate(v)]
    heapq.heapify(heap)
    path = []
    while heap:
        _, v = heapq.heappop(heap)
        if not candidate(v):
            continue
        state.flip(v)
        count[v] += 1
        path.append(key[v])
        for w in (v, *state.neighbors(v)):
            if candidate(w):
                heapq.heappush(heap, (key[w], w))
    if state.tails != list(X.tail_index) or count != goal:
        raise InternalError("upward path stalled below the target orientation")
    return bottom, path


def z_embedding(X: Orientation) -> dict[str, int]:
    """Number of flips of each non-top vertex on an upward path from the minimum to ``X``."""
    _, path = upward_path(X)
    z = {v: 0 for v in X.graph.vertices if v != X.graph.top}
    for v in path:
        z[v] += 1
    return z


def z_from_potential(X: Orientation, bottom: Orientation | None = None) -> dict[str, int]:
    """Flip counts read off the balance potential of the difference to the minimum.

    Each edge changes direction once per flip of either end, so the flip counts
    are the potential of ``bottom -> X`` differences, shifted to vanish at top.
    Independent of any flip path; used to cross-check :func:`z_embedding`.
    """
    if bottom is None:
        bottom = lattice_minimum(X)
    p = balance_potential(bottom, bottom.differing(X))
    if p is None:
        raise ValidationError("orientations are not in the same c-orientation set")
    top = X.graph.require_top()
    return {v: p[top] - p[v] for v in X.graph.vertices if v != top}


def enumerate_lattice(X: Orientation, cap: int = 100_000) -> tuple[list[Orientation], list[tuple[int, int]]]:
    """All c-orientations of the set of ``X`` and their source-flip cover pairs.

    Breadth-first from the minimum, trying sources in vertex-identifier order.
    Cover pairs are ``(lower, upper)`` indices into the returned element list.
    """
    bottom = lattice_minimum(X)
    G = X.graph
    order = sorted(range(G.n), key=lambda v: G.vertices[v])
    start = FlipState(bottom)
    seen = {tuple(start.tails): 0}
    elements = [bottom]
    covers = []
    queue = deque([start.tails])
    while queue:
        tails = queue.popleft()
        i = seen[tuple(tails)]
        for v in order:
            if v == start.top or not start.inc[v]:
                continue
            if any(tails[e] != v for e in start.inc[v]):
                continue
            nxt = list(tails)
            for e in start.inc[v]:
                a, b = start.ends[e]
                nxt[e] = b if nxt[e] == a else a
            k = tuple(nxt)
            j = seen.get(k)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise CapExceeded(f"lattice has more than {cap} elements")
                seen[k] = j
                vs = G.vertices
                elements.append(Orientation(G, tuple(vs[t] for t in nxt)))
                queue.append(nxt)
            covers.append((i, j))
    return elements, covers


def random_upward_walk(X: Orientation, steps: int, seed: int, *, up_bias: float = 1.0) -> Orientation:
    """Random walk in the lattice starting at ``X``.

    Each step flips a uniformly chosen flippable vertex; with probability
    ``up_bias`` a source is chosen (moving up), otherwise a sink.
    """
    import random

    _require_c_instance(X)
    rng = random.Random(seed)
    state = FlipState(X)
    n = X.graph.n
    cand = [v for v in range(n) if v != state.top and state.inc[v]]
    for _ in range(steps):
        want_up = rng.random() < up_bias
        for _attempt in range(50 * n):
            v = rng.choice(cand)
            if state.is_source(v) if want_up else state.is_sink(v):
                state.flip(v)
                break
        else:
            break
    return state.orientation()
