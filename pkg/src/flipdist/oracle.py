"""Breadth-first search over flip graphs: exact distances on small instances.

Four flip rules are supported: any directed cycle, directed cycles made only
of edges that still differ from a target, vertex flips at sources and sinks
other than the fixed vertex, and minimal dicuts whose interior has at most k
vertices.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from flipdist.corientations import FlipSequence, FlipStep
from flipdist.errors import CapExceeded, ValidationError
from flipdist.graph import Orientation

MODES = ("cycle", "cycle_restricted", "vertex", "cut_bounded")


@dataclass(frozen=True)
class Caps:
    states: int = 1_000_000
    cycles: int = 10_000

    @classmethod
    def from_env(cls, env: str | None = None) -> Caps:
        """Read ``states=N,cycles=M`` (either part optional) from FLIPDIST_CAPS."""
        text = os.environ.get("FLIPDIST_CAPS", "") if env is None else env
        values = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, val = part.partition("=")
            if not sep or key not in ("states", "cycles"):
                raise ValidationError(f"bad FLIPDIST_CAPS entry {part!r}")
            try:
                values[key] = int(val)
            except ValueError:
                raise ValidationError(f"bad FLIPDIST_CAPS value {val!r}") from None
        return cls(**values)


@dataclass(frozen=True)
class FlipMode:
    kind: str
    target: Orientation | None = None
    k: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODES:
            raise ValidationError(f"unknown flip mode {self.kind!r}")
        if (self.kind == "cycle_restricted") != (self.target is not None):
            raise ValidationError("a target orientation is required exactly for restricted cycle flips")
        if (self.kind == "cut_bounded") != (self.k is not None):
            raise ValidationError("an interior bound is required exactly for bounded cut flips")
        if self.k is not None and self.k < 1:
            raise ValidationError("interior bound must be at least 1")


def enumerate_simple_directed_cycles(O: Orientation, cap: int = 10_000, allowed: frozenset[int] | None = None) -> list[frozenset[int]]:
    """All simple directed cycles as edge-id sets, ordered by their sorted ids.

    Each cycle is found once, from its smallest vertex index, by backtracking
    over vertices with larger index.  ``allowed`` restricts the usable edges.
    """
    G = O.graph
    out: list[list[tuple[int, int]]] = [[] for _ in range(G.n)]
    for i, (a, b) in enumerate(G.end_index):
        if allowed is not None and i not in allowed:
            continue
        t = O.tail_index[i]
        out[t].append((i, b if t == a else a))
    found: list[frozenset[int]] = []
    for s in range(G.n):
        on_path = {s}
        path: list[int] = []
        stack = [iter(out[s])]
        while stack:
            step = next(stack[-1], None)
            if step is None:
                stack.pop()
                if path:
                    e = path.pop()
                    a, b = G.end_index[e]
                    on_path.discard(b if O.tail_index[e] == a else a)
                continue
            e, w = step
            if w == s:
                found.append(frozenset([*path, e]))
                if len(found) > cap:
                    raise CapExceeded(f"more than {cap} directed cycles")
            elif w > s and w not in on_path:
                on_path.add(w)
                path.append(e)
                stack.append(iter(out[w]))
    found.sort(key=sorted)
    return found


def _connected_subsets(O: Orientation, k: int, avoid: int) -> list[frozenset[int]]:
    """Connected vertex subsets of size at most ``k`` not containing ``avoid``."""
    G = O.graph
    nbrs = [set() for _ in range(G.n)]
    for a, b in G.end_index:
        nbrs[a].add(b)
        nbrs[b].add(a)
    seen: set[frozenset[int]] = set()
    frontier = [frozenset([v]) for v in range(G.n) if v != avoid]
    seen.update(frontier)
    for _ in range(k - 1):
        nxt = []
        for W in frontier:
            for v in W:
                for w in nbrs[v]:
                    if w != avoid and w not in W:
                        U = W | {w}
                        if U not in seen:
                            seen.add(U)
                            nxt.append(U)
        frontier = nxt
    return sorted(seen, key=lambda W: (len(W), sorted(W)))


def _cut_direction(O: Orientation, W: frozenset[int]) -> int:
    """+1 if every crossing edge leaves W, -1 if every one enters, 0 otherwise or if none cross."""
    G = O.graph
    leave = enter = 0
    for i, (a, b) in enumerate(G.end_index):
        if (a in W) != (b in W):
            if O.tail_index[i] in W:
                leave += 1
            else:
                enter += 1
    if leave and not enter:
        return 1
    if enter and not leave:
        return -1
    return 0


def _complement_connected(O: Orientation, W: frozenset[int]) -> bool:
    G = O.graph
    rest = [v for v in range(G.n) if v not in W]
    if not rest:
        return False
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        x = stack.pop()
        for i in G.incidence[x]:
            a, b = G.end_index[i]
            y = b if a == x else a
            if y not in W and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(rest)


def flip_moves(O: Orientation, mode: FlipMode, caps: Caps | None = None) -> list[tuple[FlipStep, Orientation]]:
    """Every single flip allowed by ``mode`` with its result, in a fixed order."""
    caps = caps or Caps()
    G = O.graph
    moves = []
    if mode.kind in ("cycle", "cycle_restricted"):
        allowed = None
        if mode.kind == "cycle_restricted":
            if mode.target.graph != G:
                raise ValidationError("target orientation is on another graph")
            allowed = O.differing(mode.target)
        for C in enumerate_simple_directed_cycles(O, caps.cycles, allowed):
            moves.append((FlipStep("cycle", edges=C), O.reverse_edges(C)))
    elif mode.kind == "vertex":
        top = G.require_top()
        for v in sorted(G.vertices):
            inc = G.incident(v)
            if v == top or not inc:
                continue
            outs = sum(1 for i in inc if O.tails[i] == v)
            if outs == len(inc):
                moves.append((FlipStep.up(v), O.reverse_edges(inc)))
            elif outs == 0:
                moves.append((FlipStep.down(v), O.reverse_edges(inc)))
    else:
        top = G.index[G.require_top()]
        for W in _connected_subsets(O, mode.k, top):
            if _cut_direction(O, W) == 0 or not _complement_connected(O, W):
                continue
            cut = [i for i, (a, b) in enumerate(G.end_index) if (a in W) != (b in W)]
            interior = frozenset(G.vertices[v] for v in W)
            moves.append((FlipStep("cut", interior=interior), O.reverse_edges(cut)))
    return moves


def flip_neighbors(O: Orientation, mode: FlipMode, caps: Caps | None = None) -> list[Orientation]:
    return [nb for _, nb in flip_moves(O, mode, caps)]


@dataclass(frozen=True)
class SearchResult:
    distance: int | None  # None: unreachable, or beyond max_depth when ``truncated``
    witness: FlipSequence | None
    explored: int
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "explored_states": self.explored,
            "reachable": self.distance is not None if not self.truncated else None,
            "depth_limited": self.truncated,
            "witness": self.witness.to_dict() if self.witness is not None else None,
        }


def bfs(X: Orientation, Y: Orientation, mode: FlipMode, caps: Caps | None = None, max_depth: int | None = None) -> SearchResult:
    """Shortest flip sequence from ``X`` to ``Y`` by breadth-first search.

    With ``max_depth`` the search stops after that many layers and reports a
    truncated result if ``Y`` was not met.
    """
    caps = caps or Caps()
    if X.graph != Y.graph:
        raise ValidationError("orientations of different graphs")
    goal = Y.key()
    parent: dict[bytes, tuple[bytes, FlipStep] | None] = {X.key(): None}
    layer = [X]
    depth = 0
    found = X.key() == goal
    while layer and not found:
        if max_depth is not None and depth >= max_depth:
            return SearchResult(None, None, len(parent), truncated=True)
        nxt = []
        for O in layer:
            k = O.key()
            for step, nb in flip_moves(O, mode, caps):
                nk = nb.key()
                if nk in parent:
                    continue
                parent[nk] = (k, step)
                if len(parent) > caps.states:
                    raise CapExceeded(f"more than {caps.states} states explored")
                if nk == goal:
                    found = True
                    break
                nxt.append(nb)
            if found:
                break
        layer = nxt
        depth += 1
    if not found:
        return SearchResult(None, None, len(parent))
    steps = []
    k = goal
    while parent[k] is not None:
        k, step = parent[k]
        steps.append(step)
    steps.reverse()
    return SearchResult(len(steps), FlipSequence(tuple(steps)), len(parent))


def bfs_distance(X: Orientation, Y: Orientation, mode: FlipMode, caps: Caps | None = None, max_depth: int | None = None) -> int | None:
    return bfs(X, Y, mode, caps, max_depth).distance


def all_distances(X: Orientation, mode: FlipMode, caps: Caps | None = None) -> dict[bytes, int]:
    """Distance from ``X`` to every reachable orientation, keyed by orientation key."""
    caps = caps or Caps()
    dist = {X.key(): 0}
    queue = deque([X])
    while queue:
        O = queue.popleft()
        d = dist[O.key()]
        for nb in flip_neighbors(O, mode, caps):
            k = nb.key()
            if k not in dist:
                dist[k] = d + 1
                if len(dist) > caps.states:
                    raise CapExceeded(f"more than {caps.states} states explored")
                queue.append(nb)
    return dist


def flip_graph(X: Orientation, mode: FlipMode, caps: Caps | None = None) -> tuple[list[Orientation], list[tuple[int, int]]]:
    """Connected component of ``X`` in the flip graph: states in BFS order and undirected edges."""
    caps = caps or Caps()
    index = {X.key(): 0}
    states = [X]
    edges = set()
    queue = deque([X])
    while queue:
        O = queue.popleft()
        i = index[O.key()]
        for nb in flip_neighbors(O, mode, caps):
            k = nb.key()
            j = index.get(k)
            if j is None:
                j = index[k] = len(states)
                if j >= caps.states:
                    raise CapExceeded(f"more than {caps.states} states explored")
                states.append(nb)
                queue.append(nb)
            edges.add((min(i, j), max(i, j)))
    return states, sorted(edges)
