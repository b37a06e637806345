"""Instance generators for three hardness reductions, plus exact brute-force
solvers for the source problems so each reduction can be checked end to end.

* Hamiltonicity of a subcubic digraph -> matching flip distance at most two.
* Splitting a 2-in-2-out digraph into two Hamiltonian cycles -> reversing
  every arc of a 2-orientation in two flips.
* Jump number of a height-two poset -> dicut flips with interiors of size at
  most two (distance minus one).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from flipdist.errors import CapExceeded, ValidationError
from flipdist.graph import Graph, Orientation
from flipdist.lattice import FinitePoset
from flipdist.orientations import Matching


@dataclass(frozen=True)
class ReductionOutput:
    graph: Graph
    x: Any  # Orientation or Matching
    y: Any
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        def dump(obj: Any) -> Any:
            if isinstance(obj, Matching):
                d = obj.to_dict()
                d.pop("graph")
                return d
            return {"tails": list(obj.tails)}

        return {"graph": self.graph.to_dict(), "x": dump(self.x), "y": dump(self.y), "metadata": self.metadata}


def _degrees(D: Orientation) -> tuple[dict[str, int], dict[str, int]]:
    out = {v: 0 for v in D.graph.vertices}
    inn = dict(out)
    for t, h in D.arcs():
        out[t] += 1
        inn[h] += 1
    return out, inn


def _vname(v: str) -> str:
    return f"v:{v}"


def _plus(i: int) -> str:
    return f"a{i}+"


def _minus(i: int) -> str:
    return f"a{i}-"


def reduce_hamiltonicity(D: Orientation) -> ReductionOutput:
    """Bipartite graph with two perfect matchings at flip distance two iff ``D`` is Hamiltonian.

    Every arc i becomes an edge between ``a{i}-`` (tail side) and ``a{i}+``
    (head side); every vertex v becomes ``v:{v}`` inside a 4-cycle gadget that
    ties its three arc ends together.  Planarity of ``D`` is the caller's
    business.
    """
    G = D.graph
    if G.n < 3:
        raise ValidationError("digraph needs at least three vertices")
    out, inn = _degrees(D)
    for v in G.vertices:
        if out[v] + inn[v] != 3:
            raise ValidationError(f"vertex {v!r} has degree {out[v] + inn[v]}, expected 3")
        if out[v] not in (1, 2):
            raise ValidationError(f"vertex {v!r} has outdegree {out[v]}; sources and sinks are not allowed")
    vertices = [_vname(v) for v in G.vertices]
    provenance: dict[str, dict[str, Any]] = {_vname(v): {"vertex": v} for v in G.vertices}
    ends: list[tuple[str, str]] = []
    kinds: list[dict[str, Any]] = []
    for i in range(G.m):
        vertices += [_plus(i), _minus(i)]
        provenance[_plus(i)] = {"arc": i, "end": "head"}
        provenance[_minus(i)] = {"arc": i, "end": "tail"}
        ends.append((_plus(i), _minus(i)))
        kinds.append({"arc": i})
    x_edges, y_edges = [], []
    side1 = {_minus(i) for i in range(G.m)}
    for v in G.vertices:
        ins = sorted(i for i in G.incident(v) if D.head(i) == v)
        outs = sorted(i for i in G.incident(v) if D.tails[i] == v)
        xv = _vname(v)
        if out[v] == 1:
            side1.add(xv)
            (e, f), (g,) = ins, outs
            gadget = [(_plus(e), xv), (_plus(f), xv), (_plus(e), _minus(g)), (_plus(f), _minus(g))]
            x_pick, y_pick = (0, 3), (1, 2)
        else:
            (e, f), (g,) = outs, ins
            gadget = [(_minus(e), xv), (_minus(f), xv), (_minus(e), _plus(g)), (_minus(f), _plus(g))]
            x_pick, y_pick = (1, 2), (0, 3)
        base = len(ends)
        ends += gadget
        kinds += [{"gadget": v}] * 4
        x_edges += [base + k for k in x_pick]
        y_edges += [base + k for k in y_pick]
    H = Graph.build(vertices, ends)
    V1 = frozenset(side1)
    V2 = frozenset(vertices) - V1
    X = Matching(H, (V1, V2), frozenset(x_edges))
    Y = Matching(H, (V1, V2), frozenset(y_edges))
    meta = {"vertices": provenance, "edges": kinds, "source": "hamiltonicity"}
    return ReductionOutput(H, X, Y, meta)


def reduce_two_ham(D: Orientation) -> tuple[Graph, dict[str, int], Orientation, Orientation]:
    out, inn = _degrees(D)
    bad = [v for v in D.graph.vertices if out[v] != 2 or inn[v] != 2]
    if bad:
        raise ValidationError(f"vertices {bad} are not 2-in-2-out")
    return D.graph, {v: 2 for v in D.graph.vertices}, D, D.reversed()


def _fresh_top(names: tuple[str, ...]) -> str:
    top = "top"
    while top in names:
        top += "'"
    return top


def reduce_jump_number(P: FinitePoset) -> tuple[Graph, Orientation, Orientation]:
    """Hasse diagram plus a fixed vertex joined to every element.

    In X the cover edges point upward and every element points to the fixed
    vertex; Y differs only on the fixed vertex's edges.
    """
    if P.height() > 2:
        raise ValidationError("poset has a chain of three elements")
    top = _fresh_top(P.elements)
    arcs = [*P.covers, *((v, top) for v in P.elements)]
    X = Orientation.from_arcs([*P.elements, top], arcs, top=top)
    Y = X.reverse_edges(range(len(P.covers), len(arcs)))
    return X.graph, X, Y


def jumps(P: FinitePoset, order: list[str]) -> int:
    return sum(1 for a, b in zip(order, order[1:]) if not P.leq(a, b))


def jump_number_bruteforce(P: FinitePoset, cap: int = 10) -> int:
    """Minimum number of jumps over all linear extensions, by branch and bound."""
    n = len(P)
    if n > cap:
        raise CapExceeded(f"poset has {n} elements, cap is {cap}")
    if n == 0:
        return 0
    below = {v: set(P.lower_covers(v)) for v in P.elements}
    best = n - 1

    def extend(placed: list[str], done: set[str], j: int) -> None:
        nonlocal best
        if j >= best:
            return
        if len(placed) == n:
            best = j
            return
        for v in P.elements:
            if v not in done and below[v] <= done:
                step = 0 if not placed or P.leq(placed[-1], v) else 1
                placed.append(v)
                done.add(v)
                extend(placed, done, j + step)
                done.discard(v)
                placed.pop()

    extend([], set(), 0)
    return best


def ham_cycle_exists(D: Orientation, cap: int = 16) -> bool:
    """Directed Hamiltonian cycle by depth-first backtracking from the first vertex."""
    G = D.graph
    if G.n > cap:
        raise CapExceeded(f"digraph has {G.n} vertices, cap is {cap}")
    if G.n == 0:
        return False
    succ: list[list[int]] = [[] for _ in range(G.n)]
    for i, (a, b) in enumerate(G.end_index):
        t = D.tail_index[i]
        succ[t].append(b if t == a else a)
    if G.n == 1:
        return False
    visited = [False] * G.n
    visited[0] = True

    def search(v: int, count: int) -> bool:
        if count == G.n:
            return 0 in succ[v]
        for w in succ[v]:
            if not visited[w]:
                visited[w] = True
                if search(w, count + 1):
                    return True
                visited[w] = False
        return False

    return search(0, 1)


def two_ham_decomposition(D: Orientation, cap: int = 16) -> bool:
    """Whether the arcs split into two directed Hamiltonian cycles.

    Tries every way of giving each vertex one out-arc per colour; a colour
    class is then a permutation, and both must be single cycles with their
    in-arcs also split one per colour.
    """
    G = D.graph
    out, inn = _degrees(D)
    if any(out[v] != 2 or inn[v] != 2 for v in G.vertices):
        raise ValidationError("digraph is not 2-in-2-out")
    if G.n > cap:
        raise CapExceeded(f"digraph has {G.n} vertices, cap is {cap}")
    outs = [[i for i in G.incidence[v] if D.tail_index[i] == v] for v in range(G.n)]
    head = [b if D.tail_index[i] == a else a for i, (a, b) in enumerate(G.end_index)]

    def single_cycle(arcs: list[int]) -> bool:
        nxt = {D.tail_index[i]: head[i] for i in arcs}
        if len(set(nxt.values())) != G.n:
            return False
        v, steps = 0, 0
        while True:
            v = nxt[v]
            steps += 1
            if v == 0:
                return steps == G.n
    for choice in itertools.product((0, 1), repeat=G.n):
        red = [outs[v][choice[v]] for v in range(G.n)]
        blue = [outs[v][1 - choice[v]] for v in range(G.n)]
        if single_cycle(red) and single_cycle(blue):
            return True
    return False
