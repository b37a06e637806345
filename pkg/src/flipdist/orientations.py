"""Alpha-orientations, the perfect-matching correspondence and cycle flips."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from flipdist.errors import ValidationError
from flipdist.graph import Graph, Orientation

AlphaSpec = Mapping[str, int]


def check_alpha(O: Orientation, alpha: AlphaSpec) -> bool:
    missing = [v for v in O.graph.vertices if v not in alpha]
    if missing:
        raise ValidationError(f"alpha undefined on {missing}")
    out = O.outdegrees()
    return all(out[v] == alpha[v] for v in O.graph.vertices)


@dataclass(frozen=True)
class Matching:
    graph: Graph
    bipartition: tuple[frozenset[str], frozenset[str]]
    matched: frozenset[int]

    def __post_init__(self) -> None:
        V1, V2 = self.bipartition
        if V1 & V2 or (V1 | V2) != set(self.graph.vertices):
            raise ValidationError("bipartition does not partition the vertex set")
        for e in self.graph.edges:
            u, v = e.ends
            if not ((u in V1 and v in V2) or (u in V2 and v in V1)):
                raise ValidationError(f"edge {e.id} does not join the two sides")
        covered: dict[str, int] = {}
        for i in self.matched:
            if not 0 <= i < self.graph.m:
                raise ValidationError(f"unknown matched edge id {i}")
            for x in self.graph.edges[i].ends:
                if x in covered:
                    raise ValidationError(f"vertex {x!r} covered by edges {covered[x]} and {i}")
                covered[x] = i
        uncovered = [v for v in self.graph.vertices if v not in covered]
        if uncovered:
            raise ValidationError(f"matching misses vertices {uncovered}")

    def to_dict(self) -> dict:
        V1, V2 = self.bipartition
        order = self.graph.index
        return {
            "graph": self.graph.to_dict(),
            "v1": sorted(V1, key=order.__getitem__),
            "v2": sorted(V2, key=order.__getitem__),
            "matched_edge_ids": sorted(self.matched),
        }

    @classmethod
    def from_dict(cls, d: Mapping, graph: Graph | None = None) -> Matching:
        if graph is None:
            graph = Graph.from_dict(d["graph"])
        try:
            return cls(graph, (frozenset(d["v1"]), frozenset(d["v2"])), frozenset(int(i) for i in d["matched_edge_ids"]))
        except KeyError as exc:
            raise ValidationError(f"matching object lacks {exc}") from None


def matching_alpha(G: Graph, bipartition: tuple[Iterable[str], Iterable[str]]) -> dict[str, int]:
    V1 = set(bipartition[0])
    return {v: 1 if v in V1 else G.degree(v) - 1 for v in G.vertices}


def matching_to_orientation(M: Matching) -> tuple[dict[str, int], Orientation]:
    V1, _ = M.bipartition
    tails = []
    for e in M.graph.edges:
        u, v = e.ends
        a, b = (u, v) if u in V1 else (v, u)
        tails.append(a if e.id in M.matched else b)
    return matching_alpha(M.graph, M.bipartition), Orientation(M.graph, tuple(tails))


def orientation_to_matching(O: Orientation, bipartition: tuple[Iterable[str], Iterable[str]]) -> Matching:
    V1, V2 = frozenset(bipartition[0]), frozenset(bipartition[1])
    alpha = matching_alpha(O.graph, (V1, V2))
    if not check_alpha(O, alpha):
        bad = [v for v, d in O.outdegrees().items() if d != alpha[v]]
        raise ValidationError(f"orientation violates the matching outdegrees at {sorted(bad)}")
    matched = frozenset(i for i, t in enumerate(O.tails) if t in V1)
    return Matching(O.graph, (V1, V2), matched)


def directed_cycle_order(O: Orientation, C: Iterable[int]) -> list[int]:
    """Edge ids of ``C`` in traversal order, or raise if ``C`` is not one directed cycle."""
    C = sorted(set(C))
    if not C:
        raise ValidationError("empty edge set is not a cycle")
    out: dict[str, int] = {}
    indeg: dict[str, int] = {}
    for i in C:
        t, h = O.tails[i], O.head(i)
        if t in out:
            raise ValidationError(f"vertex {t!r} has two outgoing cycle edges")
        out[t] = i
        indeg[h] = indeg.get(h, 0) + 1
    if set(out) != set(indeg) or any(d != 1 for d in indeg.values()):
        raise ValidationError("edge set is not consistently oriented (in/out degree not 1)")
    order = [C[0]]
    start = O.tails[C[0]]
    v = O.head(C[0])
    while v != start:
        order.append(out[v])
        v = O.head(out[v])
    if len(order) != len(C):
        raise ValidationError("edge set is a union of several cycles, not a single cycle")
    return order


def flip_cycle(O: Orientation, C: Iterable[int]) -> Orientation:
    C = list(C)
    directed_cycle_order(O, C)
    return O.reverse_edges(C)


def difference_cycles(X: Orientation, Y: Orientation) -> list[frozenset[int]]:
    """Split the differing edges into edge-disjoint directed cycles of ``X``.

    Walks from the lowest unused edge id, always leaving a vertex by its lowest
    unused differing out-edge, and cuts off a cycle whenever the walk revisits
    a vertex.
    """
    diff = sorted(X.differing(Y))
    outs: dict[str, list[int]] = {}
    bal: dict[str, int] = {}
    for i in diff:
        t, h = X.tails[i], X.head(i)
        outs.setdefault(t, []).append(i)
        bal[t] = bal.get(t, 0) + 1
        bal[h] = bal.get(h, 0) - 1
    if any(bal.values()):
        raise ValidationError("differing edges are not Eulerian in X; not alpha-orientations of a common alpha")
    used: set[int] = set()
    cycles: list[frozenset[int]] = []
    for first in diff:
        if first in used:
            continue
        path_vertices = [X.tails[first]]
        path_edges: list[int] = []
        pos = {X.tails[first]: 0}
        e = first
        while True:
            used.add(e)
            path_edges.append(e)
            v = X.head(e)
            if v in pos:
                k = pos[v]
                cycles.append(frozenset(path_edges[k:]))
                for w in path_vertices[k + 1:]:
                    del pos[w]
                del path_vertices[k + 1:]
                del path_edges[k:]
                if not path_edges:
                    break
            else:
                pos[v] = len(path_vertices)
                path_vertices.append(v)
            e = next(i for i in outs[v] if i not in used)
    return cycles


def dicut_size(G: Graph, alpha: AlphaSpec, U: Iterable[str]) -> int:
    U = set(U)
    return sum(alpha[v] for v in U) - G.induced_edge_count(U)
