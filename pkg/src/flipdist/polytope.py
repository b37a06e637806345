"""Partition matroids and the adjacency test for vertices of a common base polytope.

Two common bases A, B are adjacent iff the exchange graph of A towards B in
the first matroid and of B towards A in the second matroid both have a unique
perfect matching, and those two matchings together form one cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import networkx as nx

from flipdist.errors import ValidationError
from flipdist.graph import Graph, Orientation


@dataclass(frozen=True)
class PartitionMatroid:
    ground: tuple[str, ...]
    class_of: Mapping[str, str]
    capacity: Mapping[str, int]

    def __post_init__(self) -> None:
        if len(set(self.ground)) != len(self.ground):
            raise ValidationError("duplicate ground elements")
        for x in self.ground:
            if x not in self.class_of:
                raise ValidationError(f"element {x!r} has no class")
            if self.class_of[x] not in self.capacity:
                raise ValidationError(f"class {self.class_of[x]!r} has no capacity")
        extra = set(self.class_of) - set(self.ground)
        if extra:
            raise ValidationError(f"classes given for unknown elements {sorted(extra)}")
        if any(c <= 0 for c in self.capacity.values()):
            raise ValidationError("capacities must be positive")

    def counts(self, S: Iterable[str]) -> dict[str, int]:
        out: dict[str, int] = {}
        for x in S:
            if x not in self.class_of:
                raise ValidationError(f"unknown element {x!r}")
            c = self.class_of[x]
            out[c] = out.get(c, 0) + 1
        return out

    def is_independent(self, S: Iterable[str]) -> bool:
        S = set(S)
        return all(k <= self.capacity[c] for c, k in self.counts(S).items())

    def is_basis(self, S: Iterable[str]) -> bool:
        S = set(S)
        got = self.counts(S)
        return all(got.get(c, 0) == cap for c, cap in self.capacity.items())

    def to_dict(self) -> dict:
        return {
            "ground": list(self.ground),
            "classes": {x: self.class_of[x] for x in self.ground},
            "capacities": dict(sorted(self.capacity.items())),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> PartitionMatroid:
        try:
            return cls(tuple(d["ground"]), dict(d["classes"]), {c: int(k) for c, k in d["capacities"].items()})
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValidationError(f"malformed matroid object: {exc}") from None


@dataclass(frozen=True)
class BipartiteExchange:
    left: frozenset[str]
    right: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if i not in self.left or j not in self.right:
                raise ValidationError(f"edge ({i}, {j}) does not join left to right")


def exchangeability_graph(M: PartitionMatroid, B: Iterable[str], F: Iterable[str]) -> BipartiteExchange:
    """Pairs (i, j), i in B - F and j in F - B, such that B - i + j is a basis."""
    B, F = frozenset(B), frozenset(F)
    if not M.is_basis(B):
        raise ValidationError("first set is not a basis")
    left, right = B - F, F - B
    edges = frozenset((i, j) for i in left for j in right if M.is_basis((B - {i}) | {j}))
    return BipartiteExchange(left, right, edges)


def same_class_exchanges(M: PartitionMatroid, B: Iterable[str], F: Iterable[str]) -> frozenset[tuple[str, str]]:
    """Shortcut for partition matroids: an exchange is valid iff both elements share a class."""
    B, F = frozenset(B), frozenset(F)
    return frozenset((i, j) for i in B - F for j in F - B if M.class_of[i] == M.class_of[j])


@dataclass(frozen=True)
class MatchingResult:
    status: str  # "unique" | "none" | "multiple"
    matching: frozenset[tuple[str, str]] | None = None

    @property
    def unique(self) -> bool:
        return self.status == "unique"


def unique_perfect_matching(H: BipartiteExchange) -> MatchingResult:
    if len(H.left) != len(H.right):
        return MatchingResult("none")
    adj: dict[str, list[str]] = {i: [] for i in H.left}
    for i, j in sorted(H.edges):
        adj[i].append(j)
    match_of_right: dict[str, str] = {}

    def augment(i: str, seen: set[str]) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_of_right or augment(match_of_right[j], seen):
                match_of_right[j] = i
                return True
        return False

    for i in sorted(H.left):
        if not augment(i, set()):
            return MatchingResult("none")
    matching = frozenset((i, j) for j, i in match_of_right.items())
    # A second perfect matching exists iff there is an alternating cycle:
    # unmatched edges left -> right, matched edges right -> left.
    d = nx.DiGraph()
    d.add_nodes_from(("L", i) for i in H.left)
    d.add_nodes_from(("R", j) for j in H.right)
    for i, j in H.edges:
        if (i, j) in matching:
            d.add_edge(("R", j), ("L", i))
        else:
            d.add_edge(("L", i), ("R", j))
    if not nx.is_directed_acyclic_graph(d):
        return MatchingResult("multiple", matching)
    return MatchingResult("unique", matching)


@dataclass(frozen=True)
class AdjacencyReport:
    adjacent: bool
    plus: MatchingResult
    minus: MatchingResult
    single_cycle: bool


def adjacency_report(A: Iterable[str], B: Iterable[str], Mp: PartitionMatroid, Mm: PartitionMatroid) -> AdjacencyReport:
    A, B = frozenset(A), frozenset(B)
    for M in (Mp, Mm):
        for S in (A, B):
            if not M.is_basis(S):
                raise ValidationError("sets must be common bases of both matroids")
    if A == B:
        raise ValidationError("adjacency needs two distinct bases")
    plus = unique_perfect_matching(exchangeability_graph(Mp, A, B))
    minus = unique_perfect_matching(exchangeability_graph(Mm, B, A))
    single = False
    if plus.unique and minus.unique:
        g = nx.MultiGraph()
        g.add_nodes_from(A ^ B)
        g.add_edges_from(plus.matching)
        g.add_edges_from(minus.matching)
        single = nx.is_connected(g) and all(d == 2 for _, d in g.degree())
    return AdjacencyReport(plus.unique and minus.unique and single, plus, minus, single)


def polytope_adjacent(A: Iterable[str], B: Iterable[str], Mp: PartitionMatroid, Mm: PartitionMatroid) -> bool:
    return adjacency_report(A, B, Mp, Mm).adjacent


def edge_name(i: int) -> str:
    return f"e{i}"


def matching_matroids(G: Graph, bipartition: tuple[Iterable[str], Iterable[str]]) -> tuple[PartitionMatroid, PartitionMatroid]:
    """Perfect matchings as common bases: one class per vertex on each side."""
    V1 = set(bipartition[0])
    ground = tuple(edge_name(e.id) for e in G.edges)
    plus, minus = {}, {}
    for e in G.edges:
        u, v = e.ends
        a, b = (u, v) if u in V1 else (v, u)
        plus[edge_name(e.id)] = f"v1:{a}"
        minus[edge_name(e.id)] = f"v2:{b}"
    return (
        PartitionMatroid(ground, plus, {c: 1 for c in set(plus.values())}),
        PartitionMatroid(ground, minus, {c: 1 for c in set(minus.values())}),
    )


def matching_basis(matched: Iterable[int]) -> frozenset[str]:
    return frozenset(edge_name(i) for i in matched)


def arc_name(i: int, tail: str) -> str:
    return f"e{i}>{tail}"


def alpha_matroids(G: Graph, alpha: Mapping[str, int]) -> tuple[PartitionMatroid, PartitionMatroid]:
    """Alpha-orientations as common bases on doubled arcs.

    Every edge contributes both of its directed arcs.  The first matroid picks
    exactly one arc per edge, the second picks alpha(v) arcs leaving each v.
    """
    ground, per_edge, per_vertex = [], {}, {}
    for e in G.edges:
        for t in e.ends:
            x = arc_name(e.id, t)
            ground.append(x)
            per_edge[x] = f"edge:{e.id}"
            per_vertex[x] = f"vertex:{t}"
    caps_v = {f"vertex:{v}": alpha[v] for v in G.vertices if alpha[v] > 0}
    used = {c for c in per_vertex.values()}
    if any(c not in caps_v for c in used):
        # a vertex with alpha 0 can never use its out-arcs; give them a class that stays empty
        raise ValidationError("alpha must be positive on every non-isolated vertex for this encoding")
    return (
        PartitionMatroid(tuple(ground), per_edge, {c: 1 for c in set(per_edge.values())}),
        PartitionMatroid(tuple(ground), per_vertex, caps_v),
    )


def orientation_basis(O: Orientation) -> frozenset[str]:
    return frozenset(arc_name(i, t) for i, t in enumerate(O.tails))
