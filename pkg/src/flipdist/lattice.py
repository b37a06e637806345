"""Finite posets and lattices: downsets, join-irreducibles and the digraph
whose c-orientation lattice reproduces a given distributive lattice."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import networkx as nx

from flipdist.errors import CapExceeded, ValidationError
from flipdist.graph import Graph, Orientation


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple[str, ...]
    covers: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError("duplicate poset elements")
        known = set(self.elements)
        for a, b in self.covers:
            if a not in known or b not in known:
                raise ValidationError(f"cover ({a}, {b}) names an unknown element")
            if a == b:
                raise ValidationError(f"cover ({a}, {a}) is a loop")
        if len(set(self.covers)) != len(self.covers):
            raise ValidationError("duplicate cover pair")
        g = self._digraph()
        if not nx.is_directed_acyclic_graph(g):
            raise ValidationError("cover relation has a cycle")
        for a, b in self.covers:
            # a cover is redundant if b is reachable from a by another route
            g.remove_edge(a, b)
            if nx.has_path(g, a, b):
                raise ValidationError(f"cover ({a}, {b}) is implied by transitivity")
            g.add_edge(a, b)

    def _digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.elements)
        g.add_edges_from(self.covers)
        return g

    @classmethod
    def from_relations(cls, elements: Iterable[str], relations: Iterable[tuple[str, str]]) -> FinitePoset:
        """Poset generated by arbitrary (lower, upper) pairs; covers are the transitive reduction."""
        elements = tuple(elements)
        g = nx.DiGraph()
        g.add_nodes_from(elements)
        g.add_edges_from(relations)
        if not nx.is_directed_acyclic_graph(g):
            raise ValidationError("relations contain a cycle")
        red = nx.transitive_reduction(g)
        pos = {v: i for i, v in enumerate(elements)}
        covers = sorted(red.edges(), key=lambda e: (pos[e[0]], pos[e[1]]))
        return cls(elements, tuple(covers))

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def up(self) -> dict[str, frozenset[str]]:
        """Strict up-set of every element."""
        g = self._digraph()
        return {v: frozenset(nx.descendants(g, v)) for v in self.elements}

    def leq(self, a: str, b: str) -> bool:
        return a == b or b in self.up[a]

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def lower_covers(self, v: str) -> list[str]:
        return [a for a, b in self.covers if b == v]

    def upper_covers(self, v: str) -> list[str]:
        return [b for a, b in self.covers if a == v]

    def height(self) -> int:
        """Number of elements in a longest chain."""
        if not self.elements:
            return 0
        return nx.dag_longest_path_length(self._digraph()) + 1

    def minimal(self) -> list[str]:
        lowers = {b for _, b in self.covers}
        return [v for v in self.elements if v not in lowers]

    def subposet(self, keep: Iterable[str]) -> FinitePoset:
        keep = set(keep)
        els = [v for v in self.elements if v in keep]
        rel = [(a, b) for a in els for b in self.up[a] if b in keep]
        return FinitePoset.from_relations(els, rel)

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "covers": [list(c) for c in self.covers]}

    @classmethod
    def from_dict(cls, d: Mapping) -> FinitePoset:
        try:
            return cls(tuple(str(v) for v in d["elements"]), tuple((str(a), str(b)) for a, b in d["covers"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed poset object: {exc}") from None


@dataclass(frozen=True)
class FiniteLattice:
    poset: FinitePoset

    def __post_init__(self) -> None:
        if not self.poset.elements:
            raise ValidationError("a lattice has at least one element")
        self._tables  # builds join and meet tables, raising if some pair lacks one

    @cached_property
    def _tables(self) -> tuple[dict[tuple[str, str], str], dict[tuple[str, str], str]]:
        # An element is the join of a and b iff its closed up-set equals the
        # intersection of theirs; likewise for meets with down-sets.
        P = self.poset
        els = P.elements
        bit = {v: 1 << i for i, v in enumerate(els)}
        up = {v: bit[v] | sum(bit[w] for w in P.up[v]) for v in els}
        down = {v: 0 for v in els}
        for v in els:
            for w in els:
                if up[w] & bit[v]:
                    down[v] |= bit[w]
        by_up = {m: v for v, m in up.items()}
        by_down = {m: v for v, m in down.items()}
        joins, meets = {}, {}
        for a, b in itertools.product(els, repeat=2):
            j, m = by_up.get(up[a] & up[b]), by_down.get(down[a] & down[b])
            if j is None or m is None:
                raise ValidationError("not a lattice: some pair lacks a unique join or meet")
            joins[a, b], meets[a, b] = j, m
        return joins, meets

    def join(self, a: str, b: str) -> str:
        return self._tables[0][a, b]

    def meet(self, a: str, b: str) -> str:
        return self._tables[1][a, b]

    @property
    def bottom(self) -> str:
        return self.poset.minimal()[0]

    def rank(self) -> dict[str, int]:
        """Length of a longest chain from the bottom (equals the rank in graded lattices)."""
        g = self.poset._digraph()
        r = {}
        for v in nx.topological_sort(g):
            r[v] = max((r[u] + 1 for u in g.predecessors(v)), default=0)
        return r

    def is_distributive(self) -> bool:
        els = self.poset.elements
        for a, b, c in itertools.product(els, repeat=3):
            if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)):
                return False
        return True


def lattice_from_covers(n: int, covers: Iterable[tuple[int, int]], names: list[str] | None = None) -> FiniteLattice:
    if names is None:
        names = [str(i) for i in range(n)]
    return FiniteLattice(FinitePoset(tuple(names), tuple((names[a], names[b]) for a, b in covers)))


def join_irreducibles(L: FiniteLattice) -> FinitePoset:
    P = L.poset
    J = [v for v in P.elements if len(P.lower_covers(v)) == 1]
    return P.subposet(J)


def _set_name(members: Iterable[str]) -> str:
    return "{" + ",".join(sorted(members)) + "}"


def downset_lattice(P: FinitePoset, cap: int = 4096) -> FiniteLattice:
    """Lattice of downsets ordered by inclusion; elements are named like ``{a,b}``."""
    below = {v: {u for u in P.elements if P.leq(u, v)} for v in P.elements}
    downsets: set[frozenset[str]] = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for D in frontier:
            for v in P.elements:
                if v not in D and below[v] - {v} <= D:
                    E = D | {v}
                    if E not in downsets:
                        downsets.add(E)
                        if len(downsets) > cap:
                            raise CapExceeded(f"more than {cap} downsets")
                        nxt.append(E)
        frontier = nxt
    order = sorted(downsets, key=lambda D: (len(D), sorted(D)))
    names = [_set_name(D) for D in order]
    covers = []
    for D, dn in zip(order, names):
        for v in P.elements:
            if v not in D and below[v] - {v} <= D:
                covers.append((dn, _set_name(D | {v})))
    return FiniteLattice(FinitePoset(tuple(names), tuple(sorted(covers, key=lambda c: (names.index(c[0]), names.index(c[1]))))))


def birkhoff_digraph(L: FiniteLattice, top: str = "top") -> Orientation:
    """Upward Hasse diagram of the join-irreducibles plus an arc from every
    source and every sink of it to a new fixed vertex."""
    if not L.is_distributive():
        raise ValidationError("lattice is not distributive")
    J = join_irreducibles(L)
    while top in J.elements:
        top += "'"
    arcs = list(J.covers)
    has_in = {b for _, b in J.covers}
    has_out = {a for a, _ in J.covers}
    for v in J.elements:
        if v not in has_in or v not in has_out:
            arcs.append((v, top))
    return Orientation.from_arcs([*J.elements, top], arcs, top=top)


def lattices_isomorphic(L1: FiniteLattice, L2: FiniteLattice) -> bool:
    """Isomorphism of the cover digraphs, with nodes labelled by rank."""
    def labelled(L: FiniteLattice) -> nx.DiGraph:
        g = L.poset._digraph()
        nx.set_node_attributes(g, L.rank(), "rank")
        return g

    g1, g2 = labelled(L1), labelled(L2)
    return nx.is_isomorphic(g1, g2, node_match=lambda a, b: a["rank"] == b["rank"])


def random_poset(n: int, p: float, seed: int, max_height: int | None = None) -> FinitePoset:
    """Random poset on ``p0..p{n-1}``: each pair i<j related with probability p.

    With ``max_height`` = 2 the elements are split into a lower and an upper
    level first, and only lower-upper pairs are candidates.
    """
    rng = random.Random(seed)
    names = [f"p{i}" for i in range(n)]
    rel = []
    if max_height == 2:
        level = [rng.random() < 0.5 for _ in range(n)]
        for i, j in itertools.permutations(range(n), 2):
            if not level[i] and level[j] and rng.random() < p:
                rel.append((names[i], names[j]))
    elif max_height is None:
        for i, j in itertools.combinations(range(n), 2):
            if rng.random() < p:
                rel.append((names[i], names[j]))
    else:
        raise ValidationError("max_height must be None or 2")
    return FinitePoset.from_relations(names, rel)


def lattice_graph(L: FiniteLattice) -> Graph:
    """Hasse diagram of ``L`` as an undirected graph (for export)."""
    return Graph.build(L.poset.elements, L.poset.covers)
