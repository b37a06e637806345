from __future__ import annotations

import itertools

import networkx as nx
import pytest

from flipdist import fixtures as fx
from flipdist.errors import CapExceeded, ValidationError
from flipdist.graph import Orientation, directed_cut
from flipdist.lattice import FinitePoset, random_poset
from flipdist.oracle import FlipMode, bfs
from flipdist.orientations import check_alpha, matching_to_orientation
from flipdist.reductions import (
    ham_cycle_exists,
    jump_number_bruteforce,
    jumps,
    reduce_hamiltonicity,
    reduce_jump_number,
    reduce_two_ham,
    two_ham_decomposition,
)


def _nx(R):
    return nx.MultiGraph([e.ends for e in R.graph.edges])


@pytest.mark.parametrize("name,n", [("k4ham", 16), ("prism", 24)])
def test_hamiltonicity_reduction_structure(name, n):
    D = fx.DIGRAPHS[name]()
    R = reduce_hamiltonicity(D)
    g = _nx(R)
    assert R.graph.n == n == D.graph.n + 2 * D.graph.m
    assert nx.is_bipartite(g) and max(d for _, d in g.degree()) <= 3
    assert nx.is_biconnected(nx.Graph(g))
    assert set(R.metadata["vertices"]) == set(R.graph.vertices)
    # the two matchings differ on exactly the gadget 4-cycles
    assert len(R.x.matched ^ R.y.matched) == 4 * D.graph.n


def test_gadget_matching_follows_drawing():
    D = fx.k4ham()
    R = reduce_hamiltonicity(D)
    names = {frozenset(R.graph.edges[i].ends) for i in R.x.matched}
    # vertex 1 has out-arcs 0 (1->2), 4 (1->3) and in-arc 3 (4->1): second outgoing arc end with x_v
    assert frozenset({"a4-", "v:1"}) in names and frozenset({"a0-", "a3+"}) in names
    # vertex 3 has in-arcs 1 (2->3), 4 (1->3) and out-arc 2: first incoming arc end with x_v
    assert frozenset({"a1+", "v:3"}) in names and frozenset({"a4+", "a2-"}) in names


def test_hamiltonicity_rejects_source():
    D = Orientation.from_arcs(list("abcd"), [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("c", "d"), ("d", "b")])
    with pytest.raises(ValidationError, match="source"):
        reduce_hamiltonicity(D)


def test_ham_cycle_examples():
    assert ham_cycle_exists(fx.k4ham())
    assert not ham_cycle_exists(fx.prism())
    tri = Orientation.from_arcs(list("abc"), [("a", "b"), ("b", "c"), ("c", "a")])
    assert ham_cycle_exists(tri)


def test_ham_cycle_cap():
    with pytest.raises(CapExceeded):
        ham_cycle_exists(fx.circulant(20), cap=16)


def test_two_ham_examples():
    assert two_ham_decomposition(fx.z5circ())
    # two disjoint copies of the Z_5 circulant
    vs = [f"{s}{i}" for s in "pq" for i in range(5)]
    arcs = [(f"{s}{i}", f"{s}{(i + k) % 5}") for s in "pq" for k in (1, 2) for i in range(5)]
    assert not two_ham_decomposition(Orientation.from_arcs(vs, arcs))


def test_two_ham_z6_regression():
    # brute-force value, kept as a regression fixture
    assert two_ham_decomposition(fx.z6circ()) is False


def test_two_ham_reduction():
    G, alpha, X, Y = reduce_two_ham(fx.z5circ())
    assert set(alpha.values()) == {2}
    assert check_alpha(X, alpha) and check_alpha(Y, alpha)
    assert all(X.tails[i] == Y.head(i) for i in range(G.m))


def test_two_ham_reduction_rejects_cycle():
    with pytest.raises(ValidationError):
        reduce_two_ham(fx.circulant(4, steps=(1,)))


def test_jump_number_examples():
    chain = FinitePoset(tuple("abcd"), (("a", "b"), ("b", "c"), ("c", "d")))
    assert jump_number_bruteforce(chain) == 0
    for n in range(1, 6):
        assert jump_number_bruteforce(FinitePoset(tuple(f"x{i}" for i in range(n)), ())) == n - 1
    two_chains = FinitePoset(tuple("abcd"), (("a", "b"), ("c", "d")))
    assert jump_number_bruteforce(two_chains) == 1


def test_jump_number_matches_full_enumeration():
    for seed in range(15):
        P = random_poset(6, 0.3, seed)
        best = min(
            jumps(P, list(order))
            for order in itertools.permutations(P.elements)
            if all(order.index(a) < order.index(b) for a, b in P.covers)
        )
        assert jump_number_bruteforce(P) == best


def test_jump_number_cap():
    with pytest.raises(CapExceeded):
        jump_number_bruteforce(FinitePoset(tuple(f"x{i}" for i in range(11)), ()))


def test_jump_reduction_chain2():
    G, X, Y = reduce_jump_number(fx.chain2())
    assert G.n == 3 and G.top == "top"
    assert bfs(X, Y, FlipMode("cut_bounded", k=2)).distance == 1
    # every fixed-vertex edge on its own forms a flippable dicut
    for v in ("a", "b"):
        assert directed_cut(X, set(G.vertices) - {"top"}).positive


def test_jump_reduction_antichain():
    P = fx.antichain3()
    _, X, Y = reduce_jump_number(P)
    assert bfs(X, Y, FlipMode("cut_bounded", k=2)).distance == 3
    assert jump_number_bruteforce(P) == 2


def test_jump_reduction_rejects_tall_poset():
    with pytest.raises(ValidationError):
        reduce_jump_number(FinitePoset(tuple("abc"), (("a", "b"), ("b", "c"))))
