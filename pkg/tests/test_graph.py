from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from flipdist import fixtures as fx
from flipdist.errors import ValidationError
from flipdist.graph import (
    Graph,
    Orientation,
    canonical_interior,
    directed_cut,
    is_balanced,
    parse_graph,
    serialize_graph,
    sources_and_sinks,
)


def triangle() -> Orientation:
    return Orientation.from_arcs(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])


def test_parse_fig2_bundle():
    left, _, _ = fx.fig2()
    G = parse_graph(serialize_graph(left.graph).encode())
    assert (G.n, G.m) == (10, 13)


def test_parse_edgeless_graph():
    G = parse_graph(b'{"vertices":["a"],"edges":[]}')
    assert G.m == 0 and G.top is None


@pytest.mark.parametrize(
    "text",
    [
        '{"vertices":["a","b"],"edges":[{"id":0,"ends":["a","zz"]}]}',
        '{"vertices":["a","b"],"edges":[{"id":0,"ends":["a","b"]},{"id":0,"ends":["a","b"]}]}',
        '{"vertices":["a"],"edges":[{"id":0,"ends":["a","a"]}]}',
        '{"vertices":["a"],"edges":[],"top":"b"}',
        '{"vertices":["a"]',
    ],
)
def test_parse_rejects(text):
    with pytest.raises(ValidationError):
        parse_graph(text)


def test_multi_edges_allowed():
    G = Graph.build(["a", "b"], [("a", "b"), ("a", "b")])
    assert G.degree("a") == 2


def test_sources_and_sinks():
    assert sources_and_sinks(fx.fig7()["bottom"]) == ({"e"}, {"top"})
    assert sources_and_sinks(Orientation.from_arcs(["u", "v"], [("u", "v")])) == ({"u"}, {"v"})
    assert sources_and_sinks(triangle()) == (set(), set())


def test_isolated_vertex_is_source_and_sink():
    O = Orientation.from_arcs(["u", "v", "w"], [("u", "v")])
    srcs, sinks = sources_and_sinks(O)
    assert "w" in srcs and "w" in sinks


def test_directed_cut_at_source():
    cut = directed_cut(fx.fig7()["bottom"], {"e"})
    assert len(cut.edges) == 4 and cut.positive and cut.interior == {"e"}


def test_directed_cut_rejects_entering_edge():
    with pytest.raises(ValidationError, match="enters"):
        directed_cut(fx.fig7()["bottom"], {"d"})


def test_directed_cut_rejects_whole_vertex_set():
    O = fx.fig7()["bottom"]
    with pytest.raises(ValidationError):
        directed_cut(O, set(O.graph.vertices))


def test_negative_cut_interior_is_far_side():
    bottom = fx.fig7()["bottom"]
    # everything points into top, so {top} is entered: the complement is a negative dicut
    cut = directed_cut(bottom, {"b", "d", "e", "f"})
    assert cut.positive and cut.interior == {"b", "d", "e", "f"}
    flipped = bottom.reverse_edges(cut.edges)
    neg = directed_cut(flipped, {"top"})
    assert not neg.positive and neg.interior == {"b", "d", "e", "f"}


def _top_edges(G: Graph) -> set[int]:
    return set(G.incident("top"))


def brute_balanced(O: Orientation, D: set[int]) -> bool:
    """Every cycle of the underlying graph meets D equally often forwards and backwards."""
    G = O.graph
    # enumerate simple cycles of the undirected multigraph via edge subsets (small graphs only)
    for r in range(2, G.m + 1):
        for sub in itertools.combinations(range(G.m), r):
            deg: dict[str, list[int]] = {}
            for i in sub:
                for v in G.edges[i].ends:
                    deg.setdefault(v, []).append(i)
            if any(len(x) != 2 for x in deg.values()):
                continue
            # walk it to fix a traversal direction and check it is one cycle
            start = sub[0]
            v = O.head(start)
            total, used = 0, [start]
            total += 1 if start in D else 0
            while len(used) < len(sub):
                nxt = next(i for i in deg[v] if i != used[-1] and i not in used)
                fwd = O.tails[nxt] == v
                if nxt in D:
                    total += 1 if fwd else -1
                used.append(nxt)
                v = G.other_end(nxt, v)
            if len(used) != len(sub) or v != O.tails[start]:
                continue
            if total != 0:
                return False
    return True


def test_is_balanced_fig7_top_edges():
    bottom = fx.fig7()["bottom"]
    D = _top_edges(bottom.graph)
    assert is_balanced(bottom, D)
    assert brute_balanced(bottom, D)


def test_is_balanced_trivial_cases():
    assert is_balanced(triangle(), set())
    assert not is_balanced(triangle(), {0, 1, 2})


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 8)))
def test_is_balanced_matches_cycle_enumeration(D):
    bottom = fx.fig7()["bottom"]
    assert is_balanced(bottom, D) == brute_balanced(bottom, D)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 8)))
def test_is_balanced_invariant_under_reversal(D):
    bottom = fx.fig7()["bottom"]
    assert is_balanced(bottom, D) == is_balanced(bottom.reverse_edges(D), D)


def test_canonical_interior_examples():
    G = fx.fig7()["bottom"].graph
    assert canonical_interior(G, _top_edges(G)) == {"b", "d", "e", "f"}
    assert canonical_interior(G, G.incident("e")) == {"e"}
    assert canonical_interior(G, ()) == frozenset()


def test_canonical_interior_needs_top():
    with pytest.raises(ValidationError):
        canonical_interior(triangle().graph, ())


@pytest.mark.parametrize("U", [{"e"}, {"b", "d", "e", "f"}])
def test_cut_reversal_involution(U):
    O = fx.fig7()["bottom"]
    cut = directed_cut(O, U)
    back = O.reverse_edges(cut.edges)
    rest = set(O.graph.vertices) - U
    again = directed_cut(back, rest)
    assert again.edges == cut.edges
    assert canonical_interior(O.graph, cut.edges) == cut.interior


def test_serialization_round_trip_is_exact():
    for name in ("fig2", "fig7"):
        G = Graph.from_dict(fx.bundle(name)["graph"])
        text = serialize_graph(G)
        assert serialize_graph(parse_graph(text)) == text
        assert parse_graph(text) == G


def test_orientation_rejects_foreign_tail():
    G = Graph.build(["a", "b", "c"], [("a", "b")])
    with pytest.raises(ValidationError):
        Orientation(G, ("c",))
