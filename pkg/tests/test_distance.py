from __future__ import annotations

import itertools
import logging
import random

import pytest
from hypothesis import given, settings, strategies as st

from flipdist import fixtures as fx
from flipdist.corientations import FlipSequence, FlipStep, random_upward_walk, z_embedding
from flipdist.distance import (
    MINUS,
    PLUS,
    ZERO,
    DicutFamily,
    build_cut_poset,
    flip_interior,
    is_monotone,
    laminar_decompose,
    meet_route,
    monotone_sequence,
    verify_sequence,
    vertex_flip_distance,
)
from flipdist.errors import ValidationError
from flipdist.graph import Dicut, Graph, Orientation, directed_cut
from flipdist.oracle import FlipMode, all_distances, bfs_distance

from instances import random_acyclic_orientation, random_lattices

F = fx.fig7()


def test_decompose_fig7_bottom_top_is_one_cut():
    fam = laminar_decompose(F["bottom"], F["top"])
    assert len(fam) == 1
    (S,) = fam.cuts
    assert S.interior == {"b", "d", "e", "f"} and S.positive
    assert S.edges == set(F["bottom"].graph.incident("top"))


def test_decompose_identical_pair_is_empty():
    assert len(laminar_decompose(F["bottom"], F["bottom"])) == 0


def test_decompose_fig7_bottom_to_z0110():
    fam = laminar_decompose(F["bottom"], F["z0110"])
    assert [(S.interior, S.positive) for S in fam.cuts] == [({"d", "e"}, True)]


def test_decompose_rejects_other_c():
    ed = next(i for i, e in enumerate(F["bottom"].graph.edges) if set(e.ends) == {"e", "d"})
    with pytest.raises(ValidationError):
        laminar_decompose(F["bottom"], F["bottom"].reverse_edges([ed]))


def _family(*cuts: Dicut) -> DicutFamily:
    return DicutFamily(list(cuts))


def _path_graph() -> Graph:
    # top - a - b - c, a path so every suffix is a cut
    return Graph.build(["top", "a", "b", "c"], [("top", "a"), ("a", "b"), ("b", "c")], top="top")


def test_poset_single_maximal_cut():
    fam = laminar_decompose(F["bottom"], F["top"])
    P = build_cut_poset(fam, F["bottom"].graph)
    assert P.parent == [None] and P.weight == [1] and P.sign == [PLUS]


def test_poset_negative_outer_positive_inner():
    G = _path_graph()
    outer = Dicut(frozenset({0}), frozenset({"a", "b", "c"}), False)
    inner = Dicut(frozenset({2}), frozenset({"c"}), True)
    P = build_cut_poset(_family(outer, inner), G)
    assert P.parent == [None, 0]
    assert P.weight == [1, 0] and P.sign == [MINUS, ZERO]
    assert P.strict_interior == [{"a", "b"}, {"c"}]


def test_poset_agreeing_nested_pair():
    G = _path_graph()
    outer = Dicut(frozenset({0}), frozenset({"a", "b", "c"}), True)
    inner = Dicut(frozenset({2}), frozenset({"c"}), True)
    P = build_cut_poset(_family(outer, inner), G)
    assert P.weight == [1, 2] and P.sign == [PLUS, PLUS]


def test_poset_zero_cover_takes_own_sign():
    G = _path_graph()
    outer = Dicut(frozenset({0}), frozenset({"a", "b", "c"}), False)
    mid = Dicut(frozenset({1}), frozenset({"b", "c"}), True)
    inner = Dicut(frozenset({2}), frozenset({"c"}), False)
    P = build_cut_poset(_family(outer, mid, inner), G)
    assert P.weight == [1, 0, 1] and P.sign == [MINUS, ZERO, MINUS]


def test_flip_interior_single_vertex():
    S = directed_cut(F["bottom"], {"e"})
    seq, O = flip_interior(F["bottom"], S)
    assert [s.vertex for s in seq] == ["e"] and O == F["z0010"]


def test_flip_interior_whole_side():
    S = directed_cut(F["bottom"], {"b", "d", "e", "f"})
    seq, O = flip_interior(F["bottom"], S)
    assert [s.vertex for s in seq] == ["e", "d", "f", "b"]
    assert all(s.direction == "source_to_sink" for s in seq)
    assert O == F["top"] and verify_sequence(F["bottom"], seq, F["top"])


def test_flip_interior_rejects_non_dicut():
    bogus = Dicut(frozenset(F["bottom"].graph.incident("d")), frozenset({"d"}), True)
    with pytest.raises(ValidationError):
        flip_interior(F["bottom"], bogus)


def test_monotone_sequence_fig7_examples():
    assert len(monotone_sequence(F["bottom"], F["top"], strict=True)) == 4
    assert len(monotone_sequence(F["bottom"], F["bottom"], strict=True)) == 0
    seq = monotone_sequence(F["z0011"], F["z0110"], strict=True)
    assert sorted((s.vertex, s.direction) for s in seq) == [("d", "source_to_sink"), ("f", "sink_to_source")]


def test_vertex_flip_distance_examples():
    assert vertex_flip_distance(F["bottom"], F["top"]) == 4
    assert vertex_flip_distance(F["z0010"], F["z0111"]) == 2
    assert vertex_flip_distance(F["top"], F["top"]) == 0


def test_meet_route_examples():
    seq = meet_route(F["z0011"], F["z0110"])
    assert [(s.vertex, s.direction) for s in seq] == [("f", "sink_to_source"), ("d", "source_to_sink")]
    assert len(meet_route(F["top"], F["top"])) == 0
    seq = meet_route(F["bottom"], F["top"])
    assert len(seq) == 4 and all(s.direction == "source_to_sink" for s in seq)


def test_verify_sequence_examples():
    ups = FlipSequence(tuple(FlipStep.up(v) for v in "edfb"))
    assert verify_sequence(F["bottom"], ups, F["top"])
    assert not verify_sequence(F["bottom"], FlipSequence((FlipStep.up("d"),)), F["top"])
    assert verify_sequence(F["bottom"], FlipSequence(), F["bottom"])


def test_verify_sequence_checks_direction_tag():
    wrong = FlipSequence((FlipStep.down("e"),))
    assert not verify_sequence(F["bottom"], wrong, F["z0010"])


def test_all_fig7_pairs_against_oracle():
    names = list(F)
    for a, b in itertools.product(names, repeat=2):
        seq = monotone_sequence(F[a], F[b], strict=True)
        assert verify_sequence(F[a], seq, F[b]) and is_monotone(seq)
        assert len(seq) == bfs_distance(F[a], F[b], FlipMode("vertex"))


def test_random_pairs_against_oracle():
    for X, elements, _ in random_lattices(21, 30, cap=25):
        for A in elements:
            dist = all_distances(A, FlipMode("vertex"))
            for B in elements:
                seq = monotone_sequence(A, B, strict=True)
                assert verify_sequence(A, seq, B) and is_monotone(seq)
                assert len(seq) == dist[B.key()]


def test_sum_of_z_is_distance_from_minimum():
    for X, elements, _ in random_lattices(22, 20):
        dist = all_distances(elements[0], FlipMode("vertex"))
        for O in elements:
            assert sum(z_embedding(O).values()) == dist[O.key()]


def test_flip_counts_match_poset_prediction():
    for X, elements, _ in random_lattices(23, 30, cap=25):
        for A, B in itertools.product(elements, repeat=2):
            poset = build_cut_poset(laminar_decompose(A, B), A.graph)
            seq = monotone_sequence(A, B, strict=True)
            got = {v: up - down for v, (up, down) in seq.flip_counts().items()}
            want = {v: k for v, k in poset.predicted_counts().items() if k}
            assert got == want
            assert all(w >= 0 for w in poset.weight)
            assert all((s == ZERO) == (w == 0) for s, w in zip(poset.sign, poset.weight))


def test_family_properties_on_random_pairs():
    for X, elements, _ in random_lattices(24, 30, cap=25):
        for A, B in itertools.product(elements, repeat=2):
            fam = laminar_decompose(A, B)
            assert fam.laminar
            union = set()
            for S in fam.cuts:
                assert not union & S.edges
                union |= S.edges
                for i in S.edges:
                    assert (A.tails[i] in S.interior) == S.positive
            assert union == A.differing(B)
            for S, T in itertools.combinations(fam.cuts, 2):
                assert S.interior <= T.interior or T.interior <= S.interior or not S.interior & T.interior


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_monotone_equals_meet_route_length(seed):
    rng = random.Random(seed)
    base = random_acyclic_orientation(rng, rng.randint(2, 12), rng.randint(0, 10))
    A = random_upward_walk(base, rng.randint(0, 40), seed, up_bias=0.6)
    B = random_upward_walk(base, rng.randint(0, 40), seed + 1, up_bias=0.6)
    seq = monotone_sequence(A, B, strict=True)
    route = meet_route(A, B)
    za, zb = z_embedding(A), z_embedding(B)
    assert len(seq) == len(route) == sum(abs(za[v] - zb[v]) for v in za)
    assert verify_sequence(A, route, B) and route.is_monotone()


def test_grid_pair_is_monotone_and_exact():
    base = fx.grid_instance(8, 8)
    A = random_upward_walk(base, 600, 1)
    B = random_upward_walk(base, 300, 2)
    seq = monotone_sequence(A, B, strict=True)
    za, zb = z_embedding(A), z_embedding(B)
    assert len(seq) == sum(abs(za[v] - zb[v]) for v in za)
    assert verify_sequence(A, seq, B) and is_monotone(seq)


def test_cyclic_input_is_rejected():
    O = Orientation.from_arcs(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")], top="a")
    with pytest.raises(ValidationError, match="contract"):
        monotone_sequence(O, O)


def test_fallback_is_logged(monkeypatch, caplog):
    import flipdist.distance as dist

    def broken(*_args, **_kwargs):
        raise dist.InternalError("forced")

    monkeypatch.setattr(dist, "_monotone_steps", broken)
    with caplog.at_level(logging.WARNING, logger="flipdist.distance"):
        seq = dist.monotone_sequence(F["bottom"], F["top"])
    assert len(seq) == 4 and "falling back" in caplog.text
    with pytest.raises(dist.InternalError):
        dist.monotone_sequence(F["bottom"], F["top"], strict=True)
