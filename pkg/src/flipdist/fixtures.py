"""Built-in instances, transcribed from the drawings they reproduce.

Every fixture is a plain dict bundle; :func:`bundle` returns its JSON-ready
form and the ``load_*`` helpers return library objects.
"""

from __future__ import annotations

from flipdist.errors import ValidationError
from flipdist.graph import Graph, Orientation

TOP = "top"

# Ten-vertex bipartite graph with outdegree prescription (alpha shown on vertices).
_FIG2_VERTICES = ["a", "b", "c", "d", "e", "f", "g", "h", "j", "k"]
_FIG2_LEFT = [
    ("a", "b"), ("b", "d"), ("c", "a"), ("g", "d"), ("j", "f"), ("d", "h"), ("h", "k"),
    ("e", "c"), ("c", "f"), ("f", "g"), ("g", "k"), ("k", "j"), ("j", "e"),
]
_FIG2_ALPHA = {"a": 1, "b": 1, "c": 2, "d": 1, "e": 1, "f": 1, "g": 2, "h": 1, "j": 2, "k": 1}
_FIG2_CYCLE = [7, 8, 9, 10, 11, 12]  # e->c->f->g->k->j->e

# Circled / squared vertex classes; circled vertices carry alpha = 1.
FIG4_V1 = ["a", "d", "e", "f", "k"]
FIG4_V2 = ["b", "c", "g", "h", "j"]

# Edge labels 1..8 of the two common bases drawn on the same graph.
FIG6_LABELS = {
    "1": ("a", "c"), "2": ("a", "b"), "3": ("b", "d"), "4": ("d", "g"),
    "5": ("f", "g"), "6": ("c", "f"), "7": ("e", "j"), "8": ("h", "k"),
}
FIG6_A = ["1", "3", "5", "7", "8"]
FIG6_B = ["2", "4", "6", "7", "8"]

# Chain of four alternating 4-cycles C1..C4 closed by the 4-cycle r-s-a-t.
_FIG3_VERTICES = list("abcdefghijklmnopqrst")
_FIG3_ARCS = [
    ("a", "b"), ("e", "f"), ("i", "j"), ("m", "n"), ("q", "r"),
    ("b", "c"), ("c", "e"), ("e", "d"), ("d", "b"),
    ("f", "g"), ("g", "i"), ("i", "h"), ("h", "f"),
    ("j", "k"), ("k", "m"), ("m", "l"), ("l", "j"),
    ("n", "o"), ("o", "q"), ("q", "p"), ("p", "n"),
    ("r", "s"), ("s", "a"), ("a", "t"), ("t", "r"),
]
_FIG3_ALPHA = {v: (2 if v in "aeimq" else 1) for v in _FIG3_VERTICES}
FIG3_C = [[5, 6, 7, 8], [9, 10, 11, 12], [13, 14, 15, 16], [17, 18, 19, 20]]

# Lattice of c-orientations: vertices b, d, e, f plus the fixed vertex.
_FIG7_VERTICES = [TOP, "b", "d", "e", "f"]
_FIG7_EDGES = [
    ("b", TOP), ("d", "b"), ("e", "b"), ("f", "b"), ("e", "d"), ("e", "f"),
    ("e", TOP), ("d", TOP), ("f", TOP),
]
# Arc lists per element, keyed by the flip counts of (b, d, e, f).
_FIG7_ELEMENTS = {
    "bottom": [("b", TOP), ("d", "b"), ("e", "b"), ("f", "b"), ("e", "d"), ("e", "f"), ("e", TOP), ("d", TOP), ("f", TOP)],
    "z0010": [("b", TOP), ("d", "b"), ("b", "e"), ("f", "b"), ("d", "e"), ("f", "e"), (TOP, "e"), ("d", TOP), ("f", TOP)],
    "z0011": [("b", TOP), ("d", "b"), ("b", "e"), ("b", "f"), ("d", "e"), ("e", "f"), (TOP, "e"), ("d", TOP), (TOP, "f")],
    "z0110": [("b", TOP), ("b", "d"), ("b", "e"), ("f", "b"), ("e", "d"), ("f", "e"), (TOP, "e"), (TOP, "d"), ("f", TOP)],
    "z0111": [("b", TOP), ("b", "d"), ("b", "e"), ("b", "f"), ("e", "d"), ("e", "f"), (TOP, "e"), (TOP, "d"), (TOP, "f")],
    "top": [(TOP, "b"), ("d", "b"), ("e", "b"), ("f", "b"), ("e", "d"), ("e", "f"), (TOP, "e"), (TOP, "d"), (TOP, "f")],
}
FIG7_Z = {
    "bottom": (0, 0, 0, 0), "z0010": (0, 0, 1, 0), "z0011": (0, 0, 1, 1),
    "z0110": (0, 1, 1, 0), "z0111": (0, 1, 1, 1), "top": (1, 1, 1, 1),
}
FIG7_ORDER = ("b", "d", "e", "f")

_K4HAM = (["1", "2", "3", "4"], [("1", "2"), ("2", "3"), ("3", "4"), ("4", "1"), ("1", "3"), ("2", "4")])
_PRISM = (
    ["a1", "a2", "a3", "b1", "b2", "b3"],
    [("a1", "a2"), ("a2", "a3"), ("a3", "a1"), ("b1", "b2"), ("b2", "b3"), ("b3", "b1"),
     ("a1", "b1"), ("a2", "b2"), ("a3", "b3")],
)


def circulant(n: int, steps: tuple[int, ...] = (1, 2)) -> Orientation:
    """Digraph on Z_n with arcs i -> i+s for each step s."""
    vs = [str(i) for i in range(n)]
    arcs = [(str(i), str((i + s) % n)) for s in steps for i in range(n)]
    return Orientation.from_arcs(vs, arcs)


def grid_instance(rows: int, cols: int) -> Orientation:
    """Grid graph with top at the corner (0,0), every edge pointing toward top.

    This orientation has top as its only sink, so it is the minimum of its
    lattice of c-orientations.
    """
    def name(r: int, c: int) -> str:
        return TOP if (r, c) == (0, 0) else f"{r}.{c}"

    vs = [name(r, c) for r in range(rows) for c in range(cols)]
    arcs = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                arcs.append((name(r, c + 1), name(r, c)))
            if r + 1 < rows:
                arcs.append((name(r + 1, c), name(r, c)))
    return Orientation.from_arcs(vs, arcs, top=TOP)


def fig2() -> tuple[Orientation, Orientation, dict[str, int]]:
    left = Orientation.from_arcs(_FIG2_VERTICES, _FIG2_LEFT)
    right = left.reverse_edges(_FIG2_CYCLE)
    return left, right, dict(_FIG2_ALPHA)


def fig2_cycle() -> frozenset[int]:
    return frozenset(_FIG2_CYCLE)


def fig3() -> tuple[Orientation, Orientation, dict[str, int]]:
    X = Orientation.from_arcs(_FIG3_VERTICES, _FIG3_ARCS)
    Y = X.reverse_edges([i for c in FIG3_C for i in c])
    return X, Y, dict(_FIG3_ALPHA)


def fig4():
    from flipdist.orientations import Matching

    left, _, _ = fig2()
    matched = [i for i, (t, _h) in enumerate(left.arcs()) if t in FIG4_V1]
    return Matching(left.graph, (frozenset(FIG4_V1), frozenset(FIG4_V2)), frozenset(matched))


def fig6_edge_names(G: Graph) -> dict[int, str]:
    """Element name per edge id: its drawn label where one exists, else the end pair."""
    lookup = {frozenset(ends): lbl for lbl, ends in FIG6_LABELS.items()}
    return {e.id: lookup.get(frozenset(e.ends), "".join(sorted(e.ends))) for e in G.edges}


def fig6():
    """Partition matroids (circled / squared classes) and the two labelled bases."""
    from flipdist.polytope import PartitionMatroid

    left, _, _ = fig2()
    G = left.graph
    names = fig6_edge_names(G)
    ground = [names[e.id] for e in G.edges]
    v1 = set(FIG4_V1)
    plus_cls, minus_cls = {}, {}
    for e in G.edges:
        u, v = e.ends
        a, b = (u, v) if u in v1 else (v, u)
        plus_cls[names[e.id]] = f"v1:{a}"
        minus_cls[names[e.id]] = f"v2:{b}"
    Mp = PartitionMatroid(tuple(ground), plus_cls, {c: 1 for c in sorted(set(plus_cls.values()))})
    Mm = PartitionMatroid(tuple(ground), minus_cls, {c: 1 for c in sorted(set(minus_cls.values()))})
    return Mp, Mm, frozenset(FIG6_A), frozenset(FIG6_B)


def fig7() -> dict[str, Orientation]:
    G = Graph.build(_FIG7_VERTICES, _FIG7_EDGES, top=TOP)
    out = {}
    for name, arcs in _FIG7_ELEMENTS.items():
        tails = []
        for e, (t, h) in zip(G.edges, arcs):
            if set(e.ends) != {t, h}:
                raise AssertionError(f"fig7 transcription mismatch at edge {e.id}")
            tails.append(t)
        out[name] = Orientation(G, tuple(tails))
    return out


def k4ham() -> Orientation:
    return Orientation.from_arcs(*_K4HAM)


def prism() -> Orientation:
    return Orientation.from_arcs(*_PRISM)


def z5circ() -> Orientation:
    return circulant(5)


def z6circ() -> Orientation:
    return circulant(6)


def chain2():
    from flipdist.lattice import FinitePoset

    return FinitePoset(("a", "b"), (("a", "b"),))


def antichain3():
    from flipdist.lattice import FinitePoset

    return FinitePoset(("a", "b", "c"), ())


def bundle(name: str) -> dict:
    """JSON-ready fixture bundle."""
    if name == "fig2":
        left, right, alpha = fig2()
        return {"fixture": name, "graph": left.graph.to_dict(), "alpha": alpha,
                "orientations": {"left": list(left.tails), "right": list(right.tails)}}
    if name == "fig3":
        X, Y, alpha = fig3()
        return {"fixture": name, "graph": X.graph.to_dict(), "alpha": alpha,
                "orientations": {"x": list(X.tails), "y": list(Y.tails)}}
    if name == "fig4":
        M = fig4()
        return {"fixture": name, **M.to_dict()}
    if name == "fig6":
        Mp, Mm, A, B = fig6()
        return {"fixture": name, "matroids": {"plus": Mp.to_dict(), "minus": Mm.to_dict()},
                "bases": {"a": sorted(A), "b": sorted(B)}}
    if name == "fig7":
        els = fig7()
        G = els["bottom"].graph
        return {"fixture": name, "graph": G.to_dict(),
                "orientations": {k: list(v.tails) for k, v in els.items()}}
    if name in DIGRAPHS:
        D = DIGRAPHS[name]()
        return {"fixture": name, "graph": D.graph.to_dict(), "orientations": {"d": list(D.tails)}}
    if name in POSETS:
        return {"fixture": name, "poset": POSETS[name]().to_dict()}
    raise ValidationError(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")


DIGRAPHS = {"k4ham": k4ham, "prism": prism, "z5circ": z5circ, "z6circ": z6circ}
POSETS = {"chain2": chain2, "antichain3": antichain3}
NAMES = ("fig2", "fig3", "fig4", "fig6", "fig7", *DIGRAPHS, *POSETS)
