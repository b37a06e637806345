"""Random small instances shared by several test modules."""

from __future__ import annotations

import random

from flipdist.corientations import enumerate_lattice
from flipdist.errors import CapExceeded
from flipdist.graph import Orientation


def random_connected_graph(rng: random.Random, n: int, extra: int) -> tuple[list[str], list[tuple[str, str]]]:
    vs = [f"v{i}" for i in range(n)]
    ends = []
    for i in range(1, n):
        ends.append((vs[rng.randrange(i)], vs[i]))
    pairs = [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]]
    for _ in range(extra):
        ends.append(rng.choice(pairs))
    return vs, ends


def random_acyclic_orientation(rng: random.Random, n: int, extra: int) -> Orientation:
    """Acyclic orientation of a random connected multigraph, with a random top."""
    vs, ends = random_connected_graph(rng, n, extra)
    rank = {v: r for r, v in enumerate(rng.sample(vs, len(vs)))}
    arcs = [(a, b) if rank[a] < rank[b] else (b, a) for a, b in ends]
    top = rng.choice(vs)
    return Orientation.from_arcs(vs, arcs, top=top)


def random_lattices(seed: int, count: int, max_n: int = 9, cap: int = 40):
    """Yield ``count`` pairs (reference orientation, lattice elements) with small lattices."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        n = rng.randint(2, max_n)
        X = random_acyclic_orientation(rng, n, rng.randint(0, n))
        try:
            elements, covers = enumerate_lattice(X, cap)
        except CapExceeded:
            continue
        made += 1
        yield X, elements, covers
