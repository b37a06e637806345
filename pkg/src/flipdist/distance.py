"""Exact vertex-flip distance between c-orientations.

The difference of two c-orientations is split into a laminar family of
disjoint minimal dicuts.  Ordering the cuts by interior inclusion gives a
forest poset whose weights predict how often each vertex flips; peeling
minimal cuts one at a time (and cancelling opposite flips) yields a monotone
flip sequence, which is shortest.
"""

from __future__ import annotations

import heapq
import logging
from collections import deque
from dataclasses import dataclass, field

from flipdist.corientations import (
    SINK_TO_SOURCE,
    SOURCE_TO_SINK,
    FlipSequence,
    FlipState,
    FlipStep,
    _require_c_instance,
    same_c,
    vertex_flip,
    z_embedding,
    cut_flip,
)
from flipdist.errors import InternalError, ValidationError
from flipdist.graph import Dicut, Graph, Orientation, crossing_edges, is_minimal_cut
from flipdist.orientations import flip_cycle

log = logging.getLogger(__name__)

PLUS, ZERO, MINUS = 1, 0, -1


@dataclass
class DicutFamily:
    cuts: list[Dicut]
    laminar: bool = False

    def __len__(self) -> int:
        return len(self.cuts)


@dataclass
class CutPoset:
    family: DicutFamily
    parent: list[int | None]  # index of cov(S), None for maximal cuts
    weight: list[int]
    sign: list[int]
    strict_interior: list[frozenset[str]]
    children: list[list[int]] = field(default_factory=list)

    @property
    def cuts(self) -> list[Dicut]:
        return self.family.cuts

    def agrees(self, i: int) -> bool:
        """Whether cut ``i`` agrees with the sign of its cover (maximal cuts always do)."""
        p = self.parent[i]
        if p is None:
            return True
        s = self.sign[p]
        return s == ZERO or (s == PLUS) == self.cuts[i].positive

    def predicted_counts(self) -> dict[str, int]:
        """Signed number of flips per vertex: +w for source-to-sink, -w for sink-to-source."""
        out = {}
        for i, verts in enumerate(self.strict_interior):
            for v in verts:
                out[v] = self.sign[i] * self.weight[i]
        return out

    def total_weight(self) -> int:
        return sum(self.weight[i] * len(v) for i, v in enumerate(self.strict_interior))


def _check_pair(X: Orientation, Y: Orientation) -> None:
    if X.graph != Y.graph:
        raise ValidationError("orientations of different graphs")
    _require_c_instance(X)
    if not X.is_acyclic():
        raise ValidationError("orientation has a directed cycle; contract rigid cycles first")
    if not same_c(X, Y):
        raise ValidationError("orientations are not in the same c-orientation set (difference not balanced)")


class _Contracted:
    """The graph with every non-difference edge contracted, as a shrinking digraph."""

    def __init__(self, X: Orientation, diff: list[int]):
        G = X.graph
        self.parent = list(range(G.n))
        in_diff = set(diff)
        for i, (a, b) in enumerate(G.end_index):
            if i not in in_diff:
                self._union(a, b)
        self.members: dict[int, list[int]] = {}
        for v in range(G.n):
            self.members.setdefault(self._find(v), []).append(v)
        self.key = {r: min(G.vertices[v] for v in vs) for r, vs in self.members.items()}
        self.arc_tail: dict[int, int] = {}
        self.arc_head: dict[int, int] = {}
        self.arcs: dict[int, set[int]] = {r: set() for r in self.members}
        self.indeg = {r: 0 for r in self.members}
        tails = X.tail_index
        for i in diff:
            a, b = G.end_index[i]
            t = tails[i]
            h = b if t == a else a
            rt, rh = self._find(t), self._find(h)
            if rt == rh:
                raise ValidationError(f"difference edge {i} lies on a cycle with no other difference edge")
            self.arc_tail[i], self.arc_head[i] = t, h
            self.arcs[rt].add(i)
            self.arcs[rh].add(i)
            self.indeg[rh] += 1

    def _find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def _union(self, a: int, b: int) -> int:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self.parent[rb] = ra
        return ra

    def ends(self, i: int) -> tuple[int, int]:
        return self._find(self.arc_tail[i]), self._find(self.arc_head[i])

    def is_source(self, r: int) -> bool:
        return self.indeg[r] == 0 and bool(self.arcs[r])

    def component_from(self, starts: list[int], avoid: int) -> set[int]:
        seen = set(starts)
        stack = list(starts)
        while stack:
            r = stack.pop()
            for i in self.arcs[r]:
                t, h = self.ends(i)
                w = h if t == r else t
                if w != avoid and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def absorb_out_neighbors(self, s: int) -> int:
        """Contract every arc leaving the source ``s``; returns the merged root."""
        out = list(self.arcs[s])
        nbrs = {self.ends(i)[1] for i in out}
        for i in out:
            self.arcs[self.ends(i)[1]].discard(i)
            self.indeg[self.ends(i)[1]] -= 1
        self.arcs[s].clear()
        groups = [s, *sorted(nbrs)]
        big = max(groups, key=lambda r: len(self.arcs[r]) + len(self.members[r]))
        arcs, members, indeg = self.arcs[big], self.members[big], self.indeg[big]
        key = self.key[big]
        for r in groups:
            if r == big:
                continue
            arcs |= self.arcs.pop(r)
            members.extend(self.members.pop(r))
            indeg += self.indeg.pop(r)
            key = min(key, self.key.pop(r))
            self.parent[r] = big
        self.indeg[big] = indeg
        self.key[big] = key
        for i in arcs:
            t, h = self.ends(i)
            if t == h:
                raise ValidationError("difference is not balanced (arc inside a contracted block)")
        return big


def laminar_decompose(X: Orientation, Y: Orientation, verify: bool = True) -> DicutFamily:
    """Split the edges where ``X`` and ``Y`` differ into disjoint minimal dicuts of ``X``.

    Works on the graph with all other edges contracted.  Repeatedly takes the
    source block with the smallest identifier, groups its outgoing arcs by the
    component (of the rest) that their heads lie in, records one dicut per
    group and contracts the source with its out-neighbours.
    """
    _check_pair(X, Y)
    G = X.graph
    diff = sorted(X.differing(Y))
    if not diff:
        return DicutFamily([], laminar=True)
    H = _Contracted(X, diff)
    top = H._find(G.index[G.top])
    all_vertices = frozenset(G.vertices)
    heap = [(H.key[r], r) for r in H.members if H.is_source(r)]
    heapq.heapify(heap)
    cuts: list[Dicut] = []
    while heap:
        _, s = heapq.heappop(heap)
        if s not in H.members or not H.is_source(s):
            continue
        top = H._find(top)
        by_head: dict[int, list[int]] = {}
        for i in H.arcs[s]:
            by_head.setdefault(H.ends(i)[1], []).append(i)
        if len(by_head) == 1:
            groups = [(None, sorted(H.arcs[s]))]
        else:
            groups = []
            pending = sorted(by_head)
            placed: set[int] = set()
            for r in pending:
                if r in placed:
                    continue
                comp = H.component_from([r], avoid=s)
                placed |= comp & set(by_head)
                edges = sorted(i for h in comp & set(by_head) for i in by_head[h])
                groups.append((comp, edges))
        s_members = frozenset(G.vertices[v] for v in H.members[s])
        for comp, edges in groups:
            if comp is None:
                # everything except s lies behind the one neighbour block
                positive = top != s
                interior = s_members if positive else all_vertices - s_members
            else:
                positive = top in comp
                verts = frozenset(G.vertices[v] for r in comp for v in H.members[r])
                interior = all_vertices - verts if positive else verts
            cuts.append(Dicut(frozenset(edges), interior, positive))
        merged = H.absorb_out_neighbors(s)
        if H.is_source(merged):
            heapq.heappush(heap, (H.key[merged], merged))
    if any(H.arcs[r] for r in H.members):
        raise InternalError("difference arcs left after decomposition (cyclic difference?)")
    fam = DicutFamily(cuts)
    if verify:
        verify_family(X, Y, fam)
    return fam


def verify_family(X: Orientation, Y: Orientation, fam: DicutFamily) -> None:
    """Check disjointness, coverage, direction and laminarity; raise on failure."""
    G = X.graph
    seen: set[int] = set()
    for S in fam.cuts:
        if seen & S.edges:
            raise InternalError("dicuts of the family share edges")
        seen |= S.edges
        if G.top in S.interior:
            raise InternalError("interior contains the fixed vertex")
        cross = set(crossing_edges(G, S.interior))
        if cross != S.edges:
            raise InternalError("recorded interior does not cut exactly the dicut edges")
        for i in S.edges:
            if (X.tails[i] in S.interior) != S.positive:
                raise InternalError("dicut edge crosses against the cut direction")
    if seen != X.differing(Y):
        raise InternalError("family does not cover the difference")
    _nesting(fam.cuts, G)
    fam.laminar = True


def _nesting(cuts: list[Dicut], G: Graph) -> tuple[list[int], list[int | None], list[int | None]]:
    """Process cuts by decreasing interior; return (order, parent, innermost cut per vertex)."""
    order = sorted(range(len(cuts)), key=lambda i: (-len(cuts[i].interior), cuts[i].sort_key()))
    owner: list[int | None] = [None] * G.n
    parent: list[int | None] = [None] * len(cuts)
    idx = G.index
    for i in order:
        verts = [idx[v] for v in cuts[i].interior]
        owners = {owner[v] for v in verts}
        if len(owners) != 1:
            raise InternalError("interiors are not laminar")
        parent[i] = owners.pop()
        if parent[i] is not None and cuts[parent[i]].interior == cuts[i].interior:
            raise InternalError("two cuts share an interior")
        for v in verts:
            owner[v] = i
    return order, parent, owner


def build_cut_poset(F: DicutFamily, G: Graph) -> CutPoset:
    cuts = F.cuts
    order, parent, owner = _nesting(cuts, G)
    F.laminar = True
    strict: list[set[str]] = [set() for _ in cuts]
    for v, o in enumerate(owner):
        if o is not None:
            strict[o].add(G.vertices[v])
    weight = [0] * len(cuts)
    sign = [0] * len(cuts)
    children: list[list[int]] = [[] for _ in cuts]
    for i in order:  # parents come first
        own = PLUS if cuts[i].positive else MINUS
        p = parent[i]
        if p is None:
            weight[i], sign[i] = 1, own
            continue
        children[p].append(i)
        sp = sign[p]
        agrees = sp == ZERO or sp == own
        weight[i] = weight[p] + 1 if agrees else weight[p] - 1
        if weight[i] == 0:
            sign[i] = ZERO
        elif sp != ZERO:
            sign[i] = sp
        else:
            sign[i] = own
    return CutPoset(F, parent, weight, sign, [frozenset(s) for s in strict], children)


def _check_dicut_state(state: FlipState, S: Dicut) -> None:
    G = state.graph
    inside = {G.index[v] for v in S.interior}
    cross = set()
    for v in inside:
        for i in state.inc[v]:
            a, b = state.ends[i]
            if (a in inside) != (b in inside):
                cross.add(i)
                if (state.tails[i] in inside) != S.positive:
                    raise ValidationError(f"edge {i} crosses the interior boundary against the cut direction")
    if cross != set(S.edges):
        raise ValidationError("edges crossing the interior differ from the dicut edges")


def _flip_interior_state(state: FlipState, interior: frozenset[str], positive: bool) -> list[int]:
    """Flip every interior vertex once, sources first for positive cuts, sinks for negative ones."""
    G = state.graph
    inside = {G.index[v] for v in interior}
    t = state.tails
    # count interior edges that block a flip: incoming for sources, outgoing for sinks
    block = {}
    for v in inside:
        k = 0
        for i in state.inc[v]:
            a, b = state.ends[i]
            w = b if a == v else a
            if w in inside and (t[i] != v) == positive:
                k += 1
        block[v] = k
    names = G.vertices
    heap = [(names[v], v) for v, k in block.items() if k == 0]
    heapq.heapify(heap)
    done = []
    while heap:
        _, v = heapq.heappop(heap)
        for i in state.inc[v]:
            a, b = state.ends[i]
            w = b if a == v else a
            if w in block and w != v and (t[i] == v) == positive:
                block[w] -= 1
                if block[w] == 0:
                    heapq.heappush(heap, (names[w], w))
        if positive and not state.is_source(v) or not positive and not state.is_sink(v):
            raise InternalError(f"interior vertex {names[v]} is not flippable when reached")
        state.flip(v)
        done.append(v)
        block.pop(v)
    if block:
        raise InternalError("interior flip stalled before every interior vertex was flipped")
    return done


def flip_interior(X: Orientation, S: Dicut) -> tuple[FlipSequence, Orientation]:
    state = FlipState(X)
    _check_dicut_state(state, S)
    done = _flip_interior_state(state, S.interior, S.positive)
    step = FlipStep.up if S.positive else FlipStep.down
    return FlipSequence(tuple(step(X.graph.vertices[v]) for v in done)), state.orientation()


def _monotone_steps(X: Orientation, poset: CutPoset) -> list[tuple[int, bool]]:
    """Peel minimal cuts, then splice the flip blocks from last to first.

    Returns (vertex index, source_to_sink) pairs.
    """
    G = X.graph
    cuts = poset.cuts
    state = FlipState(X)
    pending_children = [len(c) for c in poset.children]
    heap = [(min(cuts[i].interior), i) for i in range(len(cuts)) if pending_children[i] == 0]
    heapq.heapify(heap)
    blocks: list[tuple[int, list[int]]] = []
    while heap:
        _, i = heapq.heappop(heap)
        S = cuts[i]
        _check_dicut_state(state, S)
        blocks.append((i, _flip_interior_state(state, S.interior, S.positive)))
        p = poset.parent[i]
        if p is not None:
            pending_children[p] -= 1
            if pending_children[p] == 0:
                heapq.heappush(heap, (min(cuts[p].interior), p))
    if len(blocks) != len(cuts):
        raise InternalError("cut poset has elements that never became minimal")

    # Build the sequence back to front.  ``rev`` holds entries in reverse
    # order; ``first[v]`` lists v's alive entries front-to-back.
    rev: list[tuple[int, bool]] = []
    alive: list[bool] = []
    first: dict[int, deque[int]] = {}
    for i, verts in reversed(blocks):
        S = cuts[i]
        if not poset.agrees(i):
            # the block's flips cancel against the next flip of each vertex
            for v in verts:
                q = first.get(v)
                if not q:
                    raise InternalError(f"no later flip of {G.vertices[v]} to cancel against")
                alive[q.popleft()] = False
            continue
        for v in reversed(verts):
            first.setdefault(v, deque()).appendleft(len(rev))
            rev.append((v, S.positive))
            alive.append(True)
    return [e for e, ok in zip(reversed(rev), reversed(alive)) if ok]


def _to_sequence(G: Graph, steps: list[tuple[int, bool]]) -> FlipSequence:
    names = G.vertices
    return FlipSequence(tuple(FlipStep.up(names[v]) if up else FlipStep.down(names[v]) for v, up in steps))


def _replay_steps(X: Orientation, steps: list[tuple[int, bool]]) -> FlipState:
    state = FlipState(X)
    for v, up in steps:
        if v == state.top or not (state.is_source(v) if up else state.is_sink(v)):
            raise InternalError(f"spliced sequence flips {X.graph.vertices[v]} illegally")
        state.flip(v)
    return state


def monotone_sequence(X: Orientation, Y: Orientation, strict: bool = False) -> FlipSequence:
    """A monotone (hence shortest) vertex-flip sequence from ``X`` to ``Y``.

    The result is replayed before being returned.  If any internal check
    fails, ``strict`` re-raises; otherwise the failure is logged and the
    lattice route through the meet is returned instead.
    """
    _check_pair(X, Y)
    try:
        poset = build_cut_poset(laminar_decompose(X, Y), X.graph)
        steps = _monotone_steps(X, poset)
        end = _replay_steps(X, steps)
        if end.tails != list(Y.tail_index):
            raise InternalError("spliced sequence does not end at the target")
        seen: dict[int, bool] = {}
        for v, up in steps:
            if seen.setdefault(v, up) != up:
                raise InternalError(f"vertex {X.graph.vertices[v]} flipped in both directions")
    except (InternalError, ValidationError) as exc:
        if strict:
            raise
        log.warning("monotone construction failed (%s); falling back to the meet route", exc)
        return meet_route(X, Y)
    return _to_sequence(X.graph, steps)


def vertex_flip_distance(X: Orientation, Y: Orientation, strict: bool = False) -> int:
    return len(monotone_sequence(X, Y, strict=strict))


def meet_route(X: Orientation, Y: Orientation) -> FlipSequence:
    """Go down to the meet of ``X`` and ``Y`` by sink flips, then up to ``Y`` by source flips."""
    _check_pair(X, Y)
    G = X.graph
    zx, zy = z_embedding(X), z_embedding(Y)
    names = G.vertices
    cur = [zx.get(v, 0) for v in names]
    goal_down = [min(zx.get(v, 0), zy.get(v, 0)) for v in names]
    goal_up = [zy.get(v, 0) for v in names]
    state = FlipState(X)
    steps: list[tuple[int, bool]] = []

    def walk(up: bool, goal: list[int]) -> None:
        def ready(v: int) -> bool:
            if v == state.top:
                return False
            if up:
                return cur[v] < goal[v] and state.is_source(v)
            return cur[v] > goal[v] and state.is_sink(v)

        heap = [(names[v], v) for v in range(G.n) if ready(v)]
        heapq.heapify(heap)
        while heap:
            _, v = heapq.heappop(heap)
            if not ready(v):
                continue
            state.flip(v)
            cur[v] += 1 if up else -1
            steps.append((v, up))
            for w in (v, *state.neighbors(v)):
                if ready(w):
                    heapq.heappush(heap, (names[w], w))
        if cur != goal:
            raise InternalError("lattice walk stalled before reaching its goal")

    walk(False, goal_down)
    walk(True, goal_up)
    if state.tails != list(Y.tail_index):
        raise InternalError("meet route does not end at the target")
    return _to_sequence(G, steps)


def replay(X: Orientation, F: FlipSequence) -> Orientation:
    """Apply ``F`` to ``X`` step by step; raise ValidationError at the first illegal step."""
    O = X
    for k, step in enumerate(F):
        try:
            if step.kind == "vertex":
                srcs = O.graph.incident(step.vertex) if step.vertex in O.graph.index else ()
                outs = sum(1 for i in srcs if O.tails[i] == step.vertex)
                want = len(srcs) if step.direction == SOURCE_TO_SINK else 0
                if srcs and outs != want:
                    kind = "source" if step.direction == SOURCE_TO_SINK else "sink"
                    raise ValidationError(f"{step.vertex!r} is not a {kind}")
                O = vertex_flip(O, step.vertex)
            elif step.kind == "cycle":
                O = flip_cycle(O, step.edges)
            elif step.kind == "cut":
                O = _flip_cut_step(O, step.interior)
            else:
                raise ValidationError(f"unknown step kind {step.kind!r}")
        except ValidationError as exc:
            raise ValidationError(f"step {k}: {exc}") from None
    return O


def _flip_cut_step(O: Orientation, interior: frozenset[str]) -> Orientation:
    G = O.graph
    if not is_minimal_cut(G, interior):
        raise ValidationError("interior does not define a minimal cut")
    try:
        return cut_flip(O, interior)
    except ValidationError:
        return cut_flip(O, set(G.vertices) - set(interior))


def verify_sequence(X: Orientation, F: FlipSequence, Y: Orientation) -> bool:
    try:
        end = replay(X, F)
    except ValidationError as exc:
        log.info("sequence rejected: %s", exc)
        return False
    if end != Y:
        log.info("sequence ends at a different orientation")
        return False
    return True


def is_monotone(F: FlipSequence) -> bool:
    return F.is_monotone()
