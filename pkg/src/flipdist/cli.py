"""Command-line front end.

Every command prints canonical JSON (sorted keys, compact separators) unless
another ``--format`` is requested.  Exit codes: 0 success, 2 invalid input,
3 a search cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from flipdist import fixtures
from flipdist.corientations import (
    FlipSequence,
    contract_rigid,
    enumerate_lattice,
    same_c,
    z_embedding,
)
from flipdist.distance import monotone_sequence, verify_sequence
from flipdist.dot import hasse_dot, undirected_dot
from flipdist.errors import CapExceeded, FlipdistError, InternalError, ValidationError
from flipdist.graph import Graph, Orientation
from flipdist.lattice import FinitePoset, random_poset
from flipdist.oracle import Caps, FlipMode, bfs, flip_graph
from flipdist.orientations import check_alpha
from flipdist.polytope import PartitionMatroid, adjacency_report
from flipdist.reductions import reduce_hamiltonicity, reduce_jump_number, reduce_two_ham

MODE_NAMES = ("cycle", "cycle-restricted", "vertex", "cut-k")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON: {exc}") from None


class Inputs:
    """Resolves graphs and orientations from files or a named fixture."""

    def __init__(self, args: argparse.Namespace):
        self.bundle = fixtures.bundle(args.fixture) if getattr(args, "fixture", None) else None
        self.graph: Graph | None = None
        if getattr(args, "graph", None):
            self.graph = Graph.from_dict(_read_json(args.graph))
        elif self.bundle is not None and "graph" in self.bundle:
            self.graph = Graph.from_dict(self.bundle["graph"])

    def orientation(self, ref: str, graph: Graph | None = None) -> Orientation:
        graph = graph or self.graph
        path = Path(ref)
        if path.is_file():
            d = _read_json(path)
            if isinstance(d, list):
                d = {"tails": d}
            g = d.get("graph") if isinstance(d, dict) else None
            if isinstance(g, str):
                gp = Path(g) if Path(g).is_absolute() else path.parent / g
                graph = Graph.from_dict(_read_json(gp))
            elif isinstance(g, dict):
                graph = Graph.from_dict(g)
            if graph is None:
                raise ValidationError(f"{ref}: no graph given (inline, by path, --graph or --fixture)")
            return Orientation.from_dict(d, graph)
        if self.bundle is not None and ref in self.bundle.get("orientations", {}):
            if graph is None:
                raise ValidationError("fixture has no graph")
            return Orientation(graph, tuple(self.bundle["orientations"][ref]))
        raise ValidationError(f"{ref!r} is neither a file nor an orientation of the fixture")

    def alpha(self, ref: str | None) -> dict[str, int] | None:
        if ref:
            return {str(k): int(v) for k, v in _read_json(ref).items()}
        if self.bundle is not None and "alpha" in self.bundle:
            return dict(self.bundle["alpha"])
        return None


def _mode(args: argparse.Namespace, target: Orientation | None) -> FlipMode:
    name = args.mode
    if name.startswith("cut-") and name[4:].isdigit():
        return FlipMode("cut_bounded", k=int(name[4:]))
    if name == "cut-k":
        if args.k is None:
            raise ValidationError("--mode cut-k needs --k")
        return FlipMode("cut_bounded", k=args.k)
    if name == "cycle-restricted":
        return FlipMode("cycle_restricted", target=target)
    if name in ("cycle", "vertex"):
        return FlipMode(name)
    raise ValidationError(f"unknown mode {name!r}; choose from {', '.join(MODE_NAMES)} or cut-<k>")


def _reduced_pair(X: Orientation, Y: Orientation) -> tuple[Orientation, Orientation, dict | None]:
    """Contract rigid cycles when needed; also report the contraction."""
    if not same_c(X, Y):
        raise ValidationError("x and y are not in the same c-orientation set")
    if X.is_acyclic():
        return X, Y, None
    c = contract_rigid(X, Y)
    return c.x, c.y, {k: list(v) for k, v in c.members.items() if len(v) > 1}


def cmd_validate(args, inp: Inputs) -> tuple[Any, str | None]:
    X = inp.orientation(args.x)
    out: dict[str, Any] = {"acyclic": X.is_acyclic(), "edges": X.graph.m, "vertices": X.graph.n}
    alpha = inp.alpha(args.alpha)
    if alpha is not None:
        out["alpha_orientation"] = check_alpha(X, alpha)
    if args.y:
        Y = inp.orientation(args.y, X.graph)
        out["same_c"] = same_c(X, Y)
    return out, None


def cmd_distance(args, inp: Inputs):
    X = inp.orientation(args.x)
    Y = inp.orientation(args.y, X.graph)
    mode = _mode(args, Y)
    if mode.kind == "vertex":
        Xr, Yr, contracted = _reduced_pair(X, Y)
        seq = monotone_sequence(Xr, Yr)
        out = {"distance": len(seq), "method": "monotone", "mode": args.mode}
        if contracted:
            out["contracted"] = contracted
    else:
        res = bfs(X, Y, mode, Caps.from_env(), args.max_depth)
        out = {"distance": res.distance, "method": "bfs", "mode": args.mode, "explored_states": res.explored}
        if res.truncated:
            out["depth_limited"] = True
    text = f"distance: {out['distance']}\n"
    return out, text


def cmd_sequence(args, inp: Inputs):
    X = inp.orientation(args.x)
    Y = inp.orientation(args.y, X.graph)
    Xr, Yr, contracted = _reduced_pair(X, Y)
    if args.check:
        F = FlipSequence.from_dict(_read_json(args.check))
        ok = verify_sequence(Xr, F, Yr)
        return {"length": len(F), "monotone": F.is_monotone(), "valid": ok}, f"valid: {ok}\n"
    seq = monotone_sequence(Xr, Yr)
    out = seq.to_dict()
    if contracted:
        out["contracted"] = contracted
    text = "".join(f"{s.vertex} {s.direction}\n" for s in seq)
    return out, text


def cmd_flipgraph(args, inp: Inputs):
    X = inp.orientation(args.x)
    target = inp.orientation(args.y, X.graph) if args.y else None
    if args.mode == "cycle-restricted" and target is None:
        raise ValidationError("cycle-restricted mode needs --y as target")
    states, edges = flip_graph(X, _mode(args, target), Caps.from_env())
    labels = ["".join("0" if t == e.ends[0] else "1" for t, e in zip(O.tails, O.graph.edges)) for O in states]
    out = {"nodes": labels, "edges": [list(e) for e in edges]}
    return out, None, undirected_dot(f"flipgraph-{args.mode}", labels, edges)


def cmd_lattice(args, inp: Inputs):
    X = inp.orientation(args.x)
    if not X.is_acyclic():
        X = contract_rigid(X, X).x
    elements, covers = enumerate_lattice(X, args.cap)
    order = sorted(v for v in X.graph.vertices if v != X.graph.top and X.graph.degree(v))
    zs = []
    for O in elements:
        z = z_embedding(O)
        zs.append([z[v] for v in order])
    rank = {i: sum(z) for i, z in enumerate(zs)}
    out = {
        "vertices": order,
        "elements": [{"z": z, "tails": list(O.tails)} for z, O in zip(zs, elements)],
        "covers": [list(c) for c in covers],
    }
    width = max([len(v) for v in order] + [1])
    rows = ["  ".join(v.rjust(width) for v in order)]
    rows += ["  ".join(str(k).rjust(width) for k in z) for z in zs]
    text = "\n".join(rows) + "\n"
    labels = ["(" + ",".join(map(str, z)) + ")" for z in zs]
    return out, text, hasse_dot("lattice", labels, covers, rank)


def _load_bases(ref: str, bundle: dict | None) -> frozenset[str]:
    if Path(ref).is_file():
        d = _read_json(ref)
        if isinstance(d, dict):
            d = d.get("elements", d.get("basis"))
        if not isinstance(d, list):
            raise ValidationError(f"{ref}: expected a list of elements")
        return frozenset(str(x) for x in d)
    if bundle is not None and ref in bundle.get("bases", {}):
        return frozenset(bundle["bases"][ref])
    raise ValidationError(f"{ref!r} is neither a file nor a named basis")


def cmd_adjacent(args, inp: Inputs):
    src = _read_json(args.matroids) if args.matroids else inp.bundle
    if src is None:
        raise ValidationError("adjacent needs --matroids or --fixture")
    ms = src.get("matroids", src)
    try:
        Mp, Mm = PartitionMatroid.from_dict(ms["plus"]), PartitionMatroid.from_dict(ms["minus"])
    except (KeyError, TypeError):
        raise ValidationError("matroid file needs 'plus' and 'minus' matroids") from None
    A, B = _load_bases(args.a, src), _load_bases(args.b, src)
    rep = adjacency_report(A, B, Mp, Mm)
    out: dict[str, Any] = {"adjacent": rep.adjacent}
    if args.details:
        out["plus"] = {"status": rep.plus.status, "pairs": sorted(map(list, rep.plus.matching or ()))}
        out["minus"] = {"status": rep.minus.status, "pairs": sorted(map(list, rep.minus.matching or ()))}
        out["single_cycle"] = rep.single_cycle
    return out, f"adjacent: {rep.adjacent}\n"


def _digraph_input(args, inp: Inputs) -> Orientation:
    if args.input:
        d = _read_json(args.input)
        if "vertices" in d and "arcs" in d:
            return Orientation.from_arcs(d["vertices"], [tuple(a) for a in d["arcs"]])
        return Orientation.from_dict(d)
    if args.fixture in fixtures.DIGRAPHS:
        return fixtures.DIGRAPHS[args.fixture]()
    raise ValidationError("reduction needs --input or a digraph fixture")


def cmd_reduce(args, inp: Inputs):
    if args.source == "hamiltonicity":
        return reduce_hamiltonicity(_digraph_input(args, inp)).to_dict(), None
    if args.source == "two-ham":
        G, alpha, X, Y = reduce_two_ham(_digraph_input(args, inp))
        return {"graph": G.to_dict(), "alpha": alpha, "x": {"tails": list(X.tails)}, "y": {"tails": list(Y.tails)}}, None
    if args.input:
        P = FinitePoset.from_dict(_read_json(args.input))
    elif args.fixture in fixtures.POSETS:
        P = fixtures.POSETS[args.fixture]()
    else:
        raise ValidationError("jump-number reduction needs --input or a poset fixture")
    G, X, Y = reduce_jump_number(P)
    return {"graph": G.to_dict(), "x": {"tails": list(X.tails)}, "y": {"tails": list(Y.tails)}}, None


def cmd_oracle(args, inp: Inputs):
    X = inp.orientation(args.x)
    Y = inp.orientation(args.y, X.graph)
    res = bfs(X, Y, _mode(args, Y), Caps.from_env(), args.max_depth)
    return res.to_dict(), f"distance: {res.distance}\n"


def cmd_gen(args, inp: Inputs):
    if args.grid:
        try:
            r, c = (int(x) for x in args.grid.lower().split("x"))
        except ValueError:
            raise ValidationError("--grid expects RxC, e.g. 5x5") from None
        if r < 1 or c < 1:
            raise ValidationError("grid dimensions must be positive")
        O = fixtures.grid_instance(r, c)
        return {"graph": O.graph.to_dict(), "orientations": {"min": list(O.tails)}}, None
    if args.random_poset:
        n, p, seed = args.random_poset
        try:
            P = random_poset(int(n), float(p), int(seed), max_height=args.height)
        except ValueError:
            raise ValidationError("--random-poset expects n p seed") from None
        return {"poset": P.to_dict()}, None
    if inp.bundle is not None:
        return inp.bundle, None
    raise ValidationError("gen needs --fixture, --grid or --random-poset")


COMMANDS = {
    "validate": cmd_validate,
    "distance": cmd_distance,
    "sequence": cmd_sequence,
    "flipgraph": cmd_flipgraph,
    "lattice": cmd_lattice,
    "adjacent": cmd_adjacent,
    "reduce": cmd_reduce,
    "oracle": cmd_oracle,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flipdist", description="Flip distances between graph orientations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, formats=("json",)) -> None:
        sp.add_argument("--fixture", choices=fixtures.NAMES)
        sp.add_argument("--graph", help="graph JSON file")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=formats, default="json")

    def pair(sp: argparse.ArgumentParser, y_required: bool = True) -> None:
        sp.add_argument("--x", required=True, help="orientation file or fixture orientation name")
        sp.add_argument("--y", required=y_required, help="orientation file or fixture orientation name")

    def moded(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--mode", required=True, help="cycle, cycle-restricted, vertex, cut-k (with --k) or cut-<k>")
        sp.add_argument("--k", type=int)

    sp = sub.add_parser("validate", help="alpha-orientation and c-orientation checks")
    common(sp)
    pair(sp, y_required=False)
    sp.add_argument("--alpha", help="alpha JSON file (vertex -> outdegree)")

    sp = sub.add_parser("distance", help="flip distance under a mode")
    common(sp, ("json", "text"))
    pair(sp)
    moded(sp)
    sp.add_argument("--max-depth", type=int)

    sp = sub.add_parser("sequence", help="shortest monotone vertex-flip sequence")
    common(sp, ("json", "text"))
    pair(sp)
    sp.add_argument("--check", help="verify this sequence file instead of computing one")

    sp = sub.add_parser("flipgraph", help="flip graph component of an orientation")
    common(sp, ("json", "dot"))
    pair(sp, y_required=False)
    moded(sp)

    sp = sub.add_parser("lattice", help="lattice of c-orientations with z-vectors")
    common(sp, ("json", "dot", "text"))
    sp.add_argument("--x", required=True)
    sp.add_argument("--cap", type=int, default=100_000)

    sp = sub.add_parser("adjacent", help="adjacency on the common base polytope")
    common(sp, ("json", "text"))
    sp.add_argument("--matroids", help="JSON with 'plus' and 'minus' partition matroids (or a fixture bundle)")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--details", action="store_true", help="include the exchange matchings")

    sp = sub.add_parser("reduce", help="build a reduction instance")
    common(sp)
    sp.add_argument("--from", dest="source", required=True, choices=("hamiltonicity", "two-ham", "jump-number"))
    sp.add_argument("--input", help="digraph or poset JSON file")

    sp = sub.add_parser("oracle", help="breadth-first search with witness")
    common(sp, ("json", "text"))
    pair(sp)
    moded(sp)
    sp.add_argument("--max-depth", type=int)

    sp = sub.add_parser("gen", help="fixtures and generated instances")
    common(sp)
    sp.add_argument("--grid", help="RxC grid c-instance")
    sp.add_argument("--random-poset", nargs=3, metavar=("N", "P", "SEED"))
    sp.add_argument("--height", type=int, choices=(2,), help="restrict random posets to height two")
    return p


def run(argv: list[str]) -> tuple[int, str, str]:
    """Run a command; returns (exit code, output text, diagnostics)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        inp = Inputs(args)
        result = COMMANDS[args.command](args, inp)
        obj, text = result[0], result[1]
        dot = result[2] if len(result) > 2 else None
        if args.format == "dot":
            body = dot
        elif args.format == "text":
            body = text if text is not None else dumps(obj)
        else:
            body = dumps(obj)
        if args.out:
            try:
                Path(args.out).write_text(body, encoding="utf-8")
            except OSError as exc:
                raise ValidationError(f"cannot write {args.out}: {exc.strerror}") from None
            body = ""
    except CapExceeded as exc:
        return 3, "", f"flipdist: cap exceeded: {exc}\n"
    except InternalError as exc:
        return 1, "", f"flipdist: internal error: {exc}\n"
    except FlipdistError as exc:
        return 2, "", f"flipdist: {exc}\n"
    return 0, body, ""


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="flipdist: %(message)s")
    argv = sys.argv[1:] if argv is None else argv
    code, body, err = run(argv)
    if err:
        sys.stderr.write(err)
    sys.stdout.write(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
