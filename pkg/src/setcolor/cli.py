"""Command-line entry point.

Exit codes: 0 success, 1 violations found or unsatisfiable, 2 search budget
exhausted, 3 malformed or unsuitable input.  Results go to files or stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .plane_graph import EmbeddingError, Graph, PlaneGraph, RewriteError

OK, VIOLATION, BUDGET, MALFORMED = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- io helpers -----------------------------------------------------------------


def dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_graph(path: str) -> PlaneGraph:
    """A graph document, an instance document (its ``graph``) or an edge list."""
    from .generators import from_edge_list

    if path.endswith(".txt"):
        try:
            return from_edge_list(Path(path).read_text())
        except OSError as exc:
            raise InputError(str(exc)) from exc
    data = read_json(path)
    if isinstance(data, dict) and "graph" in data:
        data = data["graph"]
    return PlaneGraph.from_dict(data)


def require_plane(g: PlaneGraph) -> None:
    if not g.euler_ok():
        raise InputError("rotation system is not a plane embedding")


def graph_dict(g: Graph) -> dict:
    if isinstance(g, PlaneGraph):
        return g.to_dict()
    return {"vertices": g.vertices, "rotations": {str(v): sorted(g.neighbors(v)) for v in g.vertices}}


def to_dot(g: Graph, coloring=None, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    if isinstance(g, PlaneGraph):
        for f in g.faces():
            tag = " outer" if g.outer is not None and f.id == g.outer_face().id else ""
            lines.append(f"  // face {f.id}{tag}: {' '.join(map(str, f.vertices))}")
    for v in g.vertices:
        label = str(v)
        if coloring is not None and v in coloring:
            label += " {" + ",".join(map(str, coloring.colors(v))) + "}"
        lines.append(f'  {v} [label="{label}"];')
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render(args, payload: dict, g: Graph | None = None, coloring=None) -> str:
    if getattr(args, "format", "json") == "dot" and g is not None:
        return to_dot(g, coloring)
    return dump(payload)


def int_list(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(t) for t in text.split(",") if t.strip()]


# -- subcommands ------------------------------------------------------------------


def cmd_generate(args) -> int:
    from .generators import GeneratorRequest

    g = GeneratorRequest(args.family, args.n, args.k, 0, args.seed).build()
    if isinstance(g, PlaneGraph) and args.x is not None:
        g = g.with_outer(g.outer, [args.x])
    emit(render(args, graph_dict(g), g), args.out)
    return OK


def _spec(args, g):
    from .set_coloring import ColoringSpec

    X = int_list(args.x)
    if args.b is None and X:
        return ColoringSpec.enhanced(X=X)
    return ColoringSpec(args.a, args.b or 2, X=frozenset(X))


def cmd_solve(args) -> int:
    from .set_coloring import solve

    g = load_graph(args.input)
    col = solve(g, _spec(args, g), budget=args.budget, threads=args.threads)
    if col is None:
        emit(dump({"status": "unsat"}), args.out)
        return VIOLATION
    emit(render(args, col.to_dict(), g, col), args.out)
    return OK


def cmd_verify(args) -> int:
    from .set_coloring import SetColoring, verify

    g = load_graph(args.input)
    try:
        col = SetColoring.from_dict(read_json(args.coloring))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed coloring: {exc}") from exc
    spec = _spec(args, g)
    if args.a is None:
        spec = type(spec)(col.palette, spec.b, X=spec.X)
    bad = verify(g, col, spec)
    emit(dump({"ok": not bad, "violations": [v.to_dict() for v in bad]}), args.out)
    return VIOLATION if bad else OK


def cmd_chif(args) -> int:
    from .fractional import check_certificate, chi_f

    g = load_graph(args.input)
    res = chi_f(g)
    errs = check_certificate(g, res)
    if errs:
        print(f"certificate check failed: {errs[0]}", file=sys.stderr)
        return VIOLATION
    if args.certificate:
        emit(dump(res.to_dict()), args.certificate)
    emit(f"{res.value}\n", args.out)
    return OK


def cmd_enhance(args) -> int:
    from .reduction_engine import enhance

    g = load_graph(args.input)
    require_plane(g)
    x = args.x if args.x is not None else (min(g.x) if g.x else None)
    if x is None:
        raise InputError("no vertex given with --x and none marked in the input")
    col, trace = enhance(g, x, threshold=args.threshold, with_trace=True)
    if args.trace and trace is not None:
        emit(dump(trace.to_dict()), args.trace)
    emit(render(args, col.to_dict(), g, col), args.out)
    return OK


def cmd_extend(args) -> int:
    from .reduction_engine import Engine, Instance

    data = read_json(args.input)
    try:
        inst = Instance.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance: {exc}") from exc
    require_plane(inst.g)
    inst.validate()
    col, trace = Engine(args.threshold, budget=args.budget).extend(inst)
    if args.trace:
        emit(dump(trace.to_dict()), args.trace)
    emit(render(args, col.to_dict(), inst.g, col), args.out)
    return OK


def cmd_discharge(args) -> int:
    from .discharging import audit

    g = load_graph(args.input)
    require_plane(g)
    x = args.x if args.x is not None else (min(g.x) if g.x else None)
    report = audit(g, x, strict=args.strict)
    emit(dump(report), args.report)
    return OK if report["conserved"] and not report["transfer_problems"] else VIOLATION


def cmd_compose(args) -> int:
    from .composition import compose

    g = load_graph(args.input)
    res = compose(g, args.s, budget=args.budget, per_vertex=args.per_vertex)
    report = dict(res.report, classes=res.classes.to_dict()["classes"])
    if args.report:
        emit(dump(report), args.report)
    emit(render(args, res.coloring.to_dict(), g, res.coloring), args.out)
    return OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="setcolor", description="Set colorings of triangle-free plane graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker count; results never depend on it")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="search node limit")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", parents=[common], help="build a graph from a named family")
    s.add_argument("--family", required=True)
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--x", type=int, default=None, help="mark this vertex")
    s.set_defaults(run=cmd_generate)

    for name, fn, hint in (("solve", cmd_solve, "find a coloring"), ("verify", cmd_verify, "check a coloring")):
        s = sub.add_parser(name, parents=[common], help=hint)
        s.add_argument("--input", required=True)
        s.add_argument("--a", type=int, default=6 if name == "solve" else None)
        s.add_argument("--b", type=int, default=None)
        s.add_argument("--x", default=None, help="comma-separated vertices needing exactly 3 colours")
        if name == "verify":
            s.add_argument("--coloring", required=True)
        s.set_defaults(run=fn)

    s = sub.add_parser("chif", parents=[common], help="exact fractional chromatic number")
    s.add_argument("--input", required=True)
    s.add_argument("--certificate", default=None)
    s.set_defaults(run=cmd_chif)

    s = sub.add_parser("enhance", parents=[common], help="coloring with 3 colours at x")
    s.add_argument("--input", required=True)
    s.add_argument("--x", type=int, default=None)
    s.add_argument("--threshold", type=int, default=12)
    s.add_argument("--trace", default=None)
    s.set_defaults(run=cmd_enhance)

    s = sub.add_parser("extend", parents=[common], help="extend a precoloured outer cycle")
    s.add_argument("--input", required=True)
    s.add_argument("--threshold", type=int, default=12)
    s.add_argument("--trace", default=None)
    s.set_defaults(run=cmd_extend)

    s = sub.add_parser("discharge", parents=[common], help="charge audit around x")
    s.add_argument("--input", required=True)
    s.add_argument("--x", type=int, default=None)
    s.add_argument("--report", default=None)
    s.add_argument("--strict", action="store_true", help="reject non-pentagonal inner faces")
    s.set_defaults(run=cmd_discharge)

    s = sub.add_parser("compose", parents=[common], help="assemble a (6M:2M+1)-coloring")
    s.add_argument("--input", required=True)
    s.add_argument("--s", type=int, default=5)
    s.add_argument("--per-vertex", action="store_true", help="one class per vertex")
    s.add_argument("--report", default=None)
    s.set_defaults(run=cmd_compose)
    return p


def main(argv: list[str] | None = None) -> int:
    from .composition import CompositionError
    from .discharging import HypothesisError
    from .reduction_engine import EngineDefect, PreconditionError as EnginePrecondition
    from .set_coloring import BudgetExceeded, PreconditionError

    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("--threads must be positive", file=sys.stderr)
        return MALFORMED
    try:
        return args.run(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return BUDGET
    except (InputError, EmbeddingError, RewriteError, HypothesisError, PreconditionError,
            EnginePrecondition) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED
    except (CompositionError, EngineDefect) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return VIOLATION
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
