"""Reduce, solve, lift: constructive extension of enhanced colorings.

An :class:`Instance` is a triangle-free plane graph whose outer face is a
cycle ``C`` of length at most five, a marked set ``X`` (at most one vertex
of ``C``) and an enhanced precoloring of ``C``.  :meth:`Engine.extend`
shrinks the instance with local rewrites, solves small instances exactly,
and lifts colorings back, verifying every lift.  A lift that does not
verify is replaced by an exact solve of the instance at hand.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .plane_graph import (
    PlaneGraph,
    RewriteError,
    biconnected_components,
    creates_triangle,
    is_triangle_free,
)
from .set_coloring import (
    ColoringSpec,
    SetColoring,
    colors_of,
    full,
    mask,
    popcount,
    solve,
    subsets,
    verify,
)

PALETTE = 6
ALL = full(PALETTE)

RULES = (
    "DEG2-REMOVE",
    "CUT-MERGE",
    "NONFACIAL-CYCLE-SPLIT",
    "FOUR-CYCLE-IDENTIFY",
    "SIX-FACE-CHORD",
    "L233",
    "L232325",
    "L232424",
    "LTIE5",
    "L242324",
    "L232523",
    "SPE-SET-GADGET",
)


class PreconditionError(ValueError):
    pass


class NormalizationError(ValueError):
    pass


class EngineDefect(RuntimeError):
    """The exact solver refuted an instance the engine believed extendable."""

    def __init__(self, message: str, trace: "Trace | None" = None):
        super().__init__(message)
        self.trace = trace


# -- colour permutations ----------------------------------------------------

Perm = tuple[int, ...]  # perm[c - 1] is the image of colour c
IDENTITY: Perm = tuple(range(1, PALETTE + 1))


def apply_perm(m: int, perm: Perm) -> int:
    return mask(perm[c - 1] for c in colors_of(m))


def invert(perm: Perm) -> Perm:
    inv = [0] * len(perm)
    for i, c in enumerate(perm):
        inv[c - 1] = i + 1
    return tuple(inv)


def find_permutation(sets: Mapping[str, int], pred: Callable[[dict[str, int]], bool]) -> Perm | None:
    """Lexicographically least palette permutation making ``pred`` hold on the images."""
    for perm in itertools.permutations(IDENTITY):
        if pred({k: apply_perm(m, perm) for k, m in sets.items()}):
            return perm
    return None


def color_permutation_normalize(
    c: SetColoring, pinned: Iterable[int], forms: Iterable[int] | None = None
) -> tuple[SetColoring, Perm]:
    """Relabel colours so the pinned vertices' sets take the lowest colours.

    Colours are ranked by which pinned sets contain them (earlier pins
    first, members before non-members), ties by colour.  With ``forms``
    the images must equal the given masks.
    """
    pinned = list(pinned)
    n = max(c.palette, PALETTE)
    key = lambda col: (tuple(0 if c[p] >> (col - 1) & 1 else 1 for p in pinned), col)  # noqa: E731
    order = sorted(range(1, n + 1), key=key)
    perm = [0] * n
    for new, old in enumerate(order, start=1):
        perm[old - 1] = new
    perm_t = tuple(perm)
    out = SetColoring(c.palette, {v: apply_perm(m, perm_t) for v, m in c.sets.items()})
    if forms is not None:
        for p, want in zip(pinned, forms):
            if out[p] != want:
                raise NormalizationError(f"set of {p} cannot be brought to {colors_of(want)}")
    return out, perm_t


def unpermute(c: SetColoring, perm: Perm) -> SetColoring:
    inv = invert(perm)
    return SetColoring(c.palette, {v: apply_perm(m, inv) for v, m in c.sets.items()})


# -- instances and traces --------------------------------------------------


@dataclass(frozen=True)
class Instance:
    g: PlaneGraph
    cycle: tuple[int, ...]
    X: frozenset
    pre: Mapping[int, int]

    def spec(self) -> ColoringSpec:
        return ColoringSpec.enhanced(X=self.X, fixed=self.pre)

    @property
    def boundary(self) -> frozenset:
        return frozenset(self.cycle)

    def validate(self) -> None:
        g = self.g
        if not is_triangle_free(g):
            raise PreconditionError("graph has a triangle")
        f = g.outer_face()
        if f is None or not f.is_cycle() or set(f.vertices) != set(self.cycle):
            raise PreconditionError("outer face is not bounded by the given cycle")
        if len(self.cycle) > 5:
            raise PreconditionError("outer cycle longer than 5")
        if not self.X <= self.boundary or len(self.X) > 1:
            raise PreconditionError("X must be at most one vertex of the outer cycle")
        if set(self.pre) != self.boundary:
            raise PreconditionError("precoloring must cover exactly the outer cycle")
        pc = SetColoring(PALETTE, dict(self.pre))
        spec = ColoringSpec.enhanced(X=self.X)
        bad = verify(g.subgraph(self.cycle), pc, spec)
        if bad:
            raise PreconditionError(f"precoloring is not enhanced: {bad[0].kind} at {bad[0].vertices}")

    def to_dict(self) -> dict:
        return {
            "graph": self.g.to_dict(),
            "cycle": list(self.cycle),
            "x": sorted(self.X),
            "precoloring": {str(v): colors_of(m) for v, m in sorted(self.pre.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        g = PlaneGraph.from_dict(data["graph"])
        X = frozenset(data.get("x", sorted(g.x)))
        f = g.outer_face()
        cyc = tuple(data["cycle"]) if "cycle" in data else (f.vertices if f else ())
        pre = {int(k): mask(v) for k, v in data["precoloring"].items()}
        return cls(g.with_outer(g.outer, X), tuple(cyc), X, pre)


def make_instance(g: PlaneGraph, X: Iterable[int], pre: Mapping[int, int]) -> Instance:
    X = frozenset(X)
    f = g.outer_face()
    if f is None:
        raise PreconditionError("graph has no outer face marked")
    inst = Instance(g.with_outer(g.outer, X), f.vertices, X, dict(pre))
    inst.validate()
    return inst


@dataclass
class Trace:
    """One node of the reduction tree.

    ``delta`` holds the colour sets the lift set on this instance (all of
    them for base and fallback nodes); replaying children and applying
    deltas rebuilds the final coloring.
    """

    rule: str
    match: tuple
    vertices: tuple[int, ...]
    recipe: str = ""
    perm: Perm | None = None
    fallback: bool = False
    delta: dict[int, int] = field(default_factory=dict)
    children: list["Trace"] = field(default_factory=list)

    def steps(self) -> Iterable["Trace"]:
        yield self
        for c in self.children:
            yield from c.steps()

    def rules_used(self) -> list[str]:
        return [t.rule for t in self.steps()]

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "match": list(self.match),
            "vertices": list(self.vertices),
            "recipe": self.recipe,
            "perm": list(self.perm) if self.perm else None,
            "fallback": self.fallback,
            "delta": {str(v): colors_of(m) for v, m in sorted(self.delta.items())},
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Trace":
        return cls(
            d["rule"], tuple(d["match"]), tuple(d["vertices"]), d.get("recipe", ""),
            tuple(d["perm"]) if d.get("perm") else None, d.get("fallback", False),
            {int(k): mask(v) for k, v in d["delta"].items()},
            [cls.from_dict(c) for c in d.get("children", [])],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def replay(trace: Trace) -> SetColoring:
    """Rebuild the coloring recorded by ``trace`` without rerunning any search."""
    sets: dict[int, int] = {}
    for child in trace.children:
        sets.update(replay(child).sets)
    sets.update(trace.delta)
    keep = set(trace.vertices)
    return SetColoring(PALETTE, {v: m for v, m in sets.items() if v in keep})


# -- small helpers shared with the lemma rules -------------------------------


def inner_faces(g: PlaneGraph):
    return g.inner_faces()


def common_face(g: PlaneGraph, u: int, v: int):
    for f in g.inner_faces():
        vs = f.vertices
        if u in vs and v in vs:
            return f
    return None


def identify(g: PlaneGraph, keep: int, drop: int) -> PlaneGraph | None:
    f = common_face(g, keep, drop)
    if f is None:
        return None
    try:
        return g.identify_vertices(keep, drop, f)
    except RewriteError:
        return None


def add_edge(g: PlaneGraph, u: int, v: int) -> PlaneGraph | None:
    if g.has_edge(u, v) or u == v:
        return None
    f = common_face(g, u, v)
    if f is None:
        return None
    return g.add_edge_in_face(u, v, f)


def local_complete(
    g: PlaneGraph, sets: Mapping[int, int], region: Iterable[int], X: frozenset = frozenset()
) -> dict[int, int] | None:
    """Colour ``region`` given the sets of its other neighbours (first solution found)."""
    region = sorted(set(region))
    lists = {}
    for v in region:
        banned = 0
        for u in g.neighbors(v):
            if u not in region and u in sets:
                banned |= sets[u]
        lists[v] = ALL & ~banned
    sub = g.subgraph(region)
    spec = ColoringSpec(PALETTE, 2, exact={v: 3 if v in X else 2 for v in region}, lists=lists)
    res = solve(sub, spec)
    return None if res is None else dict(res.sets)


def cycles_4_5(g: PlaneGraph) -> list[tuple[int, ...]]:
    """All 4- and 5-cycles, each once: starts at its least vertex, second < last."""
    out = []
    adj = g.adjacency()
    for s in g.vertices:
        stack = [(s, (s,))]
        while stack:
            v, path = stack.pop()
            for u in adj[v]:
                if u == s and len(path) >= 4 and path[1] < path[-1]:
                    out.append(path)
                elif u > s and u not in path and len(path) < 5:
                    stack.append((u, path + (u,)))
    return sorted(set(out))


def inside_of(g: PlaneGraph, cyc: tuple[int, ...]) -> tuple[frozenset, bool]:
    """Vertices strictly inside ``cyc`` and whether forward darts face outward.

    "Inside" is the side without the outer face.  The two sides are found
    by walking the dual without crossing cycle edges.
    """
    k = len(cyc)
    cedges = {frozenset((cyc[i], cyc[(i + 1) % k])) for i in range(k)}
    fwd = [(cyc[i], cyc[(i + 1) % k]) for i in range(k)]

    def region(seeds):
        seen = set()
        todo = [g.face_of(d).id for d in seeds]
        faces = g.faces()
        while todo:
            fid = todo.pop()
            if fid in seen:
                continue
            seen.add(fid)
            for a, b in faces[fid].darts:
                if frozenset((a, b)) not in cedges:
                    todo.append(g.face_of((b, a)).id)
        return seen

    left = region(fwd)
    outer = g.outer_face()
    forward_out = outer is not None and outer.id in left
    inside = region([(b, a) for a, b in fwd]) if forward_out else left
    faces = g.faces()
    verts = set()
    for fid in inside:
        verts.update(faces[fid].vertices)
    return frozenset(verts - set(cyc)), forward_out


def restrict_plane(g: PlaneGraph, keep: Iterable[int], outer, X) -> PlaneGraph:
    keep = set(keep)
    rot = {v: [u for u in ns if u in keep] for v, ns in g.rotation.items() if v in keep}
    return PlaneGraph(rot, outer, frozenset(X) & keep)


# -- the engine -------------------------------------------------------------


@dataclass
class Reduction:
    """A matched rule: ``run`` recurses and returns (candidate sets, children, recipe, perm)."""

    rule: str
    match: tuple
    run: Callable[["Engine"], tuple[dict[int, int] | None, list[Trace], str, Perm | None]]


class Engine:
    def __init__(self, threshold: int = 12, budget: int | None = None):
        self.threshold = threshold
        self.budget = budget
        from . import lemma_rules

        self.rules: list[Callable[[Instance], Reduction | None]] = [
            self._deg2_remove,
            self._cut_merge,
            self._nonfacial_split,
            self._four_cycle_identify,
            self._six_face_chord,
            lemma_rules.l233,
            lemma_rules.l232325,
            lemma_rules.l232424,
            lemma_rules.ltie5,
            lemma_rules.l242324,
            lemma_rules.l232523,
        ]

    # public ---------------------------------------------------------------

    def extend(self, inst: Instance) -> tuple[SetColoring, Trace]:
        inst.validate()
        return self._extend(inst)

    # core -----------------------------------------------------------------

    def _solve(self, inst: Instance, rule: str, match: tuple = (), fallback: bool = False,
               children: list[Trace] | None = None) -> tuple[SetColoring, Trace]:
        res = solve(inst.g, inst.spec(), self.budget)
        trace = Trace(rule, match, tuple(inst.g.vertices), fallback=fallback, children=children or [])
        if res is None:
            raise EngineDefect(f"exact solver refuted an instance on {inst.g.num_vertices} vertices", trace)
        trace.delta = dict(res.sets)
        return res, trace

    def _extend(self, inst: Instance) -> tuple[SetColoring, Trace]:
        if inst.g.num_vertices <= self.threshold or set(inst.g.vertices) <= inst.boundary:
            return self._solve(inst, "BASE")
        for rule in self.rules:
            red = rule(inst)
            if red is None:
                continue
            sets, children, recipe, perm = red.run(self)
            verts = tuple(inst.g.vertices)
            if sets is not None:
                cand = SetColoring(PALETTE, {v: sets[v] for v in verts if v in sets})
                if not verify(inst.g, cand, inst.spec()):
                    base: dict[int, int] = {}
                    for ch in children:
                        base.update(replay(ch).sets)
                    delta = {v: m for v, m in cand.sets.items() if base.get(v) != m}
                    return cand, Trace(red.rule, red.match, verts, recipe, perm, False, delta, children)
            # recipe did not apply here: solve this instance outright
            col, trace = self._solve(inst, red.rule, red.match, fallback=True)
            trace.recipe = recipe
            return col, trace
        return self._solve(inst, "SOLVE", fallback=True)

    # structural rules -----------------------------------------------------

    def _deg2_remove(self, inst: Instance) -> Reduction | None:
        g = inst.g
        for v in g.vertices:
            if v in inst.boundary:
                continue
            d = g.degree(v)
            if d <= 1 or (d == 2 and not g.neighbors(v) & inst.X):
                return Reduction("DEG2-REMOVE", (v,), self._lift_removed(inst, v))
        return None

    def _lift_removed(self, inst: Instance, v: int):
        def run(engine: "Engine"):
            sub = Instance(inst.g.delete_vertices([v]), inst.cycle, inst.X, inst.pre)
            col, tr = engine._extend(sub)
            banned = 0
            for u in inst.g.neighbors(v):
                banned |= col[u]
            opts = subsets(ALL & ~banned, 2)
            if not opts:
                return None, [tr], "free-pair", None
            sets = dict(col.sets)
            sets[v] = opts[0]
            return sets, [tr], "free-pair", None

        return run

    def _cut_merge(self, inst: Instance) -> Reduction | None:
        g = inst.g
        comps = g.components()
        if len(comps) > 1:
            main = next(c for c in comps if inst.cycle[0] in c)
            rest = sorted(v for c in comps if c is not main for v in c)
            return Reduction("CUT-MERGE", tuple(rest), self._lift_components(inst, rest))
        blocks = biconnected_components(g)
        if len(blocks) <= 1:
            return None
        block_of: dict[int, list[int]] = {}
        for i, b in enumerate(blocks):
            for v in b:
                block_of.setdefault(v, []).append(i)
        best = None
        for f in g.inner_faces():
            vs = sorted(set(f.vertices))
            for a, b in itertools.combinations(vs, 2):
                if set(block_of[a]) & set(block_of[b]):
                    continue
                if g.has_edge(a, b) or creates_triangle(g, a, b):
                    continue
                if best is None or (a, b) < best[:2]:
                    best = (a, b, f)
                break
        if best is None:
            return None
        a, b, f = best

        def run(engine: "Engine"):
            sub = Instance(g.add_edge_in_face(a, b, f), inst.cycle, inst.X, inst.pre)
            col, tr = engine._extend(sub)
            return dict(col.sets), [tr], "same-coloring", None

        return Reduction("CUT-MERGE", (a, b), run)

    def _lift_components(self, inst: Instance, rest: list[int]):
        def run(engine: "Engine"):
            sub = Instance(inst.g.delete_vertices(rest), inst.cycle, inst.X, inst.pre)
            col, tr = engine._extend(sub)
            other = inst.g.subgraph(rest)
            res = solve(other, ColoringSpec(PALETTE, 2), engine.budget)
            side = Trace("BASE", (), tuple(rest), delta=dict(res.sets) if res else {})
            if res is None:
                return None, [tr, side], "components", None
            sets = dict(col.sets)
            sets.update(res.sets)
            return sets, [tr, side], "components", None

        return run

    def _nonfacial_split(self, inst: Instance) -> Reduction | None:
        g = inst.g
        for cyc in cycles_4_5(g):
            if set(cyc) == inst.boundary:
                continue
            inside, forward_out = inside_of(g, cyc)
            if not inside:
                continue
            return Reduction("NONFACIAL-CYCLE-SPLIT", cyc, self._lift_split(inst, cyc, inside, forward_out))
        return None

    def _lift_split(self, inst: Instance, cyc, inside, forward_out):
        def run(engine: "Engine"):
            g = inst.g
            g1 = g.delete_vertices(inside)
            col1, tr1 = engine._extend(Instance(g1, inst.cycle, inst.X, inst.pre))
            outer = (cyc[0], cyc[1]) if forward_out else (cyc[1], cyc[0])
            X2 = inst.X & frozenset(cyc)
            g2 = restrict_plane(g, set(cyc) | inside, outer, X2)
            pre2 = {v: col1[v] for v in cyc}
            col2, tr2 = engine._extend(Instance(g2, tuple(g2.outer_face().vertices), X2, pre2))
            sets = dict(col1.sets)
            sets.update(col2.sets)
            return sets, [tr1, tr2], "glue-on-cycle", None

        return run

    def _four_cycle_identify(self, inst: Instance) -> Reduction | None:
        g = inst.g
        best = None
        for f in g.inner_faces():
            if f.length != 4 or not f.is_cycle():
                continue
            vs = f.vertices
            for i in range(4):
                keep, drop = vs[i], vs[(i + 2) % 4]
                if drop in inst.boundary:
                    continue
                if drop in inst.X and keep not in inst.X:
                    continue
                if best is not None and (keep, drop) >= best[:2]:
                    continue
                h = identify(g, keep, drop)
                if h is None or not is_triangle_free(h):
                    continue
                best = (keep, drop, h)
        if best is None:
            return None
        keep, drop, h = best

        def run(engine: "Engine"):
            col, tr = engine._extend(Instance(h, inst.cycle, inst.X, inst.pre))
            sets = dict(col.sets)
            sets[drop] = col[keep]
            return sets, [tr], "copy-identified", None

        return Reduction("FOUR-CYCLE-IDENTIFY", (keep, drop), run)

    def _six_face_chord(self, inst: Instance) -> Reduction | None:
        g = inst.g
        best = None
        for f in g.inner_faces():
            if f.length < 6 or not f.is_cycle():
                continue
            vs = f.vertices
            k = len(vs)
            for i in range(k):
                for step in (1, -1):
                    v1, v4 = vs[i], vs[(i + 3 * step) % k]
                    if v1 in inst.boundary or g.has_edge(v1, v4) or creates_triangle(g, v1, v4):
                        continue
                    if best is None or (v1, v4) < best[:2]:
                        best = (v1, v4, f)
        if best is None:
            return None
        v1, v4, f = best

        def run(engine: "Engine"):
            col, tr = engine._extend(Instance(g.add_edge_in_face(v1, v4, f), inst.cycle, inst.X, inst.pre))
            return dict(col.sets), [tr], "same-coloring", None

        return Reduction("SIX-FACE-CHORD", (v1, v4), run)


def extend(inst: Instance, threshold: int = 12) -> SetColoring:
    return Engine(threshold).extend(inst)[0]


ENHANCE_CYCLE = (mask([1, 2, 3]), mask([4, 5]), mask([1, 6]), mask([4, 5]))


def enhance_instance(g: PlaneGraph, x: int) -> tuple[Instance | None, list[int]]:
    """Wrap the component of ``x`` in a 4-cycle x v1 v2 v3 bounding the outer face.

    Returns the instance (``None`` when ``x`` is isolated) and the vertices
    of the other components.
    """
    comp = next(c for c in g.components() if x in c)
    others = sorted(set(g.vertices) - set(comp))
    h = g.with_outer(None, frozenset())
    h = h.delete_vertices(others) if others else h
    if h.degree(x) == 0:
        return None, others
    f = h.faces_at(x)[0]
    h, v1 = h.add_pendant(x, f)
    h, v2 = h.add_pendant(v1, h.face_of((x, v1)))
    h, v3 = h.add_pendant(v2, h.face_of((v1, v2)))
    h = h.add_edge_in_face(v3, x, h.face_of((v2, v3)))
    quad = next(f for f in h.faces() if f.length == 4 and set(f.vertices) == {x, v1, v2, v3})
    h = h.with_outer(quad.darts[0], {x})
    cyc = (x, v1, v2, v3)
    pre = dict(zip(cyc, ENHANCE_CYCLE))
    return Instance(h, tuple(h.outer_face().vertices), frozenset([x]), pre), others


def enhance(g: PlaneGraph, x: int, threshold: int = 12, with_trace: bool = False):
    """An {x}-enhanced coloring of ``g``: sizes >= 2 everywhere, exactly 3 at ``x``."""
    if x not in g.rotation:
        raise PreconditionError(f"{x} is not a vertex")
    if not is_triangle_free(g):
        raise PreconditionError("graph has a triangle")
    inst, others = enhance_instance(g, x)
    sets: dict[int, int] = {}
    trace = None
    if inst is None:
        sets[x] = mask([1, 2, 3])
    else:
        col, trace = Engine(threshold).extend(inst)
        sets.update({v: m for v, m in col.sets.items() if v in g.rotation})
    if others:
        res = solve(g.subgraph(others), ColoringSpec(PALETTE, 2))
        sets.update(res.sets)
    out = SetColoring(PALETTE, {v: sets[v] for v in g.vertices})
    bad = verify(g, out, ColoringSpec.enhanced(X=[x]))
    if bad:
        raise EngineDefect(f"enhanced coloring failed to verify: {bad[0]}", trace)
    return (out, trace) if with_trace else out
