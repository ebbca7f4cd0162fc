"""Distance classes, per-class enhanced colorings and their assembly.

A graph of girth at least five is partitioned into classes whose members
are pairwise at distance at least ``s``.  Each class ``V_i`` gets a
``V_i``-enhanced coloring on six colours (three colours on ``V_i``, at least
two elsewhere), and the colorings are placed on disjoint palettes.  With
``M`` classes every vertex ends up with at least ``2M + 1`` of ``6M``
colours, so ``chi_f <= 6M / (2M + 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .plane_graph import Graph, PlaneGraph, RewriteError, girth, is_triangle_free
from .reduction_engine import PALETTE, apply_perm, enhance
from .set_coloring import (
    BudgetExceeded,
    ColoringSpec,
    SetColoring,
    compose_shifted,
    full,
    popcount,
    solve,
    subsets,
    verify,
)


class CompositionError(RuntimeError):
    pass


# -- distance classes --------------------------------------------------------


@dataclass(frozen=True)
class DistanceClasses:
    s: int
    classes: tuple[tuple[int, ...], ...]

    @property
    def M(self) -> int:
        return len(self.classes)

    def class_of(self) -> dict[int, int]:
        return {v: i for i, cls in enumerate(self.classes) for v in cls}

    def certificate(self, g: Graph) -> list[str]:
        """BFS check that the classes partition ``V`` and are ``s``-scattered."""
        errs = []
        seen = [v for cls in self.classes for v in cls]
        if sorted(seen) != sorted(g.vertices):
            errs.append("classes do not partition the vertex set")
        where = self.class_of()
        for v in g.vertices:
            if v not in where:
                continue
            for u, d in g.distances_from(v, cutoff=self.s - 1).items():
                if u != v and where.get(u) == where.get(v):
                    errs.append(f"{v} and {u} share class {where[v]} at distance {d} < {self.s}")
        return errs

    def to_dict(self) -> dict:
        return {"s": self.s, "M": self.M, "classes": [list(c) for c in self.classes]}


def power_edges(g: Graph, s: int) -> dict[int, set[int]]:
    """Adjacency of the graph joining vertices at distance 1..s-1."""
    return {v: {u for u in g.distances_from(v, cutoff=s - 1) if u != v} for v in g.vertices}


def degeneracy_order(adj: dict[int, set[int]]) -> list[int]:
    """Smallest-last order (ties by vertex id), returned in colouring order."""
    deg = {v: len(ns) for v, ns in adj.items()}
    left = set(adj)
    removed = []
    while left:
        v = min(left, key=lambda w: (deg[w], w))
        removed.append(v)
        left.remove(v)
        for u in adj[v]:
            if u in left:
                deg[u] -= 1
    return removed[::-1]


def power_color(g: Graph, s: int) -> DistanceClasses:
    """Greedy colouring of the distance-(s-1) power graph in degeneracy order."""
    if s < 1:
        raise ValueError("s must be at least 1")
    adj = power_edges(g, s)
    color: dict[int, int] = {}
    for v in degeneracy_order(adj):
        used = {color[u] for u in adj[v] if u in color}
        color[v] = next(c for c in range(len(adj) + 1) if c not in used)
    k = max(color.values(), default=-1) + 1
    classes = tuple(tuple(sorted(v for v in color if color[v] == i)) for i in range(k))
    return DistanceClasses(s, classes)


def singleton_classes(g: Graph) -> DistanceClasses:
    """One class per vertex; the distance condition is vacuous."""
    return DistanceClasses(1, tuple((v,) for v in sorted(g.vertices)))


# -- enhanced colorings for one class -------------------------------------------


@dataclass(frozen=True)
class ClassColoring:
    members: tuple[int, ...]
    coloring: SetColoring
    method: str


def _trim(m: int, k: int) -> int:
    out = 0
    while popcount(out) < k:
        low = m & -m
        out |= low
        m ^= low
    return out


def enhance_class(g: Graph, members: Iterable[int], budget: int | None = None) -> ClassColoring:
    """A coloring on {1..6} with exactly 3 colours on ``members``, at least 2 elsewhere.

    Members of degree at least two are split; the resulting cycles are
    precoloured from single-vertex enhancements and the rest of the graph is
    extended by search.  When splitting does not apply or the extension
    fails, the whole problem is solved directly.
    """
    members = tuple(sorted(set(members)))
    spec = ColoringSpec.enhanced(X=members)
    col, method = None, "direct"
    if len(members) == 1 and isinstance(g, PlaneGraph):
        col, method = enhance(g, members[0]), "single"
    elif members and isinstance(g, PlaneGraph):
        col = _by_splitting(g, members, budget)
        method = "split"
    if col is None:
        col = solve(g, spec, budget=budget)
        method = "direct"
        if col is None:
            raise CompositionError(f"no enhanced coloring exists for class {list(members)}")
    bad = verify(g, col, spec)
    if bad:
        raise CompositionError(f"class coloring failed to verify: {bad[0]}")
    return ClassColoring(members, col, method)


def _by_splitting(g: PlaneGraph, members: tuple[int, ...], budget: int | None) -> SetColoring | None:
    split = [x for x in members if g.degree(x) >= 2]
    nbhd = [set(g.neighbors(x)) | {x} for x in members]
    if any(a & b for i, a in enumerate(nbhd) for b in nbhd[i + 1 :]):
        return None  # closed neighbourhoods must be disjoint
    h, pre, cycles, psi = g, {}, [], {}
    for x in split:
        try:
            h, cyc = h.split_vertex(x)
        except RewriteError:
            return None
        cycles.append(cyc)
        # neighbours of different members may be adjacent; rename the
        # palette of this member's coloring to agree with what is fixed
        base = enhance(g, x)
        for perm in itertools.permutations(range(1, PALETTE + 1)):
            sets = {y: _trim(apply_perm(base[y], perm), 2) for y in g.neighbors(x)}
            if all(not (m & pre[u]) for y, m in sets.items() for u in g.neighbors(y) if u in pre):
                break
        else:
            return None
        psi[x] = apply_perm(base[x], perm)
        pre.update(sets)
    ring = sorted({v for cyc in cycles for v in cyc})
    try:
        sc = solve(h.subgraph(ring), ColoringSpec(PALETTE, 2, exact={v: 2 for v in ring}, fixed=pre),
                   budget=budget)
        if sc is None:
            return None
        ext = solve(h, ColoringSpec(PALETTE, 2, fixed=dict(sc.sets)), budget=budget)
    except BudgetExceeded:
        return None
    if ext is None:
        return None
    sets = {v: ext[v] for v in g.vertices if v not in members}
    for x in members:
        if x in psi:
            sets[x] = psi[x]
        else:
            banned = 0
            for u in g.neighbors(x):
                banned |= sets[u]
            sets[x] = subsets(full(PALETTE) & ~banned, 3)[0]
    return SetColoring(PALETTE, sets)


# -- assembly -------------------------------------------------------------------


def assemble(g: Graph, classes: DistanceClasses, colorings: list[ClassColoring]) -> SetColoring:
    """Union of the class colorings on shifted 6-colour palettes."""
    if [c.members for c in colorings] != list(classes.classes):
        raise CompositionError("one coloring per class, in class order")
    for c in colorings:
        bad = verify(g, c.coloring, ColoringSpec.enhanced(X=c.members))
        if bad:
            raise CompositionError(f"class {list(c.members)} rejected: {bad[0]}")
    out = compose_shifted([c.coloring for c in colorings])
    need = 2 * classes.M + 1
    bad = verify(g, out, ColoringSpec(out.palette, need))
    if bad:
        raise CompositionError(f"assembled coloring failed to verify: {bad[0]}")
    return out


@dataclass
class CompositionResult:
    classes: DistanceClasses
    parts: list[ClassColoring]
    coloring: SetColoring
    report: dict = field(default_factory=dict)

    @property
    def ratio(self) -> Fraction:
        return Fraction(6 * self.classes.M, 2 * self.classes.M + 1)


def compose(g: Graph, s: int, budget: int | None = None, per_vertex: bool = False) -> CompositionResult:
    """Full pipeline: classes, one enhanced coloring per class, assembly.

    ``per_vertex`` uses singleton classes instead, which only needs the
    graph to be triangle-free and gives a (6n:2n+1)-coloring.
    """
    if per_vertex:
        if not is_triangle_free(g):
            raise CompositionError("graph has a triangle")
        classes = singleton_classes(g)
    else:
        gi = girth(g)
        if gi < 5:
            raise CompositionError(f"girth {gi} is below 5")
        classes = power_color(g, s)
    errs = classes.certificate(g)
    if errs:
        raise CompositionError(errs[0])
    parts = [enhance_class(g, cls, budget) for cls in classes.classes]
    col = assemble(g, classes, parts)
    M = classes.M
    report = {
        "s": classes.s,
        "M": M,
        "palette": 6 * M,
        "cardinality": 2 * M + 1,
        "ratio": str(Fraction(6 * M, 2 * M + 1)),
        "min_cardinality": min((col.size(v) for v in g.vertices), default=0),
        "methods": [p.method for p in parts],
        "verified": True,
    }
    return CompositionResult(classes, parts, col, report)
