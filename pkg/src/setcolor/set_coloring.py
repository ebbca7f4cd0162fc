"""Set colorings: certificates, exact search, Kneser reformulation, composition.

Colour ``c`` (1-based) is bit ``c - 1`` of an int mask; Python ints keep
palettes beyond 64 colours exact.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .plane_graph import Graph


def mask(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        if c < 1:
            raise ValueError(f"colour {c} out of range")
        m |= 1 << (c - 1)
    return m


def colors_of(m: int) -> list[int]:
    out = []
    c = 1
    while m:
        if m & 1:
            out.append(c)
        m >>= 1
        c += 1
    return out


def popcount(m: int) -> int:
    return bin(m).count("1")


def full(a: int) -> int:
    return (1 << a) - 1


def subsets(pool: int, k: int) -> list[int]:
    """k-subsets of ``pool`` in lexicographic order of their sorted colours."""
    return [mask(c) for c in itertools.combinations(colors_of(pool), k)]


class BudgetExceeded(RuntimeError):
    """Search stopped on its node budget; says nothing about satisfiability."""


@dataclass(frozen=True)
class SetColoring:
    palette: int
    sets: Mapping[int, int]

    @classmethod
    def from_lists(cls, palette: int, sets: Mapping[int, Iterable[int]]) -> "SetColoring":
        return cls(palette, {v: mask(cs) for v, cs in sets.items()})

    def __getitem__(self, v: int) -> int:
        return self.sets[v]

    def __contains__(self, v: int) -> bool:
        return v in self.sets

    def colors(self, v: int) -> list[int]:
        return colors_of(self.sets[v])

    def size(self, v: int) -> int:
        return popcount(self.sets[v])

    def restrict(self, keep: Iterable[int]) -> "SetColoring":
        keep = set(keep)
        return SetColoring(self.palette, {v: m for v, m in self.sets.items() if v in keep})

    def updated(self, changes: Mapping[int, int]) -> "SetColoring":
        sets = dict(self.sets)
        sets.update(changes)
        return SetColoring(self.palette, sets)

    def permuted(self, perm: Mapping[int, int]) -> "SetColoring":
        """Apply a colour permutation given as ``{old: new}``."""
        return SetColoring(
            self.palette,
            {v: mask(perm.get(c, c) for c in colors_of(m)) for v, m in self.sets.items()},
        )

    def to_dict(self) -> dict:
        d: dict = {str(v): colors_of(self.sets[v]) for v in sorted(self.sets)}
        d["palette"] = self.palette
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SetColoring":
        data = dict(data)
        try:
            palette = int(data.pop("palette"))
            sets = {int(k): mask(int(c) for c in v) for k, v in data.items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed coloring document: {exc}") from exc
        return cls(palette, sets)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class ColoringSpec:
    """What a coloring must satisfy.

    Every vertex needs at least ``b`` colours (``minimum`` overrides), exactly
    ``exact[v]`` where given, and exactly 3 on ``X``; colours come from
    ``lists[v]`` (default the whole palette); ``fixed`` vertices are
    precoloured.
    """

    a: int
    b: int = 2
    minimum: Mapping[int, int] = field(default_factory=dict)
    exact: Mapping[int, int] = field(default_factory=dict)
    lists: Mapping[int, int] = field(default_factory=dict)
    fixed: Mapping[int, int] = field(default_factory=dict)
    X: frozenset = frozenset()

    @classmethod
    def enhanced(cls, X: Iterable[int] = (), fixed: Mapping[int, int] | None = None,
                 lists: Mapping[int, int] | None = None) -> "ColoringSpec":
        return cls(6, 2, fixed=dict(fixed or {}), lists=dict(lists or {}), X=frozenset(X))

    def exact_size(self, v: int) -> int | None:
        if v in self.exact:
            return self.exact[v]
        if v in self.X:
            return 3
        return None

    def min_size(self, v: int) -> int:
        e = self.exact_size(v)
        return e if e is not None else self.minimum.get(v, self.b)

    def allowed(self, v: int) -> int:
        return self.lists.get(v, full(self.a)) & full(self.a)

    def symmetric(self) -> bool:
        return not self.lists and not self.fixed

    def check(self) -> None:
        """Raise ``ValueError`` if fixed colours contradict their own constraints."""
        for v, m in self.fixed.items():
            if m & ~self.allowed(v):
                raise ValueError(f"fixed set of {v} violates its list")
            e = self.exact_size(v)
            if popcount(m) < self.min_size(v) or (e is not None and popcount(m) != e):
                raise ValueError(f"fixed set of {v} has the wrong size")


@dataclass(frozen=True)
class Violation:
    kind: str
    vertices: tuple[int, ...]
    detail: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "detail": self.detail}


def verify(g: Graph, c: SetColoring, spec: ColoringSpec | None = None) -> list[Violation]:
    """All violations of ``c`` on ``g``; an empty list means the coloring is valid."""
    out: list[Violation] = []
    for v in g.vertices:
        if v not in c:
            out.append(Violation("incomplete", (v,), "vertex has no colour set"))
    for u, v in g.edges():
        if u in c and v in c and c[u] & c[v]:
            out.append(Violation("edge-overlap", (u, v), f"share {colors_of(c[u] & c[v])}"))
    pal = full(c.palette)
    for v in g.vertices:
        if v in c and c[v] & ~pal:
            out.append(Violation("palette", (v,), f"colours outside 1..{c.palette}"))
    if spec is None:
        return out
    for v in g.vertices:
        if v not in c:
            continue
        m = c[v]
        k = popcount(m)
        e = spec.exact_size(v)
        if e is not None and k != e:
            out.append(Violation("cardinality", (v,), f"has {k} colours, needs exactly {e}"))
        elif k < spec.min_size(v):
            out.append(Violation("cardinality", (v,), f"has {k} colours, needs at least {spec.min_size(v)}"))
        if m & ~spec.allowed(v):
            out.append(Violation("list", (v,), f"colours {colors_of(m & ~spec.allowed(v))} not allowed"))
        if v in spec.fixed and m != spec.fixed[v]:
            out.append(Violation("precoloring", (v,), f"expected {colors_of(spec.fixed[v])}"))
    return out


def is_valid(g: Graph, c: SetColoring, spec: ColoringSpec | None = None) -> bool:
    return not verify(g, c, spec)


def solve(g: Graph, spec: ColoringSpec, budget: int | None = None, threads: int = 1) -> SetColoring | None:
    """Exact backtracking search; ``None`` means proven unsatisfiable.

    Vertices are picked by (saturation desc, degree desc, id asc), values
    tried in lexicographic order, and forward checking prunes neighbour
    domains.  Free vertices get exactly their minimum cardinality, which
    loses nothing since supersets can always be shrunk.  ``threads`` is
    accepted for interface parity; the search is sequential so the answer
    never depends on it.
    """
    spec.check()
    adj = g.adjacency()
    verts = g.vertices
    assign: dict[int, int] = {}
    for v, m in spec.fixed.items():
        if v in adj:
            assign[v] = m
    for v in assign:
        for u in adj[v]:
            if u in assign and assign[u] & assign[v]:
                return None
    domains: dict[int, list[int]] = {}
    for v in verts:
        if v in assign:
            continue
        banned = 0
        for u in adj[v]:
            if u in assign:
                banned |= assign[u]
        dom = subsets(spec.allowed(v) & ~banned, spec.min_size(v))
        if not dom:
            return None
        domains[v] = dom
    symmetric = spec.symmetric()
    nodes = [0]
    a_full = full(spec.a)

    def used_colors() -> int:
        u = 0
        for m in assign.values():
            u |= m
        return u

    def pick() -> int:
        best = None
        best_key = None
        for v in domains:
            if v in assign:
                continue
            sat = 0
            for u in adj[v]:
                if u in assign:
                    sat |= assign[u]
            key = (-popcount(sat), -len(adj[v]), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def rec(remaining: int) -> bool:
        if remaining == 0:
            return True
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise BudgetExceeded(f"node budget {budget} exhausted")
        v = pick()
        dom = domains[v]
        used = used_colors() if symmetric else 0
        unused = a_full & ~used
        for m in dom:
            if symmetric:
                new = m & unused
                k = popcount(new)
                if new and new != _lowest_bits(unused, k):
                    continue
            assign[v] = m
            saved = []
            ok = True
            for u in adj[v]:
                if u in assign or u not in domains:
                    continue
                d = domains[u]
                nd = [x for x in d if not x & m]
                if len(nd) != len(d):
                    saved.append((u, d))
                    domains[u] = nd
                    if not nd:
                        ok = False
                        break
            if ok and rec(remaining - 1):
                return True
            for u, d in saved:
                domains[u] = d
            del assign[v]
        return False

    if not rec(len(domains)):
        return None
    return SetColoring(spec.a, {v: assign[v] for v in verts})


def _lowest_bits(m: int, k: int) -> int:
    out = 0
    while k and m:
        low = m & -m
        out |= low
        m ^= low
        k -= 1
    return out


def solve_ab(g: Graph, a: int, b: int, budget: int | None = None) -> SetColoring | None:
    return solve(g, ColoringSpec(a, b, exact={v: b for v in g.vertices}), budget)


# -- Kneser reformulation -------------------------------------------------


@dataclass(frozen=True)
class KneserInstance:
    graph: Graph
    a: int
    b: int
    target: Graph


def to_kneser_instance(g: Graph, a: int, b: int) -> KneserInstance:
    from .generators import kneser_graph

    return KneserInstance(g, a, b, kneser_graph(a, b))


def find_homomorphism(inst: KneserInstance, budget: int | None = None) -> SetColoring | None:
    """Homomorphism into KG(a, b) by plain backtracking, read back as a coloring.

    Independent of :func:`solve`: it searches target vertices, not colour sets.
    """
    g, tgt = inst.graph, inst.target
    adj = g.adjacency()
    tverts = tgt.vertices
    if not tverts:
        return None if g.vertices else SetColoring(inst.a, {})
    order = []
    seen = set()
    roots = set()
    for s in g.vertices:
        if s in seen:
            continue
        roots.add(s)
        queue = [s]
        seen.add(s)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(adj[v]):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    image: dict[int, int] = {}
    nodes = [0]

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise BudgetExceeded("homomorphism search budget exhausted")
        v = order[i]
        cands: set[int] | None = None
        for u in adj[v]:
            if u in image:
                ns = set(tgt.neighbors(image[u]))
                cands = ns if cands is None else cands & ns
        pool = sorted(cands) if cands is not None else tverts
        if v in roots:
            # Kneser graphs are vertex-transitive
            pool = pool[:1]
        for t in pool:
            image[v] = t
            if rec(i + 1):
                return True
            del image[v]
        return False

    if not rec(0):
        return None
    return SetColoring(inst.a, dict(image))


# -- composition ----------------------------------------------------------


def compose_shifted(colorings: list[SetColoring]) -> SetColoring:
    """Union of colorings on shifted palettes {1..a1}, {a1+1..a1+a2}, ..."""
    if not colorings:
        raise ValueError("nothing to compose")
    verts = set(colorings[0].sets)
    for c in colorings:
        if set(c.sets) != verts:
            raise ValueError("colorings cover different vertex sets")
        for m in c.sets.values():
            if m >> c.palette:
                raise ValueError("coloring uses colours outside its palette")
    out = {v: 0 for v in verts}
    offset = 0
    for c in colorings:
        for v, m in c.sets.items():
            out[v] |= m << offset
        offset += c.palette
    return SetColoring(offset, out)


# -- observation on paths x-u-v ---------------------------------------------


def path_extension(px: int, pv: int, a: int = 6) -> int | None:
    """Lexicographically least 2-set for the middle of a path with ends ``px``, ``pv``."""
    free = full(a) & ~(px | pv)
    opts = subsets(free, 2)
    return opts[0] if opts else None


# -- the ten-vertex gadget ------------------------------------------------

GADGET_VERTICES = ("x", "v1", "u1", "v2", "u2", "v3", "u3", "w1", "w3", "y1")
GADGET_EDGES = (
    ("x", "v1"), ("v1", "u1"), ("u1", "u2"), ("u2", "v2"), ("v2", "x"),
    ("u2", "u3"), ("u3", "v3"), ("v3", "x"),
    ("u1", "w1"), ("w1", "w3"), ("w3", "u3"), ("w1", "y1"),
)


def gadget_graph() -> Graph:
    idx = {n: i for i, n in enumerate(GADGET_VERTICES)}
    adj: dict[int, set[int]] = {i: set() for i in range(len(GADGET_VERTICES))}
    for p, q in GADGET_EDGES:
        adj[idx[p]].add(idx[q])
        adj[idx[q]].add(idx[p])
    return Graph(adj)


class PreconditionError(ValueError):
    pass


def check_gadget_lists(L: Mapping[str, int]) -> None:
    F = full(6)
    lo = mask([1, 2, 3])
    if L["x"] != lo:
        raise PreconditionError("L(x) must be {1,2,3}")
    if popcount(L["u1"]) != 3 or L["u1"] & lo != mask([3]):
        raise PreconditionError("L(u1) must have 3 colours meeting {1,2,3} in {3}")
    if L["u3"] != mask([1, 2, 5, 6]):
        raise PreconditionError("L(u3) must be {1,2,5,6}")
    if popcount(L["w3"]) != 4:
        raise PreconditionError("|L(w3)| must be 4")
    if popcount(L["y1"]) != 2 or L["y1"] & ~mask([3, 4, 5, 6]):
        raise PreconditionError("L(y1) must be a 2-subset of {3,4,5,6}")
    for n in ("v1", "v2", "v3", "u2", "w1"):
        if L[n] != F:
            raise PreconditionError(f"L({n}) must be the full palette")


def admissible_S(L: Mapping[str, int]) -> list[int]:
    three = mask([3])
    return [s for s in subsets(L["u1"], 2) if s & three and s & L["y1"]]


def spe_set_color(L: Mapping[str, int], S: int | None = None) -> tuple[int, dict[str, int]]:
    """Colour the gadget from lists ``L`` with ``u1`` receiving ``S``.

    Follows the constructive two-case argument: either ``L(w3)`` has a
    colour outside ``L(u3)``, or ``L(w3) = L(u3) = {1,2,5,6}``.  Choices
    left open by the argument are made lexicographically least.
    """
    check_gadget_lists(L)
    options = admissible_S(L)
    if S is None:
        S = options[0]
    elif S not in options:
        raise PreconditionError("S must be a 2-subset of L(u1) containing 3 and meeting L(y1)")
    F = full(6)
    phi = {"x": mask([1, 2, 3]), "u1": S, "y1": L["y1"]}
    phi["v1"] = mask([4, 5, 6]) & ~S
    s_high = S & ~mask([3])  # the colour of S in {4,5,6}
    alphas = colors_of(L["w3"] & ~L["u3"])
    if alphas:
        alpha = mask([alphas[0]])
        phi["w1"] = subsets(F & ~(S | L["y1"] | alpha), 2)[0]
        phi["w3"] = [m for m in subsets(L["w3"] & ~phi["w1"], 2) if m & alpha][0]
        u3_opts = [
            m for m in subsets(L["u3"] & ~phi["w3"], 2) if popcount(m & mask([1, 2])) == 1
        ]
        phi["u3"] = u3_opts[0]
        p = phi["u3"] & mask([1, 2])
        q = phi["u3"] & mask([5, 6])
        p_other = mask([1, 2]) & ~p
        t = colors_of(mask([4, 5, 6]) & ~(s_high | q))[0]
        phi["u2"] = p_other | mask([t])
        phi["v2"] = mask([4, 5, 6]) & ~mask([t])
        phi["v3"] = mask([4, 5, 6]) & ~q
    else:
        z = colors_of(mask([3, 4, 5, 6]) & ~(S | L["y1"]))[0]
        phi["w1"] = mask([1, z])
        r = colors_of(mask([5, 6]) & ~phi["w1"])[0]
        phi["w3"] = mask([2, r])
        r_other = colors_of(mask([5, 6]) & ~mask([r]))[0]
        phi["u3"] = mask([1, r_other])
        phi["v3"] = mask([4, r])
        t = colors_of(mask([4, r]) & ~S)[0]
        phi["u2"] = mask([2, t])
        phi["v2"] = subsets(mask([4, 5, 6]) & ~mask([t]), 2)[0]
    return S, phi


def gadget_spec(L: Mapping[str, int], S: int) -> tuple[Graph, ColoringSpec]:
    """The gadget with lists ``L``, enhanced at x, ``u1`` pinned to ``S``."""
    idx = {n: i for i, n in enumerate(GADGET_VERTICES)}
    lists = {idx[n]: L[n] for n in GADGET_VERTICES}
    return gadget_graph(), ColoringSpec.enhanced(X=[idx["x"]], lists=lists, fixed={idx["u1"]: S})


def gadget_lists() -> list[dict[str, int]]:
    """All 270 admissible list assignments on the gadget."""
    F = full(6)
    out = []
    for hi in itertools.combinations([4, 5, 6], 2):
        for y1 in itertools.combinations([3, 4, 5, 6], 2):
            for w3 in itertools.combinations(range(1, 7), 4):
                out.append({
                    "x": mask([1, 2, 3]), "u1": mask((3,) + hi), "u3": mask([1, 2, 5, 6]),
                    "w3": mask(w3), "y1": mask(y1),
                    "v1": F, "v2": F, "v3": F, "u2": F, "w1": F,
                })
    return out
