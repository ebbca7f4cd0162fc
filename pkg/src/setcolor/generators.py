"""Example graphs and test corpora."""

from __future__ import annotations

import itertools
import math
import random
import warnings
from dataclasses import dataclass

from .plane_graph import (
    EmbeddingError,
    Graph,
    PlaneGraph,
    creates_triangle,
    from_coordinates,
    girth,
    is_triangle_free,
)


@dataclass(frozen=True)
class GeneratorRequest:
    family: str
    n: int = 0
    k: int = 0
    d: int = 0
    seed: int = 0

    def build(self) -> Graph:
        f = self.family
        if f == "cycle":
            return cycle(self.n)
        if f == "path":
            return path(self.n)
        if f == "wheel_subdivided":
            return wheel_subdivided(self.k or 5)
        if f == "kneser":
            return kneser_graph(self.n, self.k)
        if f == "random_trifree":
            return random_trifree_planar(self.n, self.seed)
        if f == "jones":
            return jones_like(self.n)
        if f in PENTAGULATION_FAMILIES:
            return pentagulation(f, self.n)
        raise ValueError(f"unknown family {f!r}")


def _ring(n: int, radius: float, phase: float = 0.0) -> list[tuple[float, float]]:
    return [
        (radius * math.cos(phase + 2 * math.pi * i / n), radius * math.sin(phase + 2 * math.pi * i / n))
        for i in range(n)
    ]


def cycle(n: int) -> PlaneGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return PlaneGraph({i: [(i + 1) % n, (i - 1) % n] for i in range(n)}, outer=(0, 1))


def path(n: int) -> PlaneGraph:
    if n < 1:
        raise ValueError("a path needs at least one vertex")
    rot = {i: [j for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)}
    return PlaneGraph(rot, outer=(0, 1) if n > 1 else None)


def complete_graph(n: int) -> Graph:
    return Graph({i: [j for j in range(n) if j != i] for i in range(n)})


def petersen() -> Graph:
    adj: dict[int, set[int]] = {i: set() for i in range(10)}
    for i in range(5):
        for u, v in ((i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)):
            adj[u].add(v)
            adj[v].add(u)
    return Graph(adj)


def wheel_subdivided(k: int = 5) -> PlaneGraph:
    """Wheel with ``k`` spokes, each spoke subdivided once.

    Hub is 0, rim vertices 1..k, subdivision vertices k+1..2k.
    """
    if k < 4:
        raise ValueError("need at least 4 spokes for a triangle-free rim")
    pos = {0: (0.0, 0.0)}
    for i, p in enumerate(_ring(k, 2.0)):
        pos[1 + i] = p
    for i, p in enumerate(_ring(k, 1.0)):
        pos[k + 1 + i] = p
    edges = []
    for i in range(k):
        edges += [(0, k + 1 + i), (k + 1 + i, 1 + i), (1 + i, 1 + (i + 1) % k)]
    return from_coordinates(edges, pos, outer=(1, k))


def dodecahedron() -> PlaneGraph:
    """Schlegel drawing: outer pentagon 0..4, ring 5..14, inner pentagon 15..19."""
    pos = {}
    for i in range(5):
        pos[i] = _ring(5, 4.0)[i]
        pos[5 + 2 * i] = _ring(5, 2.6)[i]
        pos[6 + 2 * i] = _ring(5, 2.2, math.pi / 5)[i]
        pos[15 + i] = _ring(5, 1.0, math.pi / 5)[i]
    edges = []
    for i in range(5):
        a, b, c, d = i, 5 + 2 * i, 6 + 2 * i, 15 + i
        edges += [(a, (i + 1) % 5), (a, b), (b, c), (c, 5 + 2 * ((i + 1) % 5)), (c, d), (d, 15 + (i + 1) % 5)]
    return from_coordinates(edges, pos, outer=(1, 0))


def pentagon_strip(m: int) -> PlaneGraph:
    """``m`` pentagons in a row, consecutive ones sharing an edge."""
    if m < 1:
        raise ValueError("strip needs at least one pentagon")
    pos = {}
    t = lambda i: i  # noqa: E731
    b = lambda i: m + 1 + i  # noqa: E731
    s = lambda i: 2 * m + 2 + i  # noqa: E731
    edges = []
    for i in range(m + 1):
        pos[t(i)] = (2.0 * i, 1.0)
        pos[b(i)] = (2.0 * i, 0.0)
        edges.append((t(i), b(i)))
    for i in range(m):
        pos[s(i)] = (2.0 * i + 1, 1.5)
        edges += [(t(i), s(i)), (s(i), t(i + 1)), (b(i), b(i + 1))]
    return from_coordinates(edges, pos, outer=(b(1), b(0)))


def expand_face(g: PlaneGraph, face, shift: int = 0) -> PlaneGraph:
    """Split a 5-face into three 5-faces by adding three vertices.

    A new vertex ``w`` is joined to three corners of the face (boundary gaps
    2, 2, 1) by paths of lengths 2, 1 and 2.
    """
    f = g._resolve_face(face)
    if f.length != 5 or not f.is_cycle():
        raise ValueError("expand_face needs a facial 5-cycle")
    vs = f.vertices
    vs = vs[shift % 5 :] + vs[: shift % 5]
    b1, b2, b3 = vs[0], vs[2], vs[4]
    h, a1 = g.add_pendant(b1, f)
    # the face containing a1 and b2 is the one holding corner (b1 -> a1)
    h, w = h.add_pendant(a1, h.face_of((b1, a1)))
    h = h.add_edge_in_face(w, b2, _common_face(h, w, b2))
    h, a3 = h.add_pendant(w, _common_face(h, w, b3))
    h = h.add_edge_in_face(a3, b3, _common_face(h, a3, b3))
    return h


def _common_face(g: PlaneGraph, u: int, v: int, exclude_outer: bool = True):
    outer = g.outer_face()
    for f in g.faces():
        if exclude_outer and outer is not None and f.id == outer.id:
            continue
        if u in f.vertices and v in f.vertices:
            return f
    raise EmbeddingError(f"{u} and {v} share no face")


def pentagonal_patch(k: int) -> PlaneGraph:
    """Outer 5-cycle with ``k`` face expansions inside; ``5 + 3k`` vertices."""
    g = cycle(5)
    for i in range(k):
        inner = g.inner_faces()
        # expand the newest face to spread degrees around
        f = max(inner, key=lambda f: (max(f.vertices), f.id))
        g = expand_face(g, f, shift=i)
    return g


PENTAGULATION_FAMILIES = ("dodecahedron", "fullerene", "strip", "patch")


def pentagulation(family: str, size: int = 0) -> PlaneGraph:
    """Plane graphs whose (non-outer) faces all have length 5.

    ``dodecahedron`` ignores ``size``; ``fullerene`` expands ``size`` faces of
    the dodecahedron; ``strip`` is a row of ``size`` pentagons; ``patch`` is
    an outer 5-cycle filled with ``size`` expansions.
    """
    if family == "dodecahedron":
        g = dodecahedron()
    elif family == "fullerene":
        if size < 0:
            raise ValueError("unsupported size")
        g = dodecahedron()
        for i in range(size):
            inner = g.inner_faces()
            f = max(inner, key=lambda f: (max(f.vertices), f.id))
            g = expand_face(g, f, shift=i)
    elif family == "strip":
        if size < 1:
            raise ValueError("unsupported size")
        g = pentagon_strip(size)
    elif family == "patch":
        if size < 0:
            raise ValueError("unsupported size")
        g = pentagonal_patch(size)
    else:
        raise ValueError(f"unknown pentagulation family {family!r}")
    assert girth(g) >= 5 and g.euler_ok()
    return g


def kneser_graph(a: int, b: int) -> Graph:
    """Vertices are the b-subsets of {1..a} (as bitmasks); edges join disjoint sets."""
    if a < 2 * b:
        warnings.warn(f"KG({a},{b}) has no edges", stacklevel=2)
    verts = [sum(1 << (c - 1) for c in comb) for comb in itertools.combinations(range(1, a + 1), b)]
    return Graph({v: [u for u in verts if not u & v] for v in verts})


def random_trifree_planar(n: int, seed: int) -> PlaneGraph:
    """Connected triangle-free plane graph on ``n`` vertices grown at random."""
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = random.Random(seed)
    start = min(n, rng.choice([4, 5]))
    if start < 4:
        g = path(n)
        return g
    g = cycle(start)
    budget = 50 * n
    chords_wanted = rng.randint(0, n // 2)
    while budget > 0 and (g.num_vertices < n or chords_wanted > 0):
        budget -= 1
        faces = g.faces()
        f = faces[rng.randrange(len(faces))]
        vs = list(dict.fromkeys(f.vertices))
        if g.num_vertices < n and (chords_wanted == 0 or rng.random() < 0.7):
            k = rng.choice([1, 1, 2, 2, 3])
            targets = sorted(rng.sample(range(len(vs)), min(k, len(vs))))
            targets = [vs[i] for i in targets]
            h, w = g.add_pendant(targets[0], f)
            ok = True
            for t in targets[1:]:
                if h.has_edge(w, t) or creates_triangle(h, w, t):
                    ok = False
                    break
                try:
                    h = h.add_edge_in_face(w, t, _common_face(h, w, t, exclude_outer=False))
                except EmbeddingError:
                    ok = False
                    break
            if ok:
                g = h
        else:
            if len(vs) < 4:
                continue
            u, v = rng.sample(vs, 2)
            if g.has_edge(u, v) or creates_triangle(g, u, v):
                continue
            g = g.add_edge_in_face(u, v, f)
            chords_wanted -= 1
    assert is_triangle_free(g) and g.euler_ok()
    return g


def jones_like(n: int, allow_search: bool = False) -> PlaneGraph:
    """Triangle-free planar graph with independence number (n+1)/3.

    Only ``n == 5`` (the 5-cycle) is built in; other orders need the
    external construction and are behind ``allow_search``, which returns a
    searched instance verified by the caller.
    """
    if n % 3 != 2:
        raise ValueError("n must be 2 mod 3")
    if n == 5:
        return cycle(5)
    if not allow_search:
        raise NotImplementedError("jones_like is only built in for n = 5")
    return _jones_search(n)


def _jones_search(n: int) -> PlaneGraph:
    from .fractional import independence_number

    target = (n + 1) // 3
    for seed in range(20000):
        g = random_trifree_planar(n, seed)
        if independence_number(g) == target:
            return g
    raise RuntimeError(f"no instance with alpha={target} found for n={n}")


def from_edge_list(text: str) -> PlaneGraph:
    """Parse ``u v`` lines; only cycles and forests get an embedding."""
    adj: dict[int, list[int]] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EmbeddingError(f"bad edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v or v in adj.get(u, []):
            raise EmbeddingError(f"loop or repeated edge {u}-{v}")
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    g = Graph(adj)
    m, nv = g.num_edges, g.num_vertices
    comps = g.components()
    if m == nv - len(comps):
        return PlaneGraph({v: sorted(ns) for v, ns in adj.items()}, outer=_first_dart(adj))
    if len(comps) == 1 and m == nv and all(len(ns) == 2 for ns in adj.values()):
        return PlaneGraph({v: sorted(ns) for v, ns in adj.items()}, outer=_first_dart(adj))
    raise EmbeddingError("edge lists are only embedded when they form a cycle or a forest")


def _first_dart(adj):
    for v in sorted(adj):
        if adj[v]:
            return (v, sorted(adj[v])[0])
    return None
