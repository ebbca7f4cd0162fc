"""Plane graphs given by rotation systems.

Rotations are counterclockwise: ``rotation[v]`` lists the neighbours of ``v``
in counterclockwise order around ``v``.  Faces are traced so that the face
lies to the left of each dart: after arriving at ``v`` along ``(a, v)`` the
walk leaves along ``(v, w)`` where ``w`` precedes ``a`` in ``rotation[v]``.

Graphs are immutable; every rewrite returns a new :class:`PlaneGraph`.
Vertex ids are stable across rewrites and new vertices get fresh ids.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

Dart = tuple[int, int]


class EmbeddingError(ValueError):
    """Malformed rotation system (missing partner dart, loop, multi-edge)."""


class RewriteError(ValueError):
    """A requested rewrite is not applicable to the graph."""


@dataclass(frozen=True)
class FacialWalk:
    id: int
    darts: tuple[Dart, ...]

    @property
    def length(self) -> int:
        return len(self.darts)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(d[0] for d in self.darts)

    def is_cycle(self) -> bool:
        vs = self.vertices
        return len(vs) >= 3 and len(set(vs)) == len(vs)


class Graph:
    """Plain undirected graph; the minimal interface every solver consumes."""

    def __init__(self, adjacency: dict[int, Iterable[int]]):
        self._adj = {v: frozenset(ns) for v, ns in adjacency.items()}
        for v, ns in self._adj.items():
            if v in ns:
                raise EmbeddingError(f"loop at {v}")
            for u in ns:
                if v not in self._adj.get(u, ()):
                    raise EmbeddingError(f"edge {v}-{u} is not symmetric")

    @property
    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self._adj for v in self._adj[u] if u < v)

    @property
    def num_vertices(self) -> int:
        return len(self._adj)

    @property
    def num_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for u in self._adj[v]:
                    if u not in seen:
                        seen.add(u)
                        comp.append(u)
                        queue.append(u)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def distances_from(self, s: int, cutoff: int | None = None) -> dict[int, int]:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if cutoff is not None and dist[v] >= cutoff:
                continue
            for u in self._adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def subgraph(self, keep: Iterable[int]) -> "Graph":
        keep = set(keep)
        return Graph({v: self._adj[v] & keep for v in keep})

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.num_vertices}, m={self.num_edges})"


class PlaneGraph(Graph):
    """A simple graph with a counterclockwise rotation system.

    ``outer`` is a dart lying on the outer face (or ``None``); ``x`` is the
    marked vertex set.
    """

    def __init__(
        self,
        rotation: dict[int, Sequence[int]],
        outer: Dart | None = None,
        x: Iterable[int] = (),
    ):
        rot = {v: tuple(ns) for v, ns in rotation.items()}
        for v, ns in rot.items():
            if len(set(ns)) != len(ns):
                raise EmbeddingError(f"parallel edges at {v}")
        super().__init__(rot)
        self.rotation = rot
        self.x = frozenset(x)
        if not self.x <= set(rot):
            raise EmbeddingError("marked vertex not in graph")
        if outer is not None:
            outer = (int(outer[0]), int(outer[1]))
            if not self.has_edge(*outer):
                raise EmbeddingError(f"outer dart {outer} is not an edge")
        self.outer = outer
        self._pos = {v: {u: i for i, u in enumerate(ns)} for v, ns in rot.items()}

    # -- faces -------------------------------------------------------------

    def next_dart(self, dart: Dart) -> Dart:
        a, v = dart
        ns = self.rotation[v]
        return (v, ns[(self._pos[v][a] - 1) % len(ns)])

    @cached_property
    def _faces(self) -> tuple[tuple[FacialWalk, ...], dict[Dart, int]]:
        face_of: dict[Dart, int] = {}
        walks = []
        for v in self.vertices:
            for u in self.rotation[v]:
                start = (v, u)
                if start in face_of:
                    continue
                darts = []
                d = start
                while d not in face_of:
                    face_of[d] = -1
                    darts.append(d)
                    d = self.next_dart(d)
                if d != start:
                    raise EmbeddingError("face tracing did not close")
                walks.append(darts)
        # canonical order: by smallest dart, each walk starting at its smallest dart
        canon = []
        for darts in walks:
            i = darts.index(min(darts))
            canon.append(tuple(darts[i:] + darts[:i]))
        canon.sort()
        faces = tuple(FacialWalk(i, w) for i, w in enumerate(canon))
        for f in faces:
            for d in f.darts:
                face_of[d] = f.id
        return faces, face_of

    def faces(self) -> tuple[FacialWalk, ...]:
        return self._faces[0]

    def face_of(self, dart: Dart) -> FacialWalk:
        return self._faces[0][self._faces[1][dart]]

    def outer_face(self) -> FacialWalk | None:
        return None if self.outer is None else self.face_of(self.outer)

    def outer_vertices(self) -> frozenset[int]:
        f = self.outer_face()
        return frozenset() if f is None else frozenset(f.vertices)

    def inner_faces(self) -> list[FacialWalk]:
        o = self.outer_face()
        return [f for f in self.faces() if o is None or f.id != o.id]

    def faces_at(self, v: int) -> list[FacialWalk]:
        """Faces around ``v`` in rotation order (one entry per corner)."""
        return [self.face_of((v, u)) for u in self.rotation[v]]

    def euler_ok(self) -> bool:
        """V - E + F = 2 on every component (isolated vertices count one face)."""
        comp_of = {}
        for i, comp in enumerate(self.components()):
            for v in comp:
                comp_of[v] = i
        counts = {i: [0, 0, 0] for i in set(comp_of.values())}
        for v, ns in self.rotation.items():
            c = counts[comp_of[v]]
            c[0] += 1
            c[1] += len(ns)
            if not ns:
                c[2] += 1
        for f in self.faces():
            counts[comp_of[f.darts[0][0]]][2] += 1
        return all(n - m // 2 + f == 2 for n, m, f in counts.values())

    def find_face(self, walk: Sequence[int]) -> FacialWalk:
        """Face whose vertex sequence equals ``walk`` up to rotation/reversal."""
        target = list(walk)
        k = len(target)
        cands = [target, target[::-1]]
        for f in self.faces():
            vs = list(f.vertices)
            if len(vs) != k:
                continue
            for c in cands:
                for i in range(k):
                    if vs[i:] + vs[:i] == c:
                        return f
        raise RewriteError(f"no face with walk {walk}")

    # -- rewrites ----------------------------------------------------------

    def _with(self, rotation, outer_hint: Sequence[Dart], x=None) -> "PlaneGraph":
        outer = None
        if self.outer is not None:
            for d in outer_hint:
                if d[0] in rotation and d[1] in rotation[d[0]]:
                    outer = d
                    break
            else:
                raise RewriteError("rewrite destroys the outer face")
        return PlaneGraph(rotation, outer, self.x if x is None else x)

    def _outer_darts(self) -> list[Dart]:
        f = self.outer_face()
        if f is None:
            return []
        i = f.darts.index(self.outer)
        return list(f.darts[i:] + f.darts[:i])

    def _fresh(self, k: int) -> list[int]:
        start = max(self.rotation, default=-1) + 1
        return list(range(start, start + k))

    def _corner(self, face: FacialWalk, v: int) -> tuple[int, int]:
        """(w, a) around ``v`` on ``face``: ``w`` immediately precedes ``a``."""
        darts = face.darts
        for i, (p, q) in enumerate(darts):
            if q == v:
                return darts[(i + 1) % len(darts)][1], p
        raise RewriteError(f"vertex {v} is not on face {face.id}")

    def _resolve_face(self, face) -> FacialWalk:
        if isinstance(face, FacialWalk):
            return self.face_of(face.darts[0])
        if isinstance(face, int):
            return self.faces()[face]
        return self.face_of(tuple(face))

    def delete_vertices(self, remove: Iterable[int]) -> "PlaneGraph":
        remove = set(remove)
        rot = {
            v: [u for u in ns if u not in remove]
            for v, ns in self.rotation.items()
            if v not in remove
        }
        hint = [d for d in self._outer_darts() if d[0] not in remove and d[1] not in remove]
        return self._with(rot, hint, self.x - remove)

    def add_edge_in_face(self, u: int, v: int, face) -> "PlaneGraph":
        """Add ``uv`` inside ``face`` (a FacialWalk, face id or a dart on it)."""
        f = self._resolve_face(face)
        if u == v or self.has_edge(u, v):
            raise RewriteError(f"cannot add edge {u}-{v}")
        if u not in f.vertices or v not in f.vertices:
            raise RewriteError(f"{u} or {v} not on face {f.id}")
        rot = {w: list(ns) for w, ns in self.rotation.items()}
        for p, q in ((u, v), (v, u)):
            w, a = self._corner(f, p)
            if not rot[p]:
                rot[p] = [q]
            else:
                rot[p].insert(rot[p].index(a), q)
        return self._with(rot, self._outer_darts())

    def add_pendant(self, u: int, face) -> tuple["PlaneGraph", int]:
        """Attach a new degree-1 vertex to ``u`` inside ``face``."""
        f = self._resolve_face(face)
        (new,) = self._fresh(1)
        rot = {w: list(ns) for w, ns in self.rotation.items()}
        if rot[u]:
            _, a = self._corner(f, u)
            rot[u].insert(rot[u].index(a), new)
        else:
            rot[u] = [new]
        rot[new] = [u]
        return self._with(rot, self._outer_darts()), new

    def identify_vertices(self, u: int, v: int, face) -> "PlaneGraph":
        """Identify ``v`` into ``u`` across a face containing both.

        The merged vertex keeps id ``u``; edges made parallel are merged.
        """
        f = self._resolve_face(face)
        if u == v or self.has_edge(u, v):
            raise RewriteError(f"cannot identify adjacent or equal {u}, {v}")
        if u not in f.vertices or v not in f.vertices:
            raise RewriteError(f"{u} and {v} do not share face {f.id}")
        if v in self.x and u not in self.x:
            raise RewriteError("identification would drop a marked vertex")
        if self.outer is not None and v in self.outer_vertices() and u in self.outer_vertices():
            raise RewriteError("identification would destroy the outer face")

        def arc(w: int, corner: tuple[int, int]) -> list[int]:
            ns = list(self.rotation[w])
            if not ns:
                return []
            _, a = corner
            i = ns.index(a)
            return ns[i:] + ns[:i]

        merged = arc(u, self._corner(f, u)) + arc(v, self._corner(f, v))
        seen: set[int] = set()
        merged_rot = []
        for w in merged:
            if w not in seen:
                seen.add(w)
                merged_rot.append(w)
        rot: dict[int, list[int]] = {}
        for w, ns in self.rotation.items():
            if w in (u, v):
                continue
            new = []
            for t in ns:
                if t == v:
                    if u in ns:
                        continue  # parallel edge: keep the original u-edge
                    t = u
                new.append(t)
            rot[w] = new
        rot[u] = merged_rot
        hint = [(u if a == v else a, u if b == v else b) for a, b in self._outer_darts()]
        return self._with(rot, hint)

    def split_vertex(self, x: int) -> tuple["PlaneGraph", list[int]]:
        """Split ``x`` into independent copies; return the graph and ``C_x``.

        For degree ``d >= 3``, ``x`` becomes ``d`` vertices and ``C_x`` has
        length ``2d``.  For ``d == 2`` it becomes three vertices and ``C_x``
        is a 5-cycle.
        """
        ys = list(self.rotation[x])
        d = len(ys)
        if d < 2:
            raise RewriteError(f"cannot split vertex of degree {d}")
        rot = {w: list(ns) for w, ns in self.rotation.items() if w != x}
        if d >= 3:
            new = self._fresh(d)  # new[i] is y^{i+1}
            for i, y in enumerate(ys):
                a, b = new[(i + 1) % d], new[i]
                j = rot[y].index(x)
                rot[y][j : j + 1] = [a, b]
            for i in range(d):
                rot[new[i]] = [ys[i - 1], ys[i]]
            cycle = []
            for i in range(d):
                cycle += [new[i], ys[i]]
        else:
            y1, y2 = ys
            n1, n2, n3 = self._fresh(3)
            j = rot[y1].index(x)
            rot[y1][j : j + 1] = [n2, n1]
            j = rot[y2].index(x)
            rot[y2][j : j + 1] = [n1, n3]
            rot[n1] = [y2, y1]
            rot[n2] = [y1, n3]
            rot[n3] = [n2, y2]
            cycle = [n1, y1, n2, n3, y2]
        hint = [dd for dd in self._outer_darts() if x not in dd]
        g = self._with(rot, hint, self.x - {x})
        return g, cycle

    def with_outer(self, outer: Dart | None, x: Iterable[int] | None = None) -> "PlaneGraph":
        return PlaneGraph(self.rotation, outer, self.x if x is None else x)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {
            "vertices": self.vertices,
            "rotations": {str(v): list(self.rotation[v]) for v in self.vertices},
        }
        f = self.outer_face()
        if f is not None:
            i = f.darts.index(self.outer)
            d["outer_face"] = [a for a, _ in f.darts[i:] + f.darts[:i]]
        if self.x:
            d["x"] = sorted(self.x)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "PlaneGraph":
        try:
            verts = [int(v) for v in data["vertices"]]
            rot = {int(k): [int(u) for u in ns] for k, ns in data["rotations"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise EmbeddingError(f"malformed graph document: {exc}") from exc
        for v in verts:
            rot.setdefault(v, [])
        if set(rot) != set(verts):
            raise EmbeddingError("rotations mention unknown vertices")
        x = data.get("x", [])
        x = [x] if isinstance(x, int) else [int(v) for v in x]
        g = cls(rot, None, x)
        walk = data.get("outer_face")
        if walk:
            walk = [int(v) for v in walk]
            if len(walk) == 1:
                raise EmbeddingError("outer face of a single vertex")
            f = g.find_face(walk)
            dart = (walk[0], walk[1])
            if dart not in f.darts:
                dart = f.darts[0]
            g = cls(rot, dart, x)
        return g

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PlaneGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise EmbeddingError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def relabel(self, mapping: dict[int, int]) -> "PlaneGraph":
        rot = {mapping[v]: [mapping[u] for u in ns] for v, ns in self.rotation.items()}
        outer = None if self.outer is None else (mapping[self.outer[0]], mapping[self.outer[1]])
        return PlaneGraph(rot, outer, {mapping[v] for v in self.x})

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(self.to_json())


def from_coordinates(
    edges: Iterable[tuple[int, int]],
    pos: dict[int, tuple[float, float]],
    outer: Dart | None = None,
    x: Iterable[int] = (),
) -> PlaneGraph:
    """Rotation system of a straight-line drawing (neighbours sorted by angle)."""
    adj: dict[int, list[int]] = {v: [] for v in pos}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    rot = {}
    for v, ns in adj.items():
        px, py = pos[v]
        rot[v] = sorted(ns, key=lambda u: math.atan2(pos[u][1] - py, pos[u][0] - px))
    return PlaneGraph(rot, outer, x)


def girth(g: Graph) -> float:
    """Length of a shortest cycle; ``math.inf`` for forests."""
    best = math.inf
    adj = g.adjacency()
    for s in adj:
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for u in adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def is_triangle_free(g: Graph) -> bool:
    adj = g.adjacency()
    for u in adj:
        for v in adj[u]:
            if u < v and adj[u] & adj[v]:
                return False
    return True


def creates_triangle(g: Graph, u: int, v: int) -> bool:
    """Whether adding the edge ``uv`` would close a triangle."""
    return bool(g.neighbors(u) & g.neighbors(v))


def biconnected_components(g: Graph) -> list[frozenset[int]]:
    """Vertex sets of the blocks (Hopcroft-Tarjan, iterative)."""
    adj = g.adjacency()
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[frozenset[int]] = []
    counter = 0
    for root in sorted(adj):
        if root in index:
            continue
        if not adj[root]:
            blocks.append(frozenset([root]))
            index[root] = counter
            counter += 1
            continue
        index[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(sorted(adj[root])))]
        edge_stack: list[tuple[int, int]] = []
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    edge_stack.append((v, w))
                    stack.append((w, v, iter(sorted(adj[w]))))
                    advanced = True
                    break
                if index[w] < index[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= index[p]:
                    comp = set()
                    while edge_stack:
                        e = edge_stack.pop()
                        comp.update(e)
                        if e == (p, v):
                            break
                    blocks.append(frozenset(comp))
    return blocks


def is_biconnected(g: Graph) -> bool:
    return g.num_vertices >= 3 and len(biconnected_components(g)) == 1
