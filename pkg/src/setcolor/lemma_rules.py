"""Configuration rules near the marked vertex ``x``.

Each rule matches a small configuration of 5-faces around ``x`` (or, for
``LTIE5``, anywhere), builds a smaller triangle-free instance, and lifts
its coloring with explicit colour choices.  Choices are made after a
palette permutation brings the relevant sets to a canonical form; the
lexicographically least such permutation is used.

Matching and lifting are separate.  ``match_*`` returns the reduced graph,
the identifications it made (dropped -> kept) and a role map from names to
vertices.  ``lift_*(g, sets, roles, X)`` turns the reduced coloring, with
identified vertices already copied, into a coloring of ``g`` and returns
``(sets | None, recipe, perm)``.  ``None`` means a side condition failed and
the engine solves the instance directly.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .plane_graph import PlaneGraph, is_triangle_free
from .reduction_engine import (
    ALL,
    Instance,
    Perm,
    Reduction,
    add_edge,
    apply_perm,
    common_face,
    find_permutation,
    invert,
    local_complete,
)
from .set_coloring import (
    GADGET_EDGES,
    GADGET_VERTICES,
    PreconditionError,
    mask,
    popcount,
    spe_set_color,
    subsets,
)

LOW = mask([1, 2, 3])
HIGH = mask([4, 5, 6])

Lift = Callable[[PlaneGraph, dict, dict, frozenset], tuple]


def has(m: int, c: int) -> bool:
    return bool(m >> (c - 1) & 1)


# -- matching helpers --------------------------------------------------------


def five_faces(g: PlaneGraph) -> list:
    return [f for f in g.inner_faces() if f.length == 5 and f.is_cycle()]


def orientations(vs: tuple[int, ...], start: int) -> list[tuple[int, ...]]:
    if start not in vs:
        return []
    i = vs.index(start)
    fwd = vs[i:] + vs[:i]
    back = (fwd[0],) + tuple(reversed(fwd[1:]))
    return [fwd, back]


def face_through(g: PlaneGraph, path: tuple[int, ...], exclude: Iterable[int] = ()):
    """(face id, walk starting with ``path``) for an inner 5-face containing ``path``."""
    exclude = set(exclude)
    for f in five_faces(g):
        if f.id in exclude:
            continue
        for w in orientations(f.vertices, path[0]):
            if w[: len(path)] == tuple(path):
                return f.id, w
    return None


def walks_at(g: PlaneGraph, x: int):
    """Every inner 5-face through ``x`` read from ``x`` in both directions, sorted."""
    out = []
    for f in five_faces(g):
        for w in orientations(f.vertices, x):
            out.append((w, f.id))
    return sorted(out)


def other_neighbor(g: PlaneGraph, v: int, known: Iterable[int]) -> int | None:
    rest = sorted(set(g.neighbors(v)) - set(known))
    return rest[0] if len(rest) == 1 else None


def single_x(inst: Instance) -> int | None:
    return next(iter(inst.X)) if len(inst.X) == 1 else None


def merge(g: PlaneGraph, boundary: frozenset, a: int, b: int):
    """Identify ``a`` and ``b``, keeping whichever lies on the outer cycle."""
    keep, drop = (b, a) if b in boundary and a not in boundary else (a, b)
    if drop in boundary:
        return None
    f = common_face(g, keep, drop)
    if f is None or g.has_edge(keep, drop):
        return None
    try:
        h = g.identify_vertices(keep, drop, f)
    except ValueError:
        return None
    return h, keep, drop


def copy_identified(sets: dict[int, int], ident: dict[int, int]) -> dict[int, int]:
    sets = dict(sets)
    for drop, keep in ident.items():
        while keep in ident:
            keep = ident[keep]
        sets[drop] = sets[keep]
    return sets


def canon(sets: dict[int, int], names: dict[str, int], pred) -> tuple[dict[str, int], Perm] | None:
    perm = find_permutation({k: sets[v] for k, v in names.items()}, pred)
    if perm is None:
        return None
    return {k: apply_perm(sets[v], perm) for k, v in names.items()}, perm


def uncanon(sets: dict[int, int], assign: dict[int, Iterable[int]], perm: Perm) -> dict[int, int]:
    inv = invert(perm)
    out = dict(sets)
    for v, cs in assign.items():
        out[v] = apply_perm(mask(cs), inv)
    return out


def path_ext(g: PlaneGraph, sets: dict[int, int], region: Iterable[int], X) -> dict[int, int] | None:
    got = local_complete(g, sets, region, X)
    if got is None:
        return None
    out = dict(sets)
    out.update(got)
    return out


def low3(P, k) -> bool:
    return P[k] == LOW


def _low_count(sets, x, a, b):
    return popcount((sets[a] | sets[b]) & sets[x])


def _reduction(rule: str, inst: Instance, got: tuple, lift: Lift) -> Reduction:
    match, h, ident, roles = got[:4]

    def run(engine):
        col, tr = engine._extend(Instance(h, inst.cycle, inst.X, inst.pre))
        sets = copy_identified(col.sets, ident)
        out, recipe, perm = lift(inst.g, sets, roles, inst.X)
        return out, [tr], recipe, perm

    return Reduction(rule, match, run)


def _at_x(rule: str, matcher, lift: Lift | None = None):
    def apply(inst: Instance) -> Reduction | None:
        x = single_x(inst)
        if x is None:
            return None
        got = matcher(inst.g, inst.boundary, x)
        if got is None:
            return None
        return _reduction(rule, inst, got, lift or got[4])

    apply.__name__ = rule.lower()
    return apply


# -- L233 ------------------------------------------------------------------


def match_233(g: PlaneGraph, C: frozenset, x: int):
    for (w, _fid) in walks_at(g, x):
        _, v1, u1, u2, v2 = w
        if g.degree(v1) != 2 or g.degree(u1) != 3 or {v1, u1, u2} & C:
            continue
        u0 = other_neighbor(g, u1, (v1, u2))
        if u0 is None:
            continue
        m = merge(g.delete_vertices([v1, u1]), C, x, u2)
        if m is None or m[1] != x or not is_triangle_free(m[0]):
            continue
        return w, m[0], {u2: x}, dict(x=x, v1=v1, u1=u1, u2=u2, v2=v2, u0=u0)
    return None


def lift_233(g, sets, r, X):
    def pred(P):
        return low3(P, "x") and not has(P["u0"], 3) and (has(P["u0"], 1) or not P["u0"] & LOW)

    got = canon(sets, {"x": r["x"], "u0": r["u0"]}, pred)
    if got is None:
        return None, "L233", None
    P, perm = got
    opts = [s for s in subsets(mask([3, 4, 5, 6]) & ~P["u0"], 2) if has(s, 3)]
    if not opts:
        return None, "L233", perm
    su1 = opts[0]
    sv1 = subsets(ALL & ~(LOW | su1), 2)[0]
    inv = invert(perm)
    out = uncanon(sets, {r["u2"]: [1, 2]}, perm)
    out[r["u1"]] = apply_perm(su1, inv)
    out[r["v1"]] = apply_perm(sv1, inv)
    return out, "L233", perm


l233 = _at_x("L233", match_233, lift_233)


# -- L232325 ---------------------------------------------------------------


def _pair_at_x(g, x):
    """Pairs of 5-faces x v1 u1 u2 v2 and x v2 u2 u3 v3 (distinct), as walks."""
    for (w1, f1) in walks_at(g, x):
        _, v1, u1, u2, v2 = w1
        got = face_through(g, (x, v2, u2), exclude=[f1])
        if got is None:
            continue
        f2, w2 = got
        yield w1, f1, w2, f2


def match_232325(g: PlaneGraph, C: frozenset, x: int):
    for w1, f1, w2, f2 in _pair_at_x(g, x):
        _, v1, u1, u2, v2 = w1
        _, _, _, u3, v3 = w2
        if {u1, u2, u3} & C or g.degree(u1) != 3 or g.degree(u2) != 3:
            continue
        # the lifts recolour v1..v3, so they must hang off x alone
        if {v1, v2, v3} & C or any(g.degree(v) != 2 for v in (v1, v2, v3)):
            continue
        u0 = other_neighbor(g, u1, (v1, u2))
        if u0 is None:
            continue
        roles = dict(x=x, v1=v1, u1=u1, u2=u2, v2=v2, u3=u3, v3=v3, u0=u0)
        match = (x, v1, u1, u2, v2, u3, v3)
        h = g.delete_vertices([v2, u2])
        if g.degree(u3) == 3:
            u4 = other_neighbor(g, u3, (v3, u2))
            if u4 is None:
                continue
            roles["u4"] = u4
            return match, h, {}, roles, lift_232325_deg3
        if g.degree(u3) == 4:
            got = face_through(g, (x, v3, u3), exclude=[f2])
            if got is None:
                continue
            u4 = got[1][3]
            wv = other_neighbor(g, u3, (u2, v3, u4))
            if wv is None:
                continue
            m = merge(h, C, u1, wv)
            if m is None or not is_triangle_free(m[0]):
                continue
            roles.update(u4=u4, w=wv)
            return match + (u4, wv), m[0], {m[2]: m[1]}, roles, lift_232325_deg4
    return None


def lift_232325_deg3(g, sets, r, X):
    x, u2, v2 = r["x"], r["u2"], r["v2"]
    a, b = (r["v1"], r["u1"], r["u0"]), (r["v3"], r["u3"], r["u4"])
    if _low_count(sets, x, a[1], b[1]) <= 2:
        return path_ext(g, sets, [u2, v2], X), "int123", None
    if popcount(sets[a[1]] & sets[x]) != 2:
        # both ends have degree three, so the mirror image applies
        a, b = b, a
    (v1, u1, u0), (_, u3, _) = a, b

    def pred(P):
        return (low3(P, "x") and P["u1"] == mask([1, 2]) and P["u0"] == mask([3, 4])
                and has(P["u3"], 3) and not has(P["u3"], 1) and not has(P["u3"], 6))

    got = canon(sets, {"x": x, "u1": u1, "u0": u0, "u3": u3}, pred)
    if got is None:
        return None, "L232325-deg3", None
    _, perm = got
    return uncanon(sets, {u1: [2, 5], v1: [4, 6], u2: [1, 6], v2: [4, 5]}, perm), "L232325-deg3", perm


def lift_232325_deg4(g, sets, r, X):
    x, u1, u2, v2, u3 = r["x"], r["u1"], r["u2"], r["v2"], r["u3"]
    if _low_count(sets, x, u1, u3) <= 2:
        return path_ext(g, sets, [u2, v2], X), "int123", None
    names = {k: r[k] for k in ("x", "u1", "u3", "u4", "u0")}
    if popcount(sets[u3] & sets[x]) == 2:
        def pred(P):
            return (low3(P, "x") and P["u3"] == mask([1, 2]) and has(P["u1"], 3)
                    and P["u4"] == mask([3, 4]) and not has(P["u1"], 1) and not has(P["u1"], 6))

        got = canon(sets, names, pred)
        if got is None:
            return None, "L232325-deg4a", None
        P, perm = got
        alpha = min(c for c in (4, 5) if not has(P["u1"], c))
        assign = {u3: [2, 6], r["v3"]: [4, 5], u2: [1, alpha], v2: [9 - alpha, 6]}
        return uncanon(sets, assign, perm), "L232325-deg4a", perm

    def pred(P):
        return low3(P, "x") and P["u3"] == mask([3, 4]) and P["u1"] == mask([1, 2]) and not has(P["u0"], 6)

    got = canon(sets, names, pred)
    if got is None:
        return None, "L232325-deg4b", None
    _, perm = got
    assign = {u1: [2, 6], r["v1"]: [4, 5], u2: [1, 5], v2: [4, 6]}
    return uncanon(sets, assign, perm), "L232325-deg4b", perm


l232325 = _at_x("L232325", match_232325)


# -- L232424 ---------------------------------------------------------------


def match_232424(g: PlaneGraph, C: frozenset, x: int):
    for w1, f1, w2, f2 in _pair_at_x(g, x):
        _, v1, u1, u2, v2 = w1
        _, _, _, u3, v3 = w2
        if {u1, u2, u3} & C:
            continue
        if any(g.degree(v) != 2 for v in (v1, v2, v3)):
            continue
        if g.degree(u1) != 3 or g.degree(u3) != 3 or g.degree(u2) != 4:
            continue
        wv = other_neighbor(g, u2, (u1, v2, u3))
        u0 = other_neighbor(g, u1, (v1, u2))
        u4 = other_neighbor(g, u3, (v3, u2))
        if None in (wv, u0, u4) or g.has_edge(x, wv) or g.neighbors(x) & g.neighbors(wv):
            continue
        h = add_edge(g.delete_vertices([v2, u2]), x, wv)
        if h is None or not is_triangle_free(h):
            continue
        roles = dict(x=x, v1=v1, u1=u1, u2=u2, v2=v2, u3=u3, v3=v3, w=wv, u0=u0, u4=u4)
        return (x, v1, u1, u2, v2, u3, v3, wv), h, {}, roles
    return None


def lift_232424(g, sets, r, X):
    def pred(P):
        return low3(P, "x") and P["w"] == mask([4, 5]) and has(P["u0"], 1) and not P["u0"] & mask([2, 5])

    got = canon(sets, {k: r[k] for k in ("x", "w", "u0", "u4")}, pred)
    if got is None:
        return None, "L232424", None
    P, perm = got
    ab = [(a, b) for a in (1, 2, 3) for b in (4, 5) if not P["u4"] & mask([a, b])]
    if not ab:
        return None, "L232424", perm
    alpha, beta = ab[0]
    gamma = min(c for c in (1, 3) if c != alpha)
    assign = {
        r["u1"]: [2, 5], r["v1"]: [4, 6], r["u3"]: [alpha, beta], r["v3"]: [9 - beta, 6],
        r["u2"]: [gamma, 6], r["v2"]: [4, 5],
    }
    return uncanon(sets, assign, perm), "L232424", perm


l232424 = _at_x("L232424", match_232424, lift_232424)


# -- LTIE5 -----------------------------------------------------------------


def match_tie5(g: PlaneGraph, C: frozenset, X: frozenset):
    cands = set()
    for f in five_faces(g):
        for start in f.vertices:
            cands.update(orientations(f.vertices, start))
    for v in sorted(cands):
        if any(g.degree(v[i]) != 3 or v[i] in C for i in range(4)):
            continue
        us = [other_neighbor(g, v[i], (v[i - 1], v[i + 1])) for i in range(4)]
        if None in us or set(us) & set(v) or len(set(us)) != 4:
            continue
        if any(g.has_edge(a, b) for i, a in enumerate(us) for b in us[i + 1 :]):
            continue
        touched = set(us) | {v[4]}
        if touched & X or len(touched & C) > 1:
            continue
        u1, u2, u3, u4 = us
        roles = dict(zip(("v1", "v2", "v3", "v4", "v5", "u1", "u2", "u3", "u4"), tuple(v) + tuple(us)))
        base = g.delete_vertices(v[:4])
        h = add_edge(base, u1, u4)
        m = merge(h, C, u2, u3) if h is not None else None
        if m is not None and is_triangle_free(m[0]):
            return v, m[0], {m[2]: m[1]}, roles, lift_tie5_edge
        for (a, b), (c, d), lift in (
            ((u1, u2), (u3, v[4]), lift_tie5_12),
            ((u3, u4), (u2, v[4]), lift_tie5_34),
        ):
            m1 = merge(base, C, a, b)
            if m1 is None:
                continue
            c2 = m1[1] if c == m1[2] else c
            d2 = m1[1] if d == m1[2] else d
            m2 = merge(m1[0], C, c2, d2)
            if m2 is None or not is_triangle_free(m2[0]):
                continue
            return v, m2[0], {m1[2]: m1[1], m2[2]: m2[1]}, roles, lift
    return None


def lift_tie5_edge(g, sets, r, X):
    sets = dict(sets)
    pairs = [
        (a, b)
        for a in subsets(ALL & ~(sets[r["u1"]] | sets[r["v5"]]), 2)
        for b in subsets(ALL & ~(sets[r["u4"]] | sets[r["v5"]]), 2)
        if not a & b
    ]
    if not pairs:
        return None, "edge-and-merge", None
    sets[r["v1"]], sets[r["v4"]] = pairs[0]
    return path_ext(g, sets, [r["v2"], r["v3"]], X), "edge-and-merge", None


def _two_stage(g, sets, first, second, X, name):
    part = path_ext(g, sets, first, X)
    if part is None:
        return None, name, None
    return path_ext(g, part, second, X), name, None


def lift_tie5_12(g, sets, r, X):
    return _two_stage(g, sets, [r["v3"], r["v4"]], [r["v1"], r["v2"]], X, "merge-12-3v")


def lift_tie5_34(g, sets, r, X):
    return _two_stage(g, sets, [r["v1"], r["v2"]], [r["v3"], r["v4"]], X, "merge-34-2v")


def ltie5(inst: Instance) -> Reduction | None:
    got = match_tie5(inst.g, inst.boundary, inst.X)
    if got is None:
        return None
    return _reduction("LTIE5", inst, got, got[4])


# -- L242324 ---------------------------------------------------------------


def _gadget_ok(g: PlaneGraph, names: dict[str, int]) -> bool:
    vs = set(names.values())
    if len(vs) != len(names):
        return False
    want = {frozenset((names[a], names[b])) for a, b in GADGET_EDGES}
    have = {frozenset((a, b)) for a in vs for b in g.neighbors(a) if b in vs}
    return want == have


def match_242324(g: PlaneGraph, C: frozenset, x: int):
    for w1, f1, w2, f2 in _pair_at_x(g, x):
        _, v1, u1, u2, v2 = w1
        _, _, _, u3, v3 = w2
        if {u1, u2, u3, v1, v2, v3} & C:
            continue
        if g.degree(u1) != 4 or g.degree(u3) != 4 or g.degree(u2) != 3:
            continue
        if any(g.degree(t) != 2 for t in (v1, v2, v3)):
            continue
        got = face_through(g, (u1, u2, u3), exclude=[f1, f2])
        if got is None:
            continue
        w3, w1v = got[1][3], got[1][4]
        if {w1v, w3} & C or g.degree(w1v) != 3 or g.degree(w3) != 3:
            continue
        y1 = other_neighbor(g, w1v, (u1, w3))
        y3 = other_neighbor(g, w3, (u3, w1v))
        u0 = other_neighbor(g, u1, (v1, u2, w1v))
        u4 = other_neighbor(g, u3, (v3, u2, w3))
        if None in (y1, y3, u0, u4):
            continue
        names = dict(zip(GADGET_VERTICES, (x, v1, u1, v2, u2, v3, u3, w1v, w3, y1)))
        if not _gadget_ok(g, names):
            continue
        m = merge(g.delete_vertices([v2, u2]), C, u3, w1v)
        if m is None or not is_triangle_free(m[0]):
            continue
        roles = dict(names, u0=u0, u4=u4, y3=y3)
        return (x, v1, u1, u2, v2, u3, v3, w1v, w3), m[0], {m[2]: m[1]}, roles
    return None


def lift_242324(g, sets, r, X):
    x, u1, u3, u2, v2 = r["x"], r["u1"], r["u3"], r["u2"], r["v2"]
    if _low_count(sets, x, u1, u3) <= 2:
        return path_ext(g, sets, [u2, v2], X), "int123", None
    names = {k: r[k] for k in ("x", "u1", "u3", "u0", "u4")}
    if popcount(sets[u1] & sets[x]) == 2:
        def pred(P):
            return (low3(P, "x") and P["u1"] == mask([1, 2]) and has(P["u3"], 3)
                    and P["u0"] == mask([3, 4]) and not has(P["u3"], 6))

        got = canon(sets, names, pred)
        if got is None:
            return None, "L242324-a", None
        P, perm = got
        alpha = min(c for c in (4, 5) if not has(P["u3"], c))
        assign = {u1: [2, 6], r["v1"]: [4, 5], u2: [1, alpha], v2: [9 - alpha, 6]}
        return uncanon(sets, assign, perm), "L242324-a", perm

    def pred(P):
        return (low3(P, "x") and P["u1"] & LOW == mask([3]) and P["u3"] == mask([1, 2])
                and P["u4"] == mask([3, 4]) and popcount(P["u0"] & HIGH) <= 1)

    got = canon(sets, names, pred)
    if got is None:
        return None, "SPE-SET-GADGET", None
    return _gadget_lift(sets, r, got[1])


def _gadget_lift(sets, r, perm):
    P = {k: apply_perm(sets[r[k]], perm) for k in ("y1", "y3", "u0")}
    u1_opts = [s for s in subsets(mask([3, 4, 5, 6]) & ~P["u0"], 3) if has(s, 3)]
    if not u1_opts:
        return None, "SPE-SET-GADGET", perm
    L = {n: ALL for n in ("v1", "v2", "v3", "u2", "w1")}
    L.update(x=LOW, u3=mask([1, 2, 5, 6]), w3=ALL & ~P["y3"], y1=P["y1"], u1=u1_opts[0])
    try:
        _, phi = spe_set_color(L)
    except (PreconditionError, IndexError):
        return None, "SPE-SET-GADGET", perm
    inv = invert(perm)
    out = dict(sets)
    for n, s in phi.items():
        out[r[n]] = apply_perm(s, inv)
    return out, "SPE-SET-GADGET", perm


l242324 = _at_x("L242324", match_242324, lift_242324)


# -- L232523 ---------------------------------------------------------------


def _dangerous(g: PlaneGraph, k: tuple[int, ...]) -> bool:
    a, _, _, wa, wb = k  # k = (u2, u3, u4, w4, w2)
    return g.degree(a) == 3 or (g.degree(a) == 4 and g.degree(wa) == 3 and g.degree(wb) == 3)


def match_232523(g: PlaneGraph, C: frozenset, x: int):
    for (w3, f3) in walks_at(g, x):
        _, v3, u3, u4, v4 = w3
        got2 = face_through(g, (x, v3, u3), exclude=[f3])
        got4 = face_through(g, (x, v4, u4), exclude=[f3])
        if got2 is None or got4 is None:
            continue
        (f2, w2), (f4, w4) = got2, got4
        u2, v2 = w2[3], w2[4]
        u5, v5 = w4[3], w4[4]
        got5 = face_through(g, (x, v5, u5), exclude=[f4])
        if got5 is None:
            continue
        f5, w5 = got5
        u6, v6 = w5[3], w5[4]
        if len({f2, f3, f4, f5}) != 4:
            continue
        us = (u2, u3, u4, u5, u6)
        vs = (v2, v3, v4, v5, v6)
        if len(set(us)) != 5 or set(us + vs) & C or any(g.degree(v) != 2 for v in vs):
            continue
        if g.degree(u3) != 3 or g.degree(u5) != 3 or g.degree(u4) != 5:
            continue
        k1 = face_through(g, (u2, u3, u4), exclude=[f2, f3])
        k2 = face_through(g, (u6, u5, u4), exclude=[f4, f5])
        if k1 is None or k2 is None or not (_dangerous(g, k1[1]) and _dangerous(g, k2[1])):
            continue
        w4v, w4p = k1[1][3], k2[1][3]
        s1 = face_through(g, (x, v2, u2), exclude=[f2])
        s7 = face_through(g, (x, v6, u6), exclude=[f5])
        if s1 is None or s7 is None:
            continue
        m1 = merge(g.delete_vertices([v3, u3, v5, u5]), C, u2, w4v)
        if m1 is None:
            continue
        a = m1[1] if u6 == m1[2] else u6
        b = m1[1] if w4p == m1[2] else w4p
        m2 = merge(m1[0], C, a, b)
        if m2 is None or not is_triangle_free(m2[0]):
            continue
        roles = dict(zip(("u2", "u3", "u4", "u5", "u6"), us))
        roles.update(zip(("v2", "v3", "v4", "v5", "v6"), vs))
        roles.update(x=x, u1=s1[1][3], u7=s7[1][3])
        return (x,) + us + vs, m2[0], {m1[2]: m1[1], m2[2]: m2[1]}, roles
    return None


def lift_232523(g, sets, r, X):
    x, u4 = r["x"], r["u4"]
    sx = sets[x]
    if popcount(sets[u4] & sx) == 2 and popcount(sets[u4]) == 2:
        pair = (mask([3, 4]), mask([3, 5]))

        def pred(P):
            return low3(P, "x") and P["u4"] == mask([1, 2]) and P["u2"] in pair and P["u6"] in pair

        got = canon(sets, {k: r[k] for k in ("x", "u4", "u2", "u6")}, pred)
        if got is None:
            return None, "L232523-low", None
        P, perm = got
        alpha = 4 if has(P["u2"], 4) else 5
        beta = 4 if has(P["u6"], 4) else 5
        assign = {
            u4: [2, 6], r["v4"]: [4, 5], r["u3"]: [1, 9 - alpha], r["v3"]: [alpha, 6],
            r["u5"]: [1, 9 - beta], r["v5"]: [beta, 6],
        }
        return uncanon(sets, assign, perm), "L232523-low", perm
    if g.degree(r["u2"]) == 3 and g.degree(r["u6"]) == 3 and popcount(sets[u4] & sx) == 1:
        if r["u1"] == r["u7"]:
            # u1 and u7 coincide; the two sides are no longer independent
            return None, "L232523-i", None
        out = dict(sets)
        for side in (("u2", "v2", "u3", "v3", "u1"), ("u6", "v6", "u5", "v5", "u7")):
            out = _side_232523(out, x, u4, [r[k] for k in side])
            if out is None:
                return None, "L232523-i", None
        return out, "L232523-i", None
    # remaining dangerous shapes: complete the four removed vertices locally
    return path_ext(g, sets, [r["u3"], r["v3"], r["u5"], r["v5"]], X), "local", None


def _side_232523(sets, x, u4, side):
    ua, va, ub, vb, uo = side
    if sets[ua] != sets[x] & ~sets[u4]:
        def pred(P):
            return low3(P, "x") and P["u4"] & LOW == mask([3])

        got = canon(sets, {"x": x, "u4": u4}, pred)
        if got is None:
            return None
        P, perm = got
        pa = apply_perm(sets[ua], perm)
        opts = [s for s in subsets(ALL & ~(pa | P["u4"]), 2) if s & mask([1, 2])]
        if not opts:
            return None
        vopts = subsets(HIGH & ~opts[0], 2)
        if not vopts:
            return None
        inv = invert(perm)
        out = dict(sets)
        out[ub] = apply_perm(opts[0], inv)
        out[vb] = apply_perm(vopts[0], inv)
        return out

    def pred(P):
        return (low3(P, "x") and P["u4"] & LOW == mask([3]) and P["ua"] == mask([1, 2])
                and P["uo"] == mask([3, 4]) and not has(P["u4"], 6))

    got = canon(sets, {"x": x, "u4": u4, "ua": ua, "uo": uo}, pred)
    if got is None:
        return None
    return uncanon(sets, {ua: [1, 5], va: [4, 6], ub: [2, 6], vb: [4, 5]}, got[1])


l232523 = _at_x("L232523", match_232523, lift_232523)
