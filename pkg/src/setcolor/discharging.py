"""Charges, the face taxonomy around ``x`` and the eleven transfer rules.

Elements are keyed by strings: ``"v7"`` for vertex 7, ``"f3"`` for face id 3
and ``"i7"`` for the face surrounding an isolated vertex 7.  All amounts are
exact fractions.  Transfers are computed from one classification snapshot,
so the order in which rules are listed does not affect the outcome.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .plane_graph import PlaneGraph, is_biconnected

THIRD = Fraction(1, 3)
ONE = Fraction(1)
LABELS = ("plain", "A1", "A2", "A3", "B", "C", "D", "E", "F", "special", "outer")


class HypothesisError(ValueError):
    """The input breaks a structural assumption of the taxonomy."""


def vk(v: int) -> str:
    return f"v{v}"


def fk(f: int) -> str:
    return f"f{f}"


def parse_key(key: str) -> tuple[str, int]:
    return key[0], int(key[1:])


class Transfer(NamedTuple):
    rule: str
    source: str
    target: str
    amount: Fraction


@dataclass
class ChargeLedger:
    initial: dict[str, Fraction]
    charge: dict[str, Fraction]
    log: list[Transfer] = field(default_factory=list)
    component_totals: list[Fraction] = field(default_factory=list)

    @property
    def total(self) -> Fraction:
        return sum(self.charge.values(), Fraction(0))

    @property
    def connected(self) -> bool:
        return len(self.component_totals) == 1

    def send(self, rule: str, source: str, target: str, amount: Fraction) -> None:
        self.log.append(Transfer(rule, source, target, amount))
        self.charge[source] -= amount
        self.charge[target] += amount

    def reversed_initial(self) -> dict[str, Fraction]:
        back = dict(self.charge)
        for t in reversed(self.log):
            back[t.source] += t.amount
            back[t.target] -= t.amount
        return back

    def flow(self, key: str) -> tuple[list[Transfer], list[Transfer]]:
        return [t for t in self.log if t.target == key], [t for t in self.log if t.source == key]

    def to_dict(self) -> dict:
        return {
            "total": str(self.total),
            "components": [str(t) for t in self.component_totals],
            "initial": {k: str(v) for k, v in self.initial.items()},
            "charge": {k: str(v) for k, v in self.charge.items()},
            "transfers": [[t.rule, t.source, t.target, str(t.amount)] for t in self.log],
        }


def initial_charges(g: PlaneGraph) -> ChargeLedger:
    """deg(v) - 4 on vertices and |f| - 4 on faces; each component sums to -8."""
    comp_of = {}
    comps = g.components()
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    totals = [Fraction(0)] * len(comps)
    init: dict[str, Fraction] = {}
    for v in g.vertices:
        init[vk(v)] = Fraction(g.degree(v) - 4)
        totals[comp_of[v]] += init[vk(v)]
        if g.degree(v) == 0:
            init[f"i{v}"] = Fraction(-4)
            totals[comp_of[v]] += init[f"i{v}"]
    for f in g.faces():
        init[fk(f.id)] = Fraction(f.length - 4)
        totals[comp_of[f.darts[0][0]]] += init[fk(f.id)]
    return ChargeLedger(init, dict(init), [], totals)


# -- classification ---------------------------------------------------------


@dataclass
class FaceClassification:
    x: int | None
    cycle: frozenset
    outer: int | None
    labels: dict[int, set[str]]
    tight: set[int]
    # (source key, target key): vertex -> A face, C/D face -> A2 face,
    # E face -> special face, F face -> vertex
    connected: set[tuple[str, str]]
    tied: dict[int, set[int]]
    special: dict[int, int]
    flags: list[str]

    def has(self, f: int, label: str) -> bool:
        return label in self.labels.get(f, ())

    def with_label(self, label: str) -> list[int]:
        return sorted(f for f, ls in self.labels.items() if label in ls)

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "labels": {fk(f): sorted(ls) for f, ls in sorted(self.labels.items())},
            "tight": [fk(f) for f in sorted(self.tight)],
            "connected": sorted([s, t] for s, t in self.connected),
            "tied": {fk(f): sorted(zs) for f, zs in sorted(self.tied.items()) if zs},
            "special": {fk(f): fk(h) for f, h in sorted(self.special.items())},
            "flags": list(self.flags),
        }


def face_with_path(g: PlaneGraph, a: int, b: int, c: int):
    """The face whose boundary walks a -> b -> c in either direction."""
    if g.next_dart((a, b)) == (b, c):
        return g.face_of((a, b))
    if g.next_dart((c, b)) == (b, a):
        return g.face_of((c, b))
    return None


def _five(f) -> bool:
    return f is not None and f.length == 5 and f.is_cycle()


def _walk_from(f, path: tuple[int, ...]) -> tuple[int, ...] | None:
    vs = f.vertices
    if path[0] not in vs:
        return None
    i = vs.index(path[0])
    fwd = vs[i:] + vs[:i]
    back = (fwd[0],) + tuple(reversed(fwd[1:]))
    for w in (fwd, back):
        if w[: len(path)] == tuple(path):
            return w
    return None


def _other_face(g: PlaneGraph, path: tuple[int, int, int], exclude: Iterable[int], outer) -> tuple | None:
    """(face id, 5-walk starting with ``path``) for the inner 5-face through ``path``."""
    f = face_with_path(g, *path)
    if not _five(f) or f.id in set(exclude) or f.id == outer:
        return None
    return f.id, _walk_from(f, path)


def _x_walks(g: PlaneGraph, x: int, outer) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for f in g.faces():
        if f.id == outer or not _five(f) or x not in f.vertices:
            continue
        for w in {_walk_from(f, (x, f.vertices[(f.vertices.index(x) + s) % 5])) for s in (1, 4)}:
            out.append((w, f.id))
    return sorted(out)


def classify(g: PlaneGraph, x: int | None = None, strict: bool = True) -> FaceClassification:
    """Label every face; ``x`` defaults to the graph's marked vertex.

    With ``strict`` a non-pentagonal inner face raises :class:`HypothesisError`;
    otherwise such faces stay plain and only 5-faces are considered.
    """
    if x is None and len(g.x) == 1:
        x = next(iter(g.x))
    of = g.outer_face()
    outer = None if of is None else of.id
    C = g.outer_vertices()
    if x is not None and x not in C:
        raise HypothesisError(f"x={x} is not on the outer face")
    if strict:
        bad = [f.vertices for f in g.inner_faces() if f.length != 5]
        if bad:
            raise HypothesisError(f"inner face {list(bad[0])} has length {len(bad[0])}, not 5")
    deg = g.degree
    labels: dict[int, set[str]] = defaultdict(set)
    connected: set[tuple[str, str]] = set()
    flags: list[str] = []
    a_walks: dict[int, list[tuple[int, ...]]] = defaultdict(list)

    if x is not None:
        walks = _x_walks(g, x, outer)
        for w, fid in walks:
            _, v1, u1, u2, v2 = w
            if v1 in C or u1 in C:
                continue
            if deg(v1) == 2 and deg(u1) == 3 and u2 not in C and deg(u2) >= 3:
                labels[fid].add("A1" if deg(u2) == 3 else "A2" if deg(u2) == 4 else "A3")
                a_walks[fid].append(w)
            if deg(v1) == 2 and deg(u1) == 4 and deg(v2) >= 3:
                labels[fid].add("B")
        for fid, ws in a_walks.items():
            if not labels[fid] & {"A1", "A2"}:
                continue
            for w in ws:
                _, v1, u1, u2, v2 = w
                for path in ((x, v1, u1), (x, v2, u2)):
                    got = _other_face(g, path, [fid], outer)
                    if got is None:
                        continue
                    ui = got[1][3]
                    if ui != x and (ui in C or deg(ui) >= 5):
                        connected.add((vk(ui), fk(fid)))
        _type_cde(g, x, C, outer, labels, a_walks, connected, flags)
        _type_f(g, C, outer, walks, labels, connected)

    tied: dict[int, set[int]] = defaultdict(set)
    special: dict[int, int] = {}
    for f in g.faces():
        if f.id == outer or not _five(f):
            continue
        Q = set(f.vertices)
        if x in Q or len(Q & C) > 1:
            continue
        for z in sorted(C - Q):
            if any(u in Q and u not in C and deg(u) == 3 for u in g.neighbors(z)):
                tied[f.id].add(z)
        if x is not None and x in tied[f.id]:
            _special(g, x, f, C, outer, labels, special, flags)

    tight = set()
    for fid in list(labels):
        if "A2" in labels[fid] and not any(t == fk(fid) for _, t in connected):
            tight.add(fid)
    for f in g.faces():
        if f.id == outer:
            labels[f.id].add("outer")
        elif not labels[f.id] - {"special"}:
            labels[f.id].add("plain")
    return FaceClassification(x, C, outer, dict(labels), tight, connected, dict(tied), special, flags)


def _type_cde(g, x, C, outer, labels, a_walks, connected, flags):
    deg = g.degree
    for f1 in sorted(a_walks):
        if "A2" not in labels[f1]:
            continue
        for aw in a_walks[f1]:
            # read f1 the other way round: x v1 u1 u2 v2 with deg(u1) = 4, deg(u2) = 3
            _, v2, u2, u1, v1 = aw
            if deg(u1) != 4 or deg(u2) != 3 or deg(v2) != 2:
                continue
            got2 = _other_face(g, (x, v2, u2), [f1], outer)
            if got2 is None:
                continue
            f2, w2 = got2
            u3, v3 = w2[3], w2[4]
            if u3 in C or deg(u3) != 4:
                continue
            gotg = _other_face(g, (u1, u2, u3), [f1, f2], outer)
            if gotg is None:
                continue
            gid, gw = gotg
            w3, w1 = gw[3], gw[4]
            labels[gid].add("C")
            links = []
            if deg(w1) == 3:
                links.append(f1)
            if deg(w3) == 3 and "A2" in labels.get(f2, ()):
                links.append(f2)
            if len(links) > 1:
                flags.append(f"type-C face f{gid} is connected to two type-A-2 faces")
            for t in links:
                connected.add((fk(gid), fk(t)))
            if deg(w3) < 4:
                continue
            got3 = _other_face(g, (x, v3, u3), [f2], outer)
            if got3 is None:
                continue
            f3, w3w = got3
            u4, v4 = w3w[3], w3w[4]
            if u4 in C:
                continue
            if deg(v4) == 2 and deg(u4) == 4:
                goth = _other_face(g, (w3, u3, u4), [f2, f3, gid], outer)
                if goth is not None:
                    labels[goth[0]].add("D")
                    if "A2" in labels.get(f2, ()):
                        connected.add((fk(goth[0]), fk(f2)))
            elif deg(v4) == 3 and deg(u4) == 3:
                nxt = [w for w in g.neighbors(u4) if w not in (v4, u3)]
                if len(nxt) != 1:
                    continue
                w4 = nxt[0]
                gotk = _other_face(g, (v4, u4, w4), [f3], outer)
                if gotk is None:
                    continue
                kid, kw = gotk
                y4, z4 = kw[3], kw[4]
                if {v4, w4, y4, z4} & C or deg(y4) != 3 or deg(z4) != 3 or deg(w4) < 4:
                    continue
                gotq = _other_face(g, (w4, u4, u3), [f3, kid], outer)
                if gotq is not None:
                    labels[gotq[0]].add("E")
                    connected.add((fk(gotq[0]), fk(kid)))


def _type_f(g, C, outer, walks, labels, connected):
    deg = g.degree
    for w1, f1 in walks:
        x, v1, u1, u2, v2 = w1
        got2 = _other_face(g, (x, v2, u2), [f1], outer)
        if got2 is None:
            continue
        f2, w2 = got2
        u3, v3 = w2[3], w2[4]
        if {u1, u2, u3} & C or any(deg(v) != 2 for v in (v1, v2, v3)):
            continue
        if deg(u1) != 5 or deg(u2) != 3 or deg(u3) != 4:
            continue
        gotg = _other_face(g, (u1, u2, u3), [f1, f2], outer)
        if gotg is None:
            continue
        gid, gw = gotg
        if deg(gw[3]) >= 4 or deg(gw[4]) >= 4:
            labels[gid].add("F")
            connected.add((fk(gid), vk(u1)))


def _special(g, x, f, C, outer, labels, special, flags):
    deg = g.degree
    vs = f.vertices
    threes = [v for v in vs if deg(v) == 3]
    if len(threes) != 4:
        return
    starts = [v for v in vs if v in g.neighbors(x) and v not in C and deg(v) == 3]
    if len(starts) > 1:
        flags.append(f"face f{f.id} is tied to x through {len(starts)} edges")
    for v5 in starts:
        for s in (1, 4):
            v1 = vs[(vs.index(v5) + s) % 5]
            w = _walk_from(f, (v5, v1))
            high = next(i for i, v in enumerate(w) if deg(v) != 3)
            if high not in (1, 2):
                continue
            gf = face_with_path(g, x, v5, v1)
            if gf is None or gf.id == outer:
                continue
            if f.id in special and special[f.id] != gf.id:
                flags.append(f"special face f{f.id} is connected to two faces")
                continue
            special[f.id] = gf.id
            labels[f.id].add("special")


# -- rules --------------------------------------------------------------------


RULES = tuple(f"R{i}" for i in range(1, 12))


def apply_rules(g: PlaneGraph, cls: FaceClassification | None = None, x: int | None = None,
                strict: bool = False) -> ChargeLedger:
    """Final charges after R1..R11, all computed from one classification."""
    if cls is None:
        cls = classify(g, x, strict=strict)
    x, C, outer = cls.x, cls.cycle, cls.outer
    led = initial_charges(g)
    deg = g.degree
    inner = [f for f in g.faces() if f.id != outer]

    for f in inner:  # R1
        for v in dict.fromkeys(f.vertices):
            if (deg(v) == 2 and v in C) or (deg(v) == 3 and v not in C):
                led.send("R1", fk(f.id), vk(v), THIRD)
    for f in g.faces():  # R2
        for v in dict.fromkeys(f.vertices):
            if deg(v) == 2 and v not in C:
                led.send("R2", fk(f.id), vk(v), ONE)
    if x is not None:  # R3
        for f in inner:
            if x in f.vertices:
                led.send("R3", vk(x), fk(f.id), ONE)
    for fid in cls.with_label("A3"):  # R4
        f = g.faces()[fid]
        for v in dict.fromkeys(f.vertices):
            if v != x and deg(v) >= 5:
                led.send("R4", vk(v), fk(fid), THIRD)
    for s, t in sorted(cls.connected):  # R5
        if s[0] != "v" or t[0] != "f":
            continue
        v, fid = parse_key(s)[1], parse_key(t)[1]
        if v != x and (deg(v) >= 5 or v in C) and (cls.has(fid, "A1") or cls.has(fid, "A2")):
            led.send("R5", s, t, THIRD)
    if x is not None:  # R6
        for b in cls.with_label("B"):
            for a in sorted(cls.tight):
                if a != b and _share_x_edge(g.faces()[a], g.faces()[b], x):
                    led.send("R6", fk(b), fk(a), THIRD)
    for rule, label in (("R7", "C"), ("R8", "D")):
        for s, t in sorted(cls.connected):
            kind, src = parse_key(s)
            if kind == "f" and cls.has(src, label) and t[0] == "f" and cls.has(parse_key(t)[1], "A2"):
                led.send(rule, s, t, THIRD)
    for s, t in sorted(cls.connected):  # R9
        if s[0] == "f" and cls.has(parse_key(s)[1], "F") and t[0] == "v" and deg(parse_key(t)[1]) == 5:
            led.send("R9", s, t, THIRD)
    for fid, gid in sorted(cls.special.items()):  # R10
        es = sorted(parse_key(s)[1] for s, t in cls.connected
                    if t == fk(fid) and s[0] == "f" and cls.has(parse_key(s)[1], "E"))
        led.send("R10", fk(es[0] if es else gid), fk(fid), THIRD)
    for fid, zs in sorted(cls.tied.items()):  # R11
        for z in sorted(zs):
            if z != x:
                led.send("R11", vk(z), fk(fid), THIRD)
    return led


def _share_x_edge(f, h, x) -> bool:
    def x_edges(face):
        vs = face.vertices
        n = len(vs)
        return {frozenset((vs[i], vs[(i + 1) % n])) for i in range(n) if x in (vs[i], vs[(i + 1) % n])}

    return bool(x_edges(f) & x_edges(h))


REQUIRED = {
    "R4": (None, "A3"),
    "R5": (None, ("A1", "A2")),
    "R6": ("B", "A2"),
    "R7": ("C", "A2"),
    "R8": ("D", "A2"),
    "R9": ("F", None),
    "R10": (None, "special"),
    "R11": (None, None),
}


def check_transfers(g: PlaneGraph, cls: FaceClassification, led: ChargeLedger) -> list[str]:
    """Every transfer amount is 1/3 or 1 and refers only to assigned labels."""
    errs = []
    for t in led.log:
        if t.amount not in (THIRD, ONE):
            errs.append(f"{t.rule}: amount {t.amount}")
        src_need, dst_need = REQUIRED.get(t.rule, (None, None))
        for key, need in ((t.source, src_need), (t.target, dst_need)):
            if need is None:
                continue
            kind, i = parse_key(key)
            opts = need if isinstance(need, tuple) else (need,)
            if kind != "f" or not any(cls.has(i, n) for n in opts):
                errs.append(f"{t.rule}: {key} lacks label {'/'.join(opts)}")
        if t.rule == "R6" and parse_key(t.target)[1] not in cls.tight:
            errs.append(f"R6: {t.target} is not tight")
        if t.rule == "R11" and parse_key(t.source)[1] not in cls.tied.get(parse_key(t.target)[1], ()):
            errs.append(f"R11: {t.target} is not tied to {t.source}")
    return errs


# -- audit ----------------------------------------------------------------------


def hypotheses(g: PlaneGraph, x: int | None) -> list[str]:
    """Global structural properties of a minimal counterexample that ``g`` lacks."""
    C = g.outer_vertices()
    out = []
    if not is_biconnected(g):
        out.append("2-connected")
    if any(f.length != 5 for f in g.inner_faces()):
        out.append("inner faces are 5-faces")
    if any(g.degree(v) < 2 or (g.degree(v) == 2 and v not in C and x not in g.neighbors(v))
           for v in g.vertices if v not in C):
        out.append("interior 2-vertices are adjacent to x")
    of = g.outer_face()
    if of is None or not of.is_cycle() or of.length > 5:
        out.append("outer face is a cycle of length at most 5")
    return out


def _local_configs(g: PlaneGraph, x: int | None) -> list[str]:
    from . import lemma_rules as LR

    C = g.outer_vertices()
    found = []
    if x is not None:
        for name, m in (("L233", LR.match_233), ("L232325", LR.match_232325), ("L232424", LR.match_232424),
                        ("L242324", LR.match_242324), ("L232523", LR.match_232523)):
            try:
                if m(g, C, x) is not None:
                    found.append(name)
            except ValueError:
                pass
    try:
        if LR.match_tie5(g, C, frozenset([x]) if x is not None else frozenset()) is not None:
            found.append("LTIE5")
    except ValueError:
        pass
    return found


def _bound(g, cls, key) -> tuple[str, str, Fraction] | None:
    """(lemma, relation, value) the element is held to, or None."""
    kind, i = parse_key(key)
    C, x = cls.cycle, cls.x
    if kind == "v":
        if i not in C:
            return "inter-vertex", ">=", Fraction(0)
        if i == x:
            return "C-vertex", "==", Fraction(-3)
        if g.degree(i) == 2:
            return "C-vertex", "==", Fraction(-5, 3)
        return "C-vertex", ">=", Fraction(2, 3) * (g.degree(i) - 5)
    if kind == "f" and i != cls.outer:
        if x is not None and x in g.faces()[i].vertices:
            return "inter-x-face", ">=", Fraction(0)
        return "interface", ">=", Fraction(0)
    return None


def audit(g: PlaneGraph, x: int | None = None, strict: bool = False) -> dict:
    """Final charges checked against the per-element lower bounds.

    The bounds are only promised for minimal counterexamples, so a violation
    is reported together with the structural hypotheses the input lacks and
    the reducible configurations it still contains.
    """
    cls = classify(g, x, strict=strict)
    led = apply_rules(g, cls)
    missing = hypotheses(g, cls.x)
    configs = _local_configs(g, cls.x)
    elements = {}
    violations = []
    for key in led.charge:
        ins, outs = led.flow(key)
        entry = {
            "ch0": str(led.initial[key]),
            "in": [[t.rule, t.source, str(t.amount)] for t in ins],
            "out": [[t.rule, t.target, str(t.amount)] for t in outs],
            "ch": str(led.charge[key]),
        }
        if key[0] == "f":
            entry["labels"] = sorted(cls.labels.get(parse_key(key)[1], ()))
        b = _bound(g, cls, key)
        if b is not None:
            lemma, rel, val = b
            ch = led.charge[key]
            ok = ch >= val if rel == ">=" else ch == val
            entry["bound"] = {"lemma": lemma, "relation": rel, "value": str(val), "ok": ok}
            if not ok:
                violations.append({"element": key, "lemma": lemma, "ch": str(ch), "bound": f"{rel} {val}",
                                   "hypotheses_failed": missing, "reducible": configs})
        elements[key] = entry
    return {
        "x": cls.x,
        "total": str(led.total),
        "initial_total": str(sum(led.initial.values(), Fraction(0))),
        "conserved": led.total == sum(led.initial.values(), Fraction(0)),
        "classification": cls.to_dict(),
        "transfer_problems": check_transfers(g, cls, led),
        "elements": elements,
        "violations": violations,
    }
