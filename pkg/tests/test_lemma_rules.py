import collections
import random

import pytest

import configs as K
from setcolor import generators as G
from setcolor import lemma_rules as LR
from setcolor.reduction_engine import Engine, make_instance, replay
from setcolor.set_coloring import SetColoring, solve, verify

RULES = {
    "L233": LR.l233,
    "L232325": LR.l232325,
    "L232424": LR.l232424,
    "L242324": LR.l242324,
    "L232523": LR.l232523,
    "LTIE5": LR.ltie5,
}

# fixture graph for each rule and the marked vertex to try (None: every outer vertex)
FIXTURES = {
    "L233": (lambda: K.expanded_pentagon(0), None),
    "L232325": (lambda: K.chord_fan(7, 1, 3, 2), 0),
    "L232424": (lambda: K.chord_fan(6, 1, 3, 2), 0),
    "L242324": (K.gadget_fan, 0),
    "L232523": (K.double_chord_fan, 0),
    "LTIE5": (lambda: G.pentagulation("fullerene", 1), None),
}


def rooted_matches(g, name, x=None):
    """(plane graph, x) pairs where ``name`` matches, over all short outer faces."""
    out = []
    for f in g.faces():
        if not f.is_cycle() or f.length not in (4, 5):
            continue
        h = g.with_outer(f.darts[0])
        for v in sorted(h.outer_vertices()) if x is None else [x]:
            if v not in h.outer_vertices():
                continue
            pre = K.precolorings(h, v, limit=1)[0]
            if RULES[name](make_instance(h, [v], pre)) is not None:
                out.append((h, v))
    return out


def lift(inst, red):
    sets, children, recipe, perm = red.run(Engine(threshold=6))
    if sets is None:
        return None, recipe
    return SetColoring(6, {v: sets[v] for v in inst.g.vertices}), recipe


def test_merge_keeps_the_boundary_vertex():
    g = K.expanded_pentagon(0)
    C = g.outer_vertices()
    x = min(C)
    inner = next(v for v in g.vertices if v not in C and not g.has_edge(v, x)
                 and any(x in f.vertices and v in f.vertices for f in g.inner_faces()))
    for a, b in ((x, inner), (inner, x)):
        h, keep, drop = LR.merge(g, C, a, b)
        assert keep == x and drop == inner and inner not in h.vertices


def test_merge_refuses_two_boundary_vertices():
    g = G.cycle(5)
    assert LR.merge(g, g.outer_vertices(), 0, 2) is None


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_each_rule_matches_its_fixture(name):
    build, x = FIXTURES[name]
    assert rooted_matches(build(), name, x)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_lifts_verify_or_decline(name):
    build, x = FIXTURES[name]
    recipes = collections.Counter()
    for h, v in rooted_matches(build(), name, x)[:3]:
        for pre in K.precolorings(h, v, limit=12, seed=len(recipes)):
            inst = make_instance(h, [v], pre)
            red = RULES[name](inst)
            col, recipe = lift(inst, red)
            if col is not None:
                assert verify(h, col, inst.spec()) == [], (name, recipe, pre)
                recipes[recipe] += 1
            else:
                # a declined lift is only acceptable when the instance is still colourable
                assert solve(h, inst.spec()) is not None
    assert recipes, name


def test_recipe_coverage():
    want = {"L233", "L232325-deg3", "L232325-deg4a", "L232325-deg4b", "L232424", "L242324-a",
            "SPE-SET-GADGET", "L232523-low", "edge-and-merge", "int123"}
    fans = [K.gadget_fan(), K.double_chord_fan(), K.chord_fan(7, 1, 3, 2), K.chord_fan(6, 1, 3, 2)]
    rooted = [(name, h, v) for g in fans for name in RULES for h, v in rooted_matches(g, name, 0)]
    rooted += [("L233", h, v) for h, v in rooted_matches(K.expanded_pentagon(0), "L233")[:2]]
    rooted += [("LTIE5", h, v) for h, v in rooted_matches(G.pentagulation("fullerene", 1), "LTIE5")[:2]]
    seen = set()
    for name, h, v in rooted:
        for pre in K.precolorings(h, v, limit=15, seed=3):
            inst = make_instance(h, [v], pre)
            col, recipe = lift(inst, RULES[name](inst))
            if col is not None and not verify(h, col, inst.spec()):
                seen.add(recipe)
    assert want <= seen, want - seen


def test_spoke_vertices_have_degree_two():
    # the L232325 lifts recolour v1 and v3; a spoke with more neighbours must not match
    for seed in range(60):
        rng = random.Random(seed)
        g = G.wheel_subdivided(rng.randint(5, 8))
        for _ in range(rng.randint(1, 3)):
            g = G.expand_face(g, rng.choice([f for f in g.inner_faces() if f.length == 5]), rng.randrange(5))
        for f in g.faces():
            if f.length != 5 or not f.is_cycle():
                continue
            h = g.with_outer(f.darts[0])
            C = h.outer_vertices()
            for x in C:
                got = LR.match_232325(h, C, x)
                if got is not None:
                    r = got[3]
                    assert all(h.degree(r[k]) == 2 and r[k] not in C for k in ("v1", "v2", "v3"))


def test_shared_corner_is_found():
    g = K.shared_corner_fan()
    C = g.outer_vertices()
    assert len(C) == 4
    roles = LR.match_232523(g, C, 0)[3]
    assert roles["u1"] == roles["u7"]
    for pre in K.precolorings(g, 0, limit=10):
        inst = make_instance(g, [0], pre)
        col, trace = Engine(threshold=0).extend(inst)
        assert verify(g, col, inst.spec()) == []
        assert replay(trace).sets == col.sets


def test_engine_reaches_lemma_rules():
    # subdivided wheels with their rim faces expanded, rooted at a face through the hub
    used = collections.Counter()
    for seed in range(120):
        rng = random.Random(seed)
        g = G.wheel_subdivided(rng.randint(5, 8))
        for _ in range(rng.randint(0, 3)):
            fs = [f for f in g.inner_faces() if f.length == 5 and 0 not in f.vertices]
            if not fs:
                break
            g = G.expand_face(g, rng.choice(fs), rng.randrange(5))
        g = g.with_outer(rng.choice(g.faces_at(0)).darts[0])
        pre = K.precolorings(g, 0, limit=1, seed=seed)[0]
        inst = make_instance(g, [0], pre)
        col, trace = Engine(threshold=4).extend(inst)
        assert verify(g, col, inst.spec()) == []
        assert replay(trace).sets == col.sets
        used.update(step.rule for step in trace.steps())
    assert used["L232325"] > 0, used
