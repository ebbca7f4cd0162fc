import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setcolor import generators as G
from setcolor.composition import (
    ClassColoring,
    CompositionError,
    DistanceClasses,
    assemble,
    compose,
    degeneracy_order,
    enhance_class,
    power_color,
    power_edges,
    singleton_classes,
)
from setcolor.fractional import chi_f
from setcolor.plane_graph import Graph, PlaneGraph
from setcolor.set_coloring import ColoringSpec, SetColoring, verify


def test_power_edges_on_a_path():
    p = G.path(5)
    adj = power_edges(p, 3)
    assert adj[0] == {1, 2} and adj[2] == {0, 1, 3, 4}
    assert power_edges(p, 1) == {v: set() for v in p.vertices}


def test_degeneracy_order_of_a_star():
    star = {0: {1, 2, 3}, 1: {0}, 2: {0}, 3: {0}}
    order = degeneracy_order(star)
    assert sorted(order) == [0, 1, 2, 3]
    # leaves go first in removal, so they come last in colouring order
    assert order[-1] == 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(3, 18), s=st.integers(1, 4))
def test_power_color_certificate(seed, n, s):
    g = G.random_trifree_planar(n, seed)
    dc = power_color(g, s)
    assert dc.certificate(g) == []
    assert dc.M <= 1 + max(len(a) for a in power_edges(g, s).values())


def test_s_one_is_a_single_class():
    g = G.dodecahedron()
    assert power_color(g, 1).M == 1


def test_certificate_catches_close_members():
    c5 = G.cycle(5)
    bad = DistanceClasses(3, ((0, 2), (1,), (3,), (4,)))
    assert any("distance" in e for e in bad.certificate(c5))
    short = DistanceClasses(3, ((0,), (1,)))
    assert any("partition" in e for e in short.certificate(c5))


def test_enhance_class_methods():
    g = G.dodecahedron()
    one = enhance_class(g, [0])
    assert one.method == "single"
    far = power_color(g, 3).classes[0]
    many = enhance_class(g, far)
    assert many.method in ("split", "direct")
    assert verify(g, many.coloring, ColoringSpec.enhanced(X=far)) == []
    plain = Graph({v: g.neighbors(v) for v in g.vertices})
    assert enhance_class(plain, far).method == "direct"


def test_enhance_class_rejects_impossible_members():
    # in K4 the other three vertices use all six colours
    k4 = G.complete_graph(4)
    with pytest.raises(CompositionError):
        enhance_class(k4, [0])


def test_assemble_checks_its_inputs():
    c5 = G.cycle(5)
    dc = singleton_classes(c5)
    parts = [enhance_class(c5, cls) for cls in dc.classes]
    out = assemble(c5, dc, parts)
    assert out.palette == 30 and min(out.size(v) for v in c5.vertices) >= 11
    with pytest.raises(CompositionError):
        assemble(c5, dc, parts[::-1])
    broken = ClassColoring(parts[0].members, SetColoring.from_lists(6, {v: [1, 2] for v in c5.vertices}), "x")
    with pytest.raises(CompositionError):
        assemble(c5, dc, [broken] + parts[1:])


def test_compose_dodecahedron():
    res = compose(G.dodecahedron(), 3)
    assert res.ratio == Fraction(6 * res.classes.M, 2 * res.classes.M + 1)
    assert res.ratio >= chi_f(G.dodecahedron()).value
    assert res.report["verified"] and res.report["min_cardinality"] >= 2 * res.classes.M + 1


def test_compose_long_cycle():
    c10 = G.cycle(10)
    res = compose(c10, 3)
    need = 2 * res.classes.M + 1
    assert verify(c10, res.coloring, ColoringSpec(6 * res.classes.M, need)) == []


def test_compose_requires_girth_five():
    with pytest.raises(CompositionError):
        compose(G.cycle(4), 3)


def test_per_vertex_requires_triangle_free():
    tri = PlaneGraph({0: [1, 2], 1: [2, 0], 2: [0, 1]}, outer=(0, 1))
    with pytest.raises(CompositionError):
        compose(tri, 1, per_vertex=True)
    res = compose(G.cycle(4), 1, per_vertex=True)
    assert res.classes.M == 4 and res.ratio == Fraction(24, 9)


def test_per_vertex_on_random_graphs():
    for seed in range(5):
        g = G.random_trifree_planar(random.Random(seed).randint(3, 7), seed)
        res = compose(g, 1, per_vertex=True)
        n = g.num_vertices
        assert verify(g, res.coloring, ColoringSpec(6 * n, 2 * n + 1)) == []
