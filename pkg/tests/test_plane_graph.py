import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setcolor import generators as G
from setcolor.plane_graph import (
    EmbeddingError,
    Graph,
    PlaneGraph,
    RewriteError,
    biconnected_components,
    girth,
    is_biconnected,
    is_triangle_free,
)


def to_nx(g: Graph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(g.vertices)
    H.add_edges_from(g.edges())
    return H


def face_lengths(g):
    return sorted(f.length for f in g.faces())


def check_embedding(g: PlaneGraph):
    # every dart lies on exactly one face; Euler per component; simple graph
    darts = [d for f in g.faces() for d in f.darts]
    assert len(darts) == len(set(darts)) == 2 * g.num_edges
    assert sum(f.length for f in g.faces()) == 2 * g.num_edges
    assert g.euler_ok()
    for v in g.vertices:
        assert v not in g.neighbors(v)
        assert len(set(g.rotation[v])) == len(g.rotation[v])


def test_faces_of_small_graphs():
    assert face_lengths(G.cycle(5)) == [5, 5]
    assert face_lengths(G.dodecahedron()) == [5] * 12
    assert face_lengths(G.path(2)) == [2]


def test_girth_examples():
    assert girth(G.cycle(5)) == 5
    assert girth(G.path(7)) == float("inf")
    assert girth(G.petersen()) == 5


def test_girth_matches_networkx_on_random_graphs():
    for seed in range(40):
        g = G.random_trifree_planar(random.Random(seed).randint(3, 20), seed)
        expected = nx.girth(to_nx(g))
        assert girth(g) == expected


def contract_copies(h: PlaneGraph, copies) -> nx.Graph:
    """Merge the split copies back into one vertex named ``-1``."""
    H = to_nx(h)
    keep = copies[0]
    for c in copies[1:]:
        H = nx.contracted_nodes(H, keep, c, self_loops=False)
    return nx.relabel_nodes(H, {keep: -1})


def test_split_degree_three():
    g = G.dodecahedron()
    h, cyc = g.split_vertex(0)
    assert len(cyc) == 6 and girth(h) >= 5
    check_embedding(h)
    copies = [v for v in cyc if v not in g.rotation]
    assert len(copies) == 3 and all(h.degree(c) == 2 for c in copies)
    assert nx.is_isomorphic(contract_copies(h, copies), to_nx(g))


def test_split_degree_two_pattern():
    g = G.cycle(6)
    h, cyc = g.split_vertex(0)
    n1, y1, n2, n3, y2 = cyc
    assert {y1, y2} == {1, 5}
    # y^1 y_1 y^2 y^3 y_2 closes up into a 5-cycle
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert h.has_edge(a, b)
    check_embedding(h)
    assert nx.is_isomorphic(contract_copies(h, [n1, n2, n3]), to_nx(g))


def test_split_low_degree_rejected():
    with pytest.raises(RewriteError):
        G.path(3).split_vertex(0)


def test_identify_across_four_face():
    g = G.cycle(4).with_outer(None)
    f = g.faces()[0]
    h = g.identify_vertices(0, 2, f)
    assert sorted(h.vertices) == [0, 1, 3]
    assert sorted(h.edges()) == [(0, 1), (0, 3)]
    check_embedding(h)


def test_identify_at_distance_three_makes_triangle():
    g = G.cycle(6).with_outer(None)
    h = g.identify_vertices(0, 3, g.faces()[0])
    check_embedding(h)
    assert not is_triangle_free(h)


def test_identify_refuses_outer_pair_and_adjacent():
    g = G.cycle(6)
    with pytest.raises(RewriteError):
        g.identify_vertices(0, 3, g.faces()[0])
    with pytest.raises(RewriteError):
        g.with_outer(None).identify_vertices(0, 1, 0)


def test_chords():
    c6 = G.cycle(6)
    h = c6.add_edge_in_face(0, 3, c6.faces()[0])
    assert face_lengths(h) == [4, 4, 6]
    check_embedding(h)
    c5 = G.cycle(5)
    h = c5.add_edge_in_face(0, 2, c5.outer_face())
    assert face_lengths(h) == [3, 4, 5]
    check_embedding(h)


def test_triangle_checks_and_deletion():
    assert is_triangle_free(G.cycle(5))
    assert not is_triangle_free(G.complete_graph(3))
    h = G.dodecahedron().delete_vertices([19])
    assert h.num_vertices == 19
    check_embedding(h)


def test_json_round_trip():
    g = G.wheel_subdivided(5).with_outer(G.wheel_subdivided(5).outer, [0])
    back = PlaneGraph.from_json(g.to_json())
    assert back == g
    assert back.x == {0}
    assert back.outer_face().vertices == g.outer_face().vertices


def test_malformed_documents():
    with pytest.raises(EmbeddingError):
        PlaneGraph.from_json("{not json")
    with pytest.raises(EmbeddingError):
        PlaneGraph.from_dict({"vertices": [0, 1]})
    with pytest.raises(EmbeddingError):
        PlaneGraph({0: [1, 1], 1: [0, 0]})
    with pytest.raises(EmbeddingError):
        PlaneGraph({0: [1], 1: [0], 2: []}, outer=(0, 2))
    with pytest.raises(EmbeddingError):
        PlaneGraph.from_dict({"vertices": [0, 1], "rotations": {"0": [1], "1": [0]}, "outer_face": [0]})


def test_bad_rotation_fails_euler():
    # K4 with a rotation that does not describe a plane drawing
    rot = {0: [1, 2, 3], 1: [0, 2, 3], 2: [0, 1, 3], 3: [0, 1, 2]}
    assert not PlaneGraph(rot).euler_ok()


def test_biconnectivity():
    assert is_biconnected(G.cycle(5))
    assert not is_biconnected(G.path(4))
    two_squares = {0: [1, 3], 1: [0, 2], 2: [1, 3, 4, 6], 3: [2, 0], 4: [2, 5], 5: [4, 6], 6: [5, 2]}
    blocks = biconnected_components(Graph(two_squares))
    assert sorted(sorted(b) for b in blocks) == [[0, 1, 2, 3], [2, 4, 5, 6]]


def test_relabel_keeps_faces():
    g = G.dodecahedron()
    mapping = {v: 100 + v for v in g.vertices}
    h = g.relabel(mapping)
    assert face_lengths(h) == face_lengths(g)
    assert [mapping[v] for v in g.outer_face().vertices] == list(h.outer_face().vertices)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(4, 18), seed=st.integers(0, 10**6), ops=st.lists(st.integers(0, 10**6), max_size=4))
def test_rewrites_preserve_embedding(n, seed, ops):
    g = G.random_trifree_planar(n, seed)
    check_embedding(g)
    rng = random.Random(seed)
    for op in ops:
        kind = op % 3
        if kind == 0:
            cands = [v for v in g.vertices if g.degree(v) >= 2]
            if cands:
                g, _ = g.split_vertex(rng.choice(cands))
        elif kind == 1:
            f = rng.choice(g.faces())
            g, _ = g.add_pendant(f.vertices[0], f)
        else:
            inner = [v for v in g.vertices if v not in g.outer_vertices()]
            if inner and g.num_vertices > 3:
                g = g.delete_vertices([rng.choice(inner)])
        check_embedding(g)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(5, 16), seed=st.integers(0, 10**6))
def test_split_preserves_girth_five(n, seed):
    g = G.pentagulation("patch", n % 4)
    v = sorted(g.vertices)[seed % g.num_vertices]
    h, _ = g.split_vertex(v)
    assert girth(h) >= 5
    assert json.loads(h.to_json())["vertices"] == h.vertices
