import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import alpha_brute, full_lp_chi_f, independent_sets
from setcolor import generators as G
from setcolor.fractional import (
    PackingLP,
    check_certificate,
    chi_f,
    independence_number,
    is_independent,
    max_weight_independent_set,
    ratio_bounds,
)
from setcolor.plane_graph import Graph


def test_alpha_examples():
    assert independence_number(G.cycle(5)) == 2
    assert independence_number(G.petersen()) == 4 == alpha_brute(G.petersen())


def test_weighted_c5():
    # weights 3,1,1,1,1 around the cycle: vertex 0 plus one of 2, 3
    wt, s = max_weight_independent_set(G.cycle(5), {0: 3, 1: 1, 2: 1, 3: 1, 4: 1})
    assert wt == 4 and 0 in s and len(s) == 2 and is_independent(G.cycle(5), s)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(3, 12))
def test_mwis_matches_enumeration(seed, n):
    rng = random.Random(seed)
    g = G.random_trifree_planar(n, seed)
    w = {v: Fraction(rng.randint(0, 9), rng.randint(1, 4)) for v in g.vertices}
    vs = sorted(g.vertices)
    best = max(sum((w[vs[i]] for i in range(n) if s >> i & 1), Fraction(0)) for s in independent_sets(g))
    wt, s = max_weight_independent_set(g, w)
    assert wt == best
    assert is_independent(g, s) and sum((w[v] for v in s), Fraction(0)) == wt


def test_small_values():
    assert chi_f(G.complete_graph(3)).value == 3
    assert chi_f(G.cycle(5)).value == Fraction(5, 2) == full_lp_chi_f(G.cycle(5))
    assert chi_f(G.cycle(7)).value == Fraction(7, 3)
    assert chi_f(G.petersen()).value == Fraction(5, 2)
    assert chi_f(Graph({0: []})).value == 1
    assert chi_f(Graph({})).value == 0


def test_c5_has_eleven_independent_sets():
    assert len(independent_sets(G.cycle(5))) == 10  # plus the empty set


def test_certificates_check():
    for g in (G.cycle(5), G.petersen(), G.dodecahedron(), G.wheel_subdivided(5)):
        res = chi_f(g)
        assert check_certificate(g, res) == []
        assert sum(res.witness.values()) == res.value == sum(w for _, w in res.cover)


def test_broken_certificate_is_caught():
    g = G.cycle(5)
    res = chi_f(g)
    forged = type(res)(res.value - Fraction(1, 10), res.cover, res.witness, res.columns)
    assert check_certificate(g, forged)
    bad_cover = type(res)(res.value, ((frozenset([0, 1]), res.value),), res.witness, res.columns)
    assert any("independent" in e for e in check_certificate(g, bad_cover))


def test_upper_bound_for_triangle_free_planar():
    for seed in range(30):
        g = G.random_trifree_planar(random.Random(seed).randint(3, 12), seed)
        assert chi_f(g).value <= 3 - Fraction(3, 2 * g.num_vertices + 1)


def test_ratio_bounds():
    assert ratio_bounds(G.cycle(5)) == (Fraction(5, 2), Fraction(5, 2))
    assert ratio_bounds(G.jones_like(5))[0] == Fraction(3 * 5, 5 + 1)
    for seed in range(20):
        g = G.random_trifree_planar(random.Random(seed).randint(3, 12), seed)
        lo, hi = ratio_bounds(g)
        assert lo <= chi_f(g).value <= hi


def test_vertex_transitive_equality():
    for g in (G.cycle(5), G.petersen()):
        assert chi_f(g).value == Fraction(g.num_vertices, independence_number(g))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(4, 12))
def test_subgraph_monotone(seed, n):
    g = G.random_trifree_planar(n, seed)
    rng = random.Random(seed)
    keep = [v for v in g.vertices if rng.random() < 0.7] or g.vertices[:1]
    assert chi_f(g.subgraph(keep)).value <= chi_f(g).value


def test_packing_lp_two_rows():
    # maximise y0 + y1 + y2 with y0 + y1 <= 1, y1 + y2 <= 1, y_i <= 1 singletons
    lp = PackingLP(3)
    lp.add_row([0, 1])
    lp.add_row([1, 2])
    assert lp.value == 2
    assert sum(lp.primal()) == 2
