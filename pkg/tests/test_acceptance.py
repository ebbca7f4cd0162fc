"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line."""

import itertools
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from corpus import frozen_corpus
from oracles import full_lp_chi_f
from setcolor import generators as G
from setcolor.composition import compose, power_color
from setcolor.discharging import apply_rules, initial_charges
from setcolor.fractional import chi_f
from setcolor.plane_graph import PlaneGraph, girth, is_triangle_free
from setcolor.reduction_engine import Engine, apply_perm, enhance, make_instance
from setcolor.set_coloring import (
    ColoringSpec,
    SetColoring,
    admissible_S,
    gadget_lists,
    gadget_spec,
    mask,
    path_extension,
    popcount,
    solve,
    spe_set_color,
    subsets,
    verify,
)

GOLDEN = Path(__file__).parent / "data" / "golden"


def plane_family_sample(count: int = 200, seed: int = 0):
    """Connected plane graphs on at most 30 vertices drawn from every family."""
    rng = random.Random(seed)
    fixed = [G.cycle(n) for n in (3, 4, 5, 8, 30)]
    fixed += [G.path(n) for n in (2, 3, 10, 30)]
    fixed += [G.wheel_subdivided(k) for k in (4, 5, 7, 9)]
    fixed += [G.pentagulation("dodecahedron")]
    fixed += [G.pentagulation("strip", m) for m in (1, 2, 5, 9)]
    fixed += [G.pentagulation("patch", k) for k in (0, 1, 4, 8)]
    fixed += [G.pentagulation("fullerene", k) for k in (1, 3)]
    out = list(fixed)
    while len(out) < count:
        out.append(G.random_trifree_planar(rng.randint(3, 30), rng.randrange(10**6)))
    return out


def test_criterion_01_charge_identity(criterion):
    graphs = plane_family_sample()
    t0 = time.perf_counter()
    bad = []
    for i, g in enumerate(graphs):
        assert g.is_connected() and g.num_vertices <= 30
        init = initial_charges(g)
        start = sum(init.initial.values(), Fraction(0))
        x = min(g.outer_vertices())
        final = apply_rules(g, x=x)
        if start != -8 or final.total != -8:
            bad.append((i, start, final.total))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    criterion(1, "charge totals are -8 before and after the rules", ok, f"{len(graphs)} graphs, {dt:.2f}s")
    assert not bad, bad[:3]
    assert dt < 5


def test_criterion_02_path_extension(criterion):
    t0 = time.perf_counter()
    path = G.path(3)  # x=0, u=1, v=2
    wrong = 0
    pairs = 0
    for px in subsets(mask(range(1, 7)), 3):
        for pv in subsets(mask(range(1, 7)), 2):
            pairs += 1
            found = solve(path, ColoringSpec(6, 2, exact={1: 2}, fixed={0: px, 2: pv})) is not None
            direct = path_extension(px, pv) is not None
            wrong += found != bool(px & pv) or direct != found
    dt = time.perf_counter() - t0
    ok = pairs == 300 and wrong == 0 and dt < 1
    criterion(2, "x-u-v extends iff the end sets meet", ok, f"{pairs} pairs, {dt:.3f}s")
    assert pairs == 300 and wrong == 0
    assert dt < 1


def test_criterion_03_gadget_lists(criterion):
    t0 = time.perf_counter()
    lists = gadget_lists()
    cases = failures = 0
    for L in lists:
        for S in admissible_S(L):
            cases += 1
            h, spec = gadget_spec(L, S)
            searched = solve(h, spec)
            _, phi = spe_set_color(L, S)
            built = SetColoring(6, {i: phi[n] for i, n in enumerate(("x", "v1", "u1", "v2", "u2", "v3", "u3",
                                                                    "w1", "w3", "y1"))})
            failures += searched is None or bool(verify(h, searched, spec)) or bool(verify(h, built, spec))
    dt = time.perf_counter() - t0
    ok = len(lists) == 270 and failures == 0 and dt < 120
    criterion(3, "every admissible gadget list assignment is colourable", ok,
              f"{len(lists)} assignments, {cases} (L,S) cases, {dt:.1f}s")
    assert len(lists) == 270 and failures == 0
    assert dt < 120


def test_criterion_04_enhance_everywhere(criterion):
    t0 = time.perf_counter()
    graphs = frozen_corpus(9)
    rng = random.Random(4)
    graphs += [G.random_trifree_planar(rng.randint(3, 14), rng.randrange(10**6)) for _ in range(200)]
    calls = failures = 0
    for g in graphs:
        assert is_triangle_free(g)
        for x in g.vertices:
            calls += 1
            col = enhance(g, x)
            spec = ColoringSpec.enhanced(X=[x])
            failures += col.palette != 6 or bool(verify(g, col, spec)) or col.size(x) != 3
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 600
    criterion(4, "enhance succeeds at every vertex", ok, f"{len(graphs)} graphs, {calls} vertices, {dt:.1f}s")
    assert failures == 0
    assert dt < 600


def _cycle_precolorings(xpos):
    """Enhanced colorings of a 5-cycle, one per orbit of the palette permutations."""
    tables = [[apply_perm(m, p) for m in range(64)] for p in itertools.permutations(range(1, 7))]
    sets = [m for m in range(64) if popcount(m) >= 2]
    found = []

    def rec(cur):
        i = len(cur)
        if i == 5:
            if not cur[-1] & cur[0]:
                found.append(tuple(cur))
            return
        for m in sets:
            if i == xpos and popcount(m) != 3:
                continue
            if i and m & cur[-1]:
                continue
            if i == 0 and m != (1 << popcount(m)) - 1:
                continue  # every orbit has a member starting with {1..k}
            rec(cur + [m])

    rec([])
    return sorted({min(tuple(t[m] for m in c) for t in tables) for c in found})


def test_criterion_05_precolored_patch(criterion):
    g = G.pentagulation("patch", 4)
    cyc = g.outer_face().vertices
    assert len(cyc) == 5 and g.num_vertices == 17
    cases = failures = 0
    for xpos in (None, 0, 1, 2, 3, 4):
        X = [] if xpos is None else [cyc[xpos]]
        for c in _cycle_precolorings(xpos):
            cases += 1
            pre = dict(zip(cyc, c))
            inst = make_instance(g, X, pre)
            col, _ = Engine().extend(inst)
            extended = not verify(g, col, inst.spec())
            exact = solve(g, ColoringSpec.enhanced(X=X, fixed=pre)) is not None
            failures += not (extended and exact)
    ok = failures == 0
    criterion(5, "every enhanced precoloring of the outer 5-cycle extends", ok,
              f"17-vertex patch, {cases} precolorings")
    assert failures == 0


def test_criterion_06_per_vertex_composition(criterion):
    g = G.random_trifree_planar(8, 3)
    res = compose(g, 1, per_vertex=True)
    col = res.coloring
    ok = (g.num_vertices == 8 and col.palette == 48 and not verify(g, col, ColoringSpec(48, 17))
          and min(col.size(v) for v in g.vertices) >= 17)
    criterion(6, "eight per-vertex enhancements give a (48:17)-coloring", ok,
              f"min size {min(col.size(v) for v in g.vertices)}")
    assert ok


def _small_corpus():
    graphs = [G.complete_graph(3), G.complete_graph(4), G.cycle(5), G.cycle(7), G.petersen(),
              G.wheel_subdivided(5), G.pentagulation("patch", 2), G.pentagulation("strip", 3)]
    graphs += [G.random_trifree_planar(n, s) for n in (10, 11, 12) for s in range(5)]
    return graphs + frozen_corpus(9)


def test_criterion_07_fractional_oracle(criterion):
    graphs = _small_corpus()
    mismatches = bound_failures = 0
    for g in graphs:
        assert g.num_vertices <= 12
        val = chi_f(g).value
        mismatches += val != full_lp_chi_f(g)
        if isinstance(g, PlaneGraph) and is_triangle_free(g):
            bound_failures += val > 3 - Fraction(3, 2 * g.num_vertices + 1)
    c5 = chi_f(G.cycle(5)).value
    k3 = chi_f(G.complete_graph(3)).value
    ok = mismatches == 0 and bound_failures == 0 and c5 == Fraction(5, 2) and k3 == 3
    criterion(7, "chi_f matches the full LP and the 3 - 3/(2n+1) bound", ok,
              f"{len(graphs)} graphs, C5={c5}, K3={k3}")
    assert ok


def test_criterion_08_subdivided_wheel(criterion):
    g = G.wheel_subdivided(5)
    t0 = time.perf_counter()
    six = solve(g, ColoringSpec(9, 3, exact={0: 6}))
    five = solve(g, ColoringSpec(9, 3, exact={0: 5}))
    dt = time.perf_counter() - t0
    ok = six is None and five is not None and not verify(g, five, ColoringSpec(9, 3, exact={0: 5}))
    criterion(8, "hub of the subdivided wheel gets at most 5 of 9 colours", ok,
              f"|hub|=6 unsat, |hub|=5 sat, {dt:.2f}s")
    assert ok


def test_criterion_09_girth5_pipeline(criterion):
    g = G.pentagulation("dodecahedron")
    assert girth(g) >= 5 and g.max_degree() == 3
    res = compose(g, 3)
    M = power_color(g, 3).M
    col = res.coloring
    ratio = Fraction(6 * M, 2 * M + 1)
    chi = chi_f(g).value
    ok = (res.classes.M == M and col.palette == 6 * M
          and not verify(g, col, ColoringSpec(6 * M, 2 * M + 1)) and ratio >= chi)
    criterion(9, "girth-5 pipeline gives a verified (6M:2M+1)-coloring", ok, f"M={M}, 6M/(2M+1)={ratio}, chi_f={chi}")
    assert ok


GOLDEN_COMMANDS = [
    ["chif", "--input", "c5.json"],
    ["chif", "--input", "random12.json"],
    ["solve", "--input", "dodecahedron.json", "--a", "5", "--b", "2"],
    ["solve", "--input", "wheel5.json", "--x", "0"],
    ["enhance", "--input", "wheel5.json", "--x", "0"],
    ["enhance", "--input", "random12.json", "--x", "3"],
    ["extend", "--input", "patch4_instance.json"],
    ["discharge", "--input", "patch2.json"],
    ["compose", "--input", "dodecahedron.json", "--s", "3"],
    ["generate", "--family", "random_trifree", "--n", "20", "--seed", "5"],
]


def test_criterion_10_thread_determinism(criterion):
    env = dict(os.environ)
    differing = []
    for cmd in GOLDEN_COMMANDS:
        outs = set()
        for threads in (1, 2, 4):
            p = subprocess.run([sys.executable, "-m", "setcolor", *cmd, "--threads", str(threads)],
                               cwd=GOLDEN, capture_output=True, env=env)
            outs.add((p.returncode, p.stdout))
        if len(outs) != 1:
            differing.append(cmd[0])
    ok = not differing
    criterion(10, "CLI output is byte-identical across --threads", ok, f"{len(GOLDEN_COMMANDS)} invocations x 3")
    assert ok, differing

