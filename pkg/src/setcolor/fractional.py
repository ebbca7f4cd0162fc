"""Exact fractional chromatic number by column generation.

The restricted problem is solved in its dual form (maximise the total vertex
weight subject to every known independent set weighing at most 1) with a
rational simplex that starts feasible at the slack basis.  New columns come
from an exact maximum weight independent set search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .plane_graph import Graph


# -- maximum weight independent set ---------------------------------------


def max_weight_independent_set(g: Graph, weights: Mapping[int, Fraction | int]) -> tuple[Fraction, frozenset]:
    """Exact MWIS by branch and bound over vertex bitmasks.

    Branches on the vertex of largest remaining degree; the bound is a
    greedy clique cover (sum of clique maxima).
    """
    verts = [v for v in g.vertices if weights.get(v, 0) > 0]
    if not verts:
        return Fraction(0), frozenset()
    den = 1
    for v in verts:
        den = math.lcm(den, Fraction(weights[v]).denominator)
    w = [int(Fraction(weights[v]) * den) for v in verts]
    pos = {v: i for i, v in enumerate(verts)}
    nbr = [0] * len(verts)
    for i, v in enumerate(verts):
        for u in g.neighbors(v):
            if u in pos:
                nbr[i] |= 1 << pos[u]
    by_weight = sorted(range(len(verts)), key=lambda i: (-w[i], i))

    def bound(p: int) -> int:
        cliques: list[tuple[int, int]] = []  # (member mask, max weight)
        total = 0
        for i in by_weight:
            if not p >> i & 1:
                continue
            bit = 1 << i
            for k, (members, top) in enumerate(cliques):
                if members & nbr[i] == members:
                    cliques[k] = (members | bit, top)
                    break
            else:
                cliques.append((bit, w[i]))
                total += w[i]
        return total

    best = [0, 0]

    def rec(p: int, cur: int, chosen: int) -> None:
        if cur > best[0]:
            best[0], best[1] = cur, chosen
        if not p or cur + bound(p) <= best[0]:
            return
        pick, pick_deg = -1, -1
        q = p
        while q:
            low = q & -q
            i = low.bit_length() - 1
            q ^= low
            d = bin(nbr[i] & p).count("1")
            if d > pick_deg:
                pick, pick_deg = i, d
        if pick_deg == 0:
            tot, q = 0, p
            while q:
                low = q & -q
                tot += w[low.bit_length() - 1]
                q ^= low
            if cur + tot > best[0]:
                best[0], best[1] = cur + tot, chosen | p
            return
        bit = 1 << pick
        rec(p & ~bit & ~nbr[pick], cur + w[pick], chosen | bit)
        rec(p & ~bit, cur, chosen)

    rec((1 << len(verts)) - 1, 0, 0)
    members = frozenset(verts[i] for i in range(len(verts)) if best[1] >> i & 1)
    return Fraction(best[0], den), members


def independence_number(g: Graph) -> int:
    return int(max_weight_independent_set(g, {v: 1 for v in g.vertices})[0])


def is_independent(g: Graph, s) -> bool:
    s = list(s)
    return all(not g.has_edge(u, v) for i, u in enumerate(s) for v in s[i + 1 :])


# -- rational simplex ------------------------------------------------------


class PackingLP:
    """max sum(y) s.t. sum_{j in row} y_j <= 1, y >= 0, kept as a live tableau.

    Starts optimal at the slack basis with one row per vertex (``y_v <= 1``);
    each :meth:`add_row` appends a constraint and restores optimality by
    dual simplex pivots.  Both pivot rules take the smallest eligible index
    among ties, so the sequence of bases is deterministic.

    Rows hold integer numerators over a per-row positive denominator, kept
    gcd-reduced, which is exact and much cheaper than Fraction entries.
    The objective row is row ``-1`` of the same structure; its right-hand
    side is the current value.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: list[list[int]] = []
        self.rhs: list[int] = []
        self.den: list[int] = []
        self.basis: list[int] = []
        self.obj: list[int] = [-1] * n
        self.obj_rhs = 0
        self.obj_den = 1
        for v in range(n):
            self.add_row([v], reoptimize=False)
        self._primal_simplex()

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def value(self) -> Fraction:
        return Fraction(self.obj_rhs, self.obj_den)

    @staticmethod
    def _eliminate(row, rhs, den, t, prow, prhs, pden):
        # row/den - (t/den) * prow/pden, gcd-reduced
        new = [a * pden - t * b for a, b in zip(row, prow)]
        nrhs = rhs * pden - t * prhs
        nden = den * pden
        g = math.gcd(nden, nrhs, *new)
        if g > 1:
            new = [a // g for a in new]
            nrhs //= g
            nden //= g
        return new, nrhs, nden

    def _pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        p = prow[c]
        prhs = self.rhs[r]
        if p < 0:
            prow = [-a for a in prow]
            prhs, p = -prhs, -p
        g = math.gcd(p, prhs, *prow)
        if g > 1:
            prow = [a // g for a in prow]
            prhs //= g
            p //= g
        self.rows[r], self.rhs[r], self.den[r] = prow, prhs, p
        for i, row in enumerate(self.rows):
            t = row[c]
            if i != r and t:
                self.rows[i], self.rhs[i], self.den[i] = self._eliminate(
                    row, self.rhs[i], self.den[i], t, prow, prhs, p
                )
        t = self.obj[c]
        if t:
            self.obj, self.obj_rhs, self.obj_den = self._eliminate(
                self.obj, self.obj_rhs, self.obj_den, t, prow, prhs, p
            )
        self.basis[r] = c

    def add_row(self, members: list[int], reoptimize: bool = True) -> None:
        for row in self.rows:
            row.append(0)
        self.obj.append(0)
        width = self.n + self.m + 1
        new = [0] * width
        for j in members:
            new[j] = 1
        new[-1] = 1
        rhs, den = 1, 1
        for i, b in enumerate(self.basis):
            t = new[b]
            if t:
                new, rhs, den = self._eliminate(new, rhs, den, t, self.rows[i], self.rhs[i], self.den[i])
        self.rows.append(new)
        self.rhs.append(rhs)
        self.den.append(den)
        self.basis.append(width - 1)
        if reoptimize:
            self._dual_simplex()
            self._primal_simplex()

    def _dual_simplex(self) -> None:
        while True:
            cand = [i for i in range(self.m) if self.rhs[i] < 0]
            if not cand:
                return
            r = min(cand, key=lambda i: self.basis[i])
            c, best = None, None
            for j, a in enumerate(self.rows[r]):
                if a < 0:
                    ratio = Fraction(self.obj[j], -a)
                    if best is None or ratio < best:
                        c, best = j, ratio
            if c is None:
                raise ArithmeticError("packing LP infeasible")
            self._pivot(r, c)

    def _primal_simplex(self) -> None:
        while True:
            c = next((j for j, x in enumerate(self.obj) if x < 0), None)
            if c is None:
                return
            r, best = None, None
            for i, row in enumerate(self.rows):
                a = row[c]
                if a > 0:
                    ratio = Fraction(self.rhs[i], a)
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[r]):
                        r, best = i, ratio
            if r is None:
                raise ArithmeticError("packing LP unbounded")
            self._pivot(r, c)

    def primal(self) -> list[Fraction]:
        y = [Fraction(0)] * self.n
        for i, b in enumerate(self.basis):
            if b < self.n:
                y[b] = Fraction(self.rhs[i], self.den[i])
        return y

    def multipliers(self) -> list[Fraction]:
        return [Fraction(self.obj[self.n + i], self.obj_den) for i in range(self.m)]


# -- column generation -----------------------------------------------------


@dataclass(frozen=True)
class FractionalResult:
    value: Fraction
    cover: tuple[tuple[frozenset, Fraction], ...]
    witness: Mapping[int, Fraction]
    columns: int

    def to_dict(self) -> dict:
        return {
            "chi_f": str(self.value),
            "cover": [{"set": sorted(s), "weight": str(w)} for s, w in self.cover],
            "witness": {str(v): str(y) for v, y in sorted(self.witness.items())},
            "columns": self.columns,
        }


def chi_f(g: Graph, max_columns: int = 100000) -> FractionalResult:
    """Fractional chromatic number with a primal cover and a dual witness."""
    verts = g.vertices
    if not verts:
        return FractionalResult(Fraction(0), (), {}, 0)
    pos = {v: i for i, v in enumerate(verts)}
    cols: list[frozenset] = [frozenset([v]) for v in verts]
    seen = set(cols)
    lp = PackingLP(len(verts))
    while True:
        y = lp.primal()
        weights = {v: y[pos[v]] for v in verts}
        wt, s = max_weight_independent_set(g, weights)
        if wt <= 1:
            break
        if s in seen or len(cols) >= max_columns:
            raise RuntimeError("column generation stalled")
        cols.append(s)
        seen.add(s)
        lp.add_row([pos[v] for v in s])
    value, x = lp.value, lp.multipliers()
    cover = tuple(sorted(
        ((c, xi) for c, xi in zip(cols, x) if xi),
        key=lambda t: (sorted(t[0]), t[1]),
    ))
    return FractionalResult(value, cover, {v: weights[v] for v in verts}, len(cols))


def check_certificate(g: Graph, res: FractionalResult) -> list[str]:
    """Re-check both sides of the optimality certificate; returns problems found."""
    errs = []
    if sum((w for _, w in res.cover), Fraction(0)) != res.value:
        errs.append("cover weights do not sum to the value")
    for s, w in res.cover:
        if w < 0:
            errs.append("negative cover weight")
        if not is_independent(g, s):
            errs.append(f"cover set {sorted(s)} is not independent")
    for v in g.vertices:
        if sum((w for s, w in res.cover if v in s), Fraction(0)) < 1:
            errs.append(f"vertex {v} is under-covered")
    if sum(res.witness.values(), Fraction(0)) != res.value:
        errs.append("witness does not sum to the value")
    if any(y < 0 for y in res.witness.values()):
        errs.append("negative witness weight")
    if max_weight_independent_set(g, res.witness)[0] > 1:
        errs.append("witness overloads an independent set")
    return errs


def ratio_bounds(g: Graph, max_b: int = 3, budget: int = 20000) -> tuple[Fraction, Fraction]:
    """Bracket ``n/alpha <= chi_f <= a/b`` with ``a/b`` from a found (a:b)-coloring.

    The upper end starts at a greedy proper colouring and is improved by
    searching (a:b)-colorings with ``b <= max_b`` below it; searches that hit
    ``budget`` are skipped.
    """
    from .set_coloring import BudgetExceeded, solve_ab

    n = g.num_vertices
    if n == 0:
        return Fraction(0), Fraction(0)
    lower = Fraction(n, independence_number(g))
    color: dict[int, int] = {}
    for v in sorted(g.vertices, key=lambda v: (-g.degree(v), v)):
        used = {color[u] for u in g.neighbors(v) if u in color}
        color[v] = next(c for c in range(n + 1) if c not in used)
    upper = Fraction(max(color.values()) + 1)
    for b in range(2, max_b + 1):
        a = -(-lower.numerator * b // lower.denominator)
        while Fraction(a, b) < upper:
            try:
                if solve_ab(g, a, b, budget) is not None:
                    upper = Fraction(a, b)
                    break
            except BudgetExceeded:
                pass
            a += 1
    return lower, upper
