"""Graph corpora shared by the tests.

The exhaustive corpus grows triangle-free graphs one vertex at a time:
every triangle-free graph on n+1 vertices is a triangle-free graph on n
vertices plus a vertex joined to an independent set.  Isomorphs are
removed with networkx, and networkx's planarity test supplies the
embedding.  Planarity is hereditary, so non-planar graphs are pruned.
"""

from __future__ import annotations

import functools
import itertools

import networkx as nx

from setcolor.plane_graph import PlaneGraph


def _independent_sets(G: nx.Graph):
    nodes = sorted(G)
    for r in range(len(nodes) + 1):
        for S in itertools.combinations(nodes, r):
            if not any(G.has_edge(u, v) for u, v in itertools.combinations(S, 2)):
                yield S


def _dedup(graphs):
    buckets: dict[str, list[nx.Graph]] = {}
    for G in graphs:
        key = nx.weisfeiler_lehman_graph_hash(G, iterations=3)
        bucket = buckets.setdefault(key, [])
        if not any(nx.is_isomorphic(G, H) for H in bucket):
            bucket.append(G)
    return [G for b in buckets.values() for G in b]


@functools.lru_cache(maxsize=None)
def triangle_free_graphs(n: int, planar: bool = True) -> tuple:
    """All triangle-free graphs on ``n`` vertices up to isomorphism."""
    if n == 1:
        G = nx.Graph()
        G.add_node(0)
        return (G,)
    out = []
    for G in triangle_free_graphs(n - 1, planar):
        for S in _independent_sets(G):
            H = G.copy()
            H.add_node(n - 1)
            H.add_edges_from((n - 1, s) for s in S)
            if planar and not nx.check_planarity(H)[0]:
                continue
            out.append(H)
    return tuple(_dedup(out))


def embed(G: nx.Graph) -> PlaneGraph:
    """A plane embedding of ``G`` from networkx (rotations turned counter-clockwise)."""
    ok, emb = nx.check_planarity(G)
    assert ok
    rot = {v: list(reversed(list(emb.neighbors_cw_order(v)))) for v in G}
    dart = next(((u, v) for u, v in sorted(G.edges())), None)
    return PlaneGraph(rot, outer=dart)


def exhaustive_corpus(max_n: int = 9) -> list[PlaneGraph]:
    return [embed(G) for n in range(1, max_n + 1) for G in triangle_free_graphs(n)]


FROZEN = __import__("pathlib").Path(__file__).with_name("data") / "trifree_planar_n9.g6"


def freeze(max_n: int = 9) -> None:
    FROZEN.parent.mkdir(exist_ok=True)
    with FROZEN.open("wb") as fh:
        for n in range(1, max_n + 1):
            for G in triangle_free_graphs(n):
                fh.write(nx.to_graph6_bytes(G, header=False))


@functools.lru_cache(maxsize=None)
def frozen_graphs() -> tuple:
    lines = FROZEN.read_bytes().split()
    return tuple(nx.from_graph6_bytes(line) for line in lines)


def frozen_corpus(max_n: int = 9) -> list[PlaneGraph]:
    return [embed(G) for G in frozen_graphs() if G.number_of_nodes() <= max_n]


if __name__ == "__main__":
    freeze()
