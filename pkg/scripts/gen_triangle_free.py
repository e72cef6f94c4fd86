#!/usr/bin/env python3
"""Generate the triangle-free graph corpus fixture (one-time repo tooling).

Enumerates all triangle-free graphs on 1..MAX_N vertices up to isomorphism
by vertex augmentation: a new vertex may attach to any independent set of a
smaller triangle-free graph (attaching to an edge would close a triangle).
Isomorphism rejection buckets by cheap invariants, then confirms with
networkx. Expected counts per n: 1, 2, 3, 7, 14, 38, 107, 410.

Usage: python3 scripts/gen_triangle_free.py [out.txt]
"""
import sys
from itertools import combinations

import networkx as nx
import numpy as np

MAX_N = 8
EXPECTED = {1: 1, 2: 2, 3: 3, 4: 7, 5: 14, 6: 38, 7: 107, 8: 410}


def independent_sets(g):
    nodes = list(g.nodes)
    for size in range(len(nodes) + 1):
        for sub in combinations(nodes, size):
            if not any(g.has_edge(u, v) for u, v in combinations(sub, 2)):
                yield sub


def invariant(g):
    degs = tuple(sorted(d for _, d in g.degree()))
    spec = np.linalg.eigvalsh(nx.to_numpy_array(g)) if g.number_of_nodes() else np.array([])
    return (g.number_of_nodes(), g.number_of_edges(), degs, tuple(np.round(spec, 8)))


def augment(level):
    buckets = {}
    out = []
    for g in level:
        for sub in independent_sets(g):
            h = g.copy()
            new = h.number_of_nodes()
            h.add_node(new)
            h.add_edges_from((new, u) for u in sub)
            key = invariant(h)
            known = buckets.setdefault(key, [])
            if any(nx.is_isomorphic(h, k) for k in known):
                continue
            known.append(h)
            out.append(h)
    return out


def main(out_path):
    levels = [[nx.Graph([(0, 0)]).subgraph([])]]  # placeholder, replaced below
    g1 = nx.Graph()
    g1.add_node(0)
    levels = [[g1]]
    for n in range(2, MAX_N + 1):
        levels.append(augment(levels[-1]))
    lines = []
    for n, level in enumerate(levels, start=1):
        count = len(level)
        if EXPECTED.get(n) != count:
            raise SystemExit(f"count mismatch at n={n}: got {count}, expected {EXPECTED.get(n)}")
        print(f"n={n}: {count} graphs")
        for g in level:
            edges = sorted(tuple(sorted(e)) for e in g.edges())
            parts = [str(n), str(len(edges))]
            for u, v in edges:
                parts += [str(u), str(v)]
            lines.append(" ".join(parts))
    with open(out_path, "w") as fh:
        fh.write("# all triangle-free graphs up to isomorphism, 1..8 vertices\n")
        fh.write("# format: n m u1 v1 u2 v2 ...\n")
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} graphs to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/triangle_free_upto8.txt")
