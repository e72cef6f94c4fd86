"""Two-distance sets as triangle-free graphs, and second-eigenvalue ranks.

An almost-equidistant set whose distances take only the values 1 and a > 1
turns into a graph with an edge per far pair; the triple condition makes
that graph triangle free. The rank of interest is n minus the multiplicity
of the second largest adjacency eigenvalue, tracked only when that
eigenvalue is positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .charpoly import eigen_multiplicities_exact
from .geometry import (
    EXACT_MODE,
    PointSet,
    Tolerance,
    _resolve_tol,
    is_almost_equidistant,
    squared_distance_matrix,
)

EXACT_RANK_LIMIT = 12


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset  # of (u, v) tuples with u < v

    def __post_init__(self) -> None:
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError("self loops are not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {e} out of range for {self.n} vertices")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        return cls(n=n, edges=frozenset((min(u, v), max(u, v)) for u, v in edges))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a


@dataclass(frozen=True)
class TriangleCheck:
    ok: bool
    witness: Optional[Tuple[int, int, int]]


def is_triangle_free(g: Graph) -> TriangleCheck:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    for u, v in sorted(g.edges):
        common = masks[u] & masks[v]
        if common:
            w = (common & -common).bit_length() - 1
            return TriangleCheck(False, tuple(sorted((u, v, w))))
    return TriangleCheck(True, None)


def two_distance_to_graph(s: PointSet, a: float, tol: Optional[Tolerance] = None) -> Graph:
    """Graph of far pairs of a two-distance almost-equidistant set.

    Distances must all be 1 or a (a > 1) at tolerance; far pairs become
    edges. Triangle freeness is asserted, never assumed.
    """
    tol = _resolve_tol(s, tol)
    if not a > 1:
        raise ValueError("second distance must exceed 1")
    check = is_almost_equidistant(s, tol)
    if not check.ok:
        raise ValueError(f"set is not almost-equidistant, witness triple {check.witness}")
    d2 = squared_distance_matrix(s)
    if s.mode == EXACT_MODE:
        d2 = np.array([[float(v) for v in row] for row in d2])
    slack = max(tol.dist_tol, 1e-15)
    far_sq = a * a
    edges = []
    for i in range(s.n):
        for j in range(i + 1, s.n):
            v = d2[i, j]
            if abs(v - 1.0) <= slack:
                continue
            if abs(v - far_sq) <= slack * max(1.0, far_sq):
                edges.append((i, j))
            else:
                raise ValueError(
                    f"pair ({i}, {j}) has squared distance {v:.12g}, neither 1 nor a^2"
                )
    g = Graph.from_edges(s.n, edges)
    tri = is_triangle_free(g)
    if not tri.ok:
        raise ValueError(f"far-pair graph contains triangle {tri.witness}")
    return g


@dataclass(frozen=True)
class GraphRankRecord:
    graph: Graph
    lambda2: float
    multiplicity: int
    rank: int  # n - multiplicity
    lambda2_positive: bool


def lambda2_rank(g: Graph, tol: Optional[Tolerance] = None, exact: bool = False) -> GraphRankRecord:
    """Second largest adjacency eigenvalue, its multiplicity, and the rank
    of A - lambda2 I.

    The float path clusters eigenvalues within eig_tol; with exact=True
    (n <= 12) the multiplicity is recomputed from the square-free
    decomposition of the exact characteristic polynomial.
    """
    tol = tol or Tolerance()
    if g.n < 2:
        raise ValueError("need at least 2 vertices for a second eigenvalue")
    eig_tol = tol.eig_tol if tol.eig_tol > 0 else 1e-8
    vals = np.linalg.eigvalsh(g.adjacency())[::-1]
    lam2 = float(vals[1])
    mult = int(np.sum(np.abs(vals - lam2) <= eig_tol))
    if exact:
        if g.n > EXACT_RANK_LIMIT:
            raise ValueError(f"exact mode supports at most {EXACT_RANK_LIMIT} vertices")
        roots = eigen_multiplicities_exact(g.adjacency().tolist())
        expanded: List[Tuple[float, int]] = []
        for val, m in roots:
            expanded.extend([(val, m)] * m)
        lam2_exact, mult = expanded[1]
        lam2 = float(lam2_exact)
    return GraphRankRecord(
        graph=g,
        lambda2=lam2,
        multiplicity=mult,
        rank=g.n - mult,
        lambda2_positive=lam2 > eig_tol,
    )


@dataclass(frozen=True)
class ScanResult:
    min_rank: Optional[int]
    argmin: Tuple[int, ...]  # indices into the input stream
    records: Tuple[Optional[GraphRankRecord], ...]  # None where lambda2 <= 0


def min_rank_scan(
    n: int,
    graphs: Sequence[Graph],
    tol: Optional[Tolerance] = None,
    exact: bool = False,
) -> ScanResult:
    """Minimum rank over triangle-free graphs on n vertices with a positive
    second eigenvalue. Rejects wrong sizes and non-triangle-free inputs by
    stream index; graphs with lambda2 <= 0 are recorded but not ranked."""
    best: Optional[int] = None
    argmin: List[int] = []
    records: List[Optional[GraphRankRecord]] = []
    for idx, g in enumerate(graphs):
        if g.n != n:
            raise ValueError(f"graph {idx} has {g.n} vertices, expected {n}")
        tri = is_triangle_free(g)
        if not tri.ok:
            raise ValueError(f"graph {idx} contains triangle {tri.witness}")
        rec = lambda2_rank(g, tol, exact=exact)
        records.append(rec)
        if not rec.lambda2_positive:
            continue
        if best is None or rec.rank < best:
            best = rec.rank
            argmin = [idx]
        elif rec.rank == best:
            argmin.append(idx)
    return ScanResult(min_rank=best, argmin=tuple(argmin), records=tuple(records))


def parse_graph_line(line: str) -> Graph:
    """One graph per line: n m u1 v1 u2 v2 ... (whitespace separated)."""
    parts = line.split()
    if len(parts) < 2:
        raise ValueError(f"malformed graph line: {line!r}")
    n, m = int(parts[0]), int(parts[1])
    if len(parts) != 2 + 2 * m:
        raise ValueError(
            f"graph line declares {m} edges but carries {(len(parts) - 2) // 2}"
        )
    it = iter(parts[2:])
    edges = [(int(u), int(v)) for u, v in zip(it, it)]
    return Graph.from_edges(n, edges)


def read_graph_file(path) -> List[Graph]:
    graphs = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            graphs.append(parse_graph_line(line))
    return graphs
